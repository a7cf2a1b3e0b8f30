//! Experiment configuration: an INI file with `[experiment]`, `[problem]`,
//! `[sweep]`, `[shoot]`, `[phase]` and `[profile]` sections. The grammar is
//! described in the README.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use halfline_core::{DatumSpec, DomainPolicy, ProblemSpec, ReactionSupport, SolverTolerances};
use ini::Ini;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    RegimeMap,
    GrowUpRate,
    BlowUpRate,
    BlowUpSet,
    AlphaStar,
    LambdaLaws,
    PhasePortrait,
    Profile,
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::RegimeMap,
        Preset::GrowUpRate,
        Preset::BlowUpRate,
        Preset::BlowUpSet,
        Preset::AlphaStar,
        Preset::LambdaLaws,
        Preset::PhasePortrait,
        Preset::Profile,
        Preset::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::RegimeMap => "regime-map",
            Preset::GrowUpRate => "guprate",
            Preset::BlowUpRate => "buprate",
            Preset::BlowUpSet => "bupset",
            Preset::AlphaStar => "alpha-star",
            Preset::LambdaLaws => "lambda-laws",
            Preset::PhasePortrait => "phase-portrait",
            Preset::Profile => "profile",
            Preset::Custom => "custom",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s.trim()).ok_or_else(|| {
            let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            CliError::Config(format!("unknown preset '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

fn parse_f64(key: &str, v: &str) -> CliResult<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Config(format!("{key}: '{v}' is not a number")))
}

fn parse_bool(key: &str, v: &str) -> CliResult<bool> {
    match v.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: '{v}' is not a boolean"))),
    }
}

fn parse_list(key: &str, v: &str) -> CliResult<Vec<f64>> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_f64(key, s))
        .collect()
}

fn parse_support(v: &str) -> CliResult<ReactionSupport> {
    let v = v.trim();
    match v {
        "halfline" | "half-line" => Ok(ReactionSupport::HalfLine),
        "global" => Ok(ReactionSupport::Global),
        "none" => Ok(ReactionSupport::None),
        _ => match v.strip_prefix("interval:") {
            Some(l) => Ok(ReactionSupport::Interval(parse_f64("support", l)?)),
            None => Err(CliError::Config(format!(
                "support: '{v}' (expected halfline, global, none or interval:L)"
            ))),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatumKind {
    Bump,
    PowerTail,
    LogTail,
    Uniform,
    Barenblatt,
}

impl FromStr for DatumKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "bump" => Ok(DatumKind::Bump),
            "power-tail" => Ok(DatumKind::PowerTail),
            "log-tail" => Ok(DatumKind::LogTail),
            "uniform" => Ok(DatumKind::Uniform),
            "barenblatt" => Ok(DatumKind::Barenblatt),
            _ => Err(CliError::Config(format!(
                "datum: '{s}' (expected bump, power-tail, log-tail, uniform or barenblatt)"
            ))),
        }
    }
}

/// The `[problem]` section. Every key can also be swept.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub m: f64,
    pub p: f64,
    pub support: ReactionSupport,
    pub datum: DatumKind,
    pub center: f64,
    pub width: f64,
    pub height: f64,
    pub floor: f64,
    pub gamma: f64,
    pub scale: f64,
    /// Time and constant of a Barenblatt datum.
    pub barenblatt_t: f64,
    pub barenblatt_d: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub expand: bool,
    pub max_nodes: usize,
    pub max_time: f64,
    pub blowup_threshold: f64,
    pub cfl: f64,
    pub probes: Vec<f64>,
    /// Extra probes drawn uniformly in the initial window from the seed.
    pub random_probes: usize,
    /// Keys set from a file, a flag or a sweep, which preset rules leave alone.
    pub explicit: BTreeSet<String>,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        let tol = SolverTolerances::default();
        ProblemConfig {
            m: 1.0,
            p: 2.0,
            support: ReactionSupport::HalfLine,
            datum: DatumKind::Bump,
            center: 0.0,
            width: 2.0,
            height: 1.0,
            floor: 0.0,
            gamma: 2.0,
            scale: 1.0,
            barenblatt_t: 1.0,
            barenblatt_d: 1.0,
            x_min: -20.0,
            x_max: 20.0,
            dx: 0.1,
            expand: true,
            max_nodes: 4000,
            max_time: tol.max_time,
            blowup_threshold: tol.blowup_threshold,
            cfl: tol.cfl_safety,
            probes: vec![-1.0, 0.0, 1.0],
            random_probes: 0,
            explicit: BTreeSet::new(),
        }
    }
}

/// Keys accepted by [`ProblemConfig::set`], in sweep order.
pub const PROBLEM_KEYS: [&str; 22] = [
    "m",
    "p",
    "support",
    "datum",
    "center",
    "width",
    "height",
    "floor",
    "gamma",
    "scale",
    "barenblatt_t",
    "barenblatt_d",
    "x_min",
    "x_max",
    "dx",
    "expand",
    "max_nodes",
    "max_time",
    "blowup_threshold",
    "cfl",
    "probes",
    "random_probes",
];

impl ProblemConfig {
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let f = |v: &str| parse_f64(key, v);
        match key {
            "m" => self.m = f(value)?,
            "p" => self.p = f(value)?,
            "support" => self.support = parse_support(value)?,
            "datum" => self.datum = value.parse()?,
            "center" => self.center = f(value)?,
            "width" => self.width = f(value)?,
            "height" => self.height = f(value)?,
            "floor" => self.floor = f(value)?,
            "gamma" => self.gamma = f(value)?,
            "scale" => self.scale = f(value)?,
            "barenblatt_t" => self.barenblatt_t = f(value)?,
            "barenblatt_d" => self.barenblatt_d = f(value)?,
            "x_min" => self.x_min = f(value)?,
            "x_max" => self.x_max = f(value)?,
            "dx" => self.dx = f(value)?,
            "expand" => self.expand = parse_bool(key, value)?,
            "max_nodes" => {
                self.max_nodes = value
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("max_nodes: '{value}' is not an integer")))?
            }
            "max_time" | "tmax" => self.max_time = f(value)?,
            "blowup_threshold" => self.blowup_threshold = f(value)?,
            "cfl" => self.cfl = f(value)?,
            "probes" => self.probes = parse_list(key, value)?,
            "random_probes" => {
                self.random_probes = value
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("random_probes: '{value}' is not an integer")))?
            }
            _ => return Err(CliError::Config(format!("unknown problem key '{key}'"))),
        }
        let key = if key == "tmax" { "max_time" } else { key };
        self.explicit.insert(key.to_string());
        Ok(())
    }

    pub fn datum_spec(&self) -> DatumSpec {
        match self.datum {
            DatumKind::Bump => DatumSpec::CompactBump {
                center: self.center,
                width: self.width,
                height: self.height,
                floor: self.floor,
            },
            DatumKind::PowerTail => DatumSpec::PowerTail {
                gamma: self.gamma,
                scale: self.scale,
            },
            DatumKind::LogTail => DatumSpec::LogCorrectedTail {
                m: self.m,
                scale: self.scale,
            },
            DatumKind::Uniform => DatumSpec::Uniform { height: self.height },
            DatumKind::Barenblatt => DatumSpec::Barenblatt {
                m: self.m,
                t: self.barenblatt_t,
                d: self.barenblatt_d,
            },
        }
    }

    /// Builds and validates the solver problem.
    pub fn to_spec(&self, seed: u64) -> CliResult<ProblemSpec> {
        let domain = DomainPolicy {
            x_min: self.x_min,
            x_max: self.x_max,
            dx: self.dx,
            expand: self.expand,
            max_nodes: self.max_nodes,
            coarsen: true,
        };
        let tolerances = SolverTolerances {
            cfl_safety: self.cfl,
            blowup_threshold: self.blowup_threshold,
            max_time: self.max_time,
            ..SolverTolerances::default()
        };
        let mut probes = self.probes.clone();
        if self.random_probes > 0 {
            let mut rng = StdRng::seed_from_u64(seed);
            for _ in 0..self.random_probes {
                probes.push(rng.random_range(self.x_min..self.x_max));
            }
        }
        let spec = ProblemSpec::new(self.m, self.p, self.support, self.datum_spec(), domain)
            .with_tolerances(tolerances)
            .with_probes(probes);
        spec.validate()?;
        Ok(spec)
    }
}

/// A sweep value: a literal or `m+k`, resolved once `m` is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepValue {
    Literal(f64),
    MPlus(f64),
}

impl SweepValue {
    pub fn resolve(self, m: f64) -> f64 {
        match self {
            SweepValue::Literal(v) => v,
            SweepValue::MPlus(k) => m + k,
        }
    }

    fn parse(key: &str, s: &str) -> CliResult<Self> {
        let s = s.trim();
        match s.strip_prefix('m') {
            Some("") => Ok(SweepValue::MPlus(0.0)),
            Some(rest) => {
                let rest = rest.trim();
                let k = match rest.strip_prefix('+') {
                    Some(k) => parse_f64(key, k)?,
                    None => match rest.strip_prefix('-') {
                        Some(k) => -parse_f64(key, k)?,
                        None => return Err(CliError::Config(format!("{key}: cannot parse '{s}'"))),
                    },
                };
                Ok(SweepValue::MPlus(k))
            }
            None => Ok(SweepValue::Literal(parse_f64(key, s)?)),
        }
    }
}

/// One swept axis: a `[problem]` key and its values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<SweepValue>,
}

/// Cartesian product of axes; a `bump = h x w, ...` axis sets height and
/// width together.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepConfig {
    pub axes: Vec<SweepAxis>,
    pub bumps: Vec<(f64, f64)>,
}

/// One point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub index: usize,
    /// `(key, value)` in axis order, values already resolved.
    pub values: Vec<(String, f64)>,
    pub bump: Option<(f64, f64)>,
}

impl SweepCell {
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if let Some((h, w)) = self.bump {
            parts.push(format!("bump={h}x{w}"));
        }
        parts.join(" ")
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    pub fn apply(&self, base: &ProblemConfig) -> CliResult<ProblemConfig> {
        let mut cfg = base.clone();
        for (k, v) in &self.values {
            cfg.set(k, &v.to_string())?;
        }
        if let Some((h, w)) = self.bump {
            cfg.height = h;
            cfg.width = w;
        }
        Ok(cfg)
    }
}

impl SweepConfig {
    pub fn is_empty(&self) -> bool {
        self.axes.is_empty() && self.bumps.is_empty()
    }

    /// Cells in row-major order over the axes (`m` first when present, so
    /// `m+k` values resolve), bumps varying fastest.
    pub fn cells(&self, base: &ProblemConfig) -> Vec<SweepCell> {
        let mut cells = vec![SweepCell {
            index: 0,
            values: Vec::new(),
            bump: None,
        }];
        for axis in &self.axes {
            let mut next = Vec::with_capacity(cells.len() * axis.values.len());
            for c in &cells {
                let m = c.get("m").unwrap_or(base.m);
                for v in &axis.values {
                    let mut c = c.clone();
                    c.values.push((axis.key.clone(), v.resolve(m)));
                    next.push(c);
                }
            }
            cells = next;
        }
        if !self.bumps.is_empty() {
            cells = cells
                .into_iter()
                .flat_map(|c| {
                    self.bumps.iter().map(move |&b| SweepCell {
                        bump: Some(b),
                        ..c.clone()
                    })
                })
                .collect();
        }
        for (i, c) in cells.iter_mut().enumerate() {
            c.index = i;
        }
        cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseVariant {
    Psi,
    Phi,
}

/// `[shoot]`: shooting problems for `lambda+`, `lambda-` and `alpha*`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootConfig {
    pub m: Option<f64>,
    pub alphas: Vec<f64>,
    /// Points of the mismatch scan.
    pub scan_points: usize,
}

/// `[phase]`: orbits of the planar system.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig {
    pub alpha: Option<f64>,
    pub variant: PhaseVariant,
    pub kappas: Vec<f64>,
    pub eta_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileChoice {
    Psi,
    Phi,
    BlowUpSub,
    BlowUpOuter,
}

/// `[profile]`: one self-similar profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileConfig {
    pub kind: ProfileChoice,
    pub alpha: Option<f64>,
    /// `lambda`, `mu` or the outer slope; found by shooting when absent.
    pub shoot: Option<f64>,
    pub xi_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub problem: ProblemConfig,
    pub sweep: Option<SweepConfig>,
    pub shoot: ShootConfig,
    pub phase: PhaseConfig,
    pub profile: ProfileConfig,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub jobs: usize,
    /// Relative tolerance overriding the per-check defaults.
    pub tolerance: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(preset: Preset) -> Self {
        ExperimentConfig {
            preset,
            problem: ProblemConfig::default(),
            sweep: None,
            shoot: ShootConfig {
                m: None,
                alphas: vec![0.1, 0.2, 0.4],
                scan_points: 20,
            },
            phase: PhaseConfig {
                alpha: None,
                variant: PhaseVariant::Psi,
                kappas: vec![0.01, 0.1, 0.3, 1.0, 3.0],
                eta_max: 60.0,
            },
            profile: ProfileConfig {
                kind: ProfileChoice::Psi,
                alpha: None,
                shoot: None,
                xi_max: 50.0,
            },
            output_dir: PathBuf::from("out").join(preset.name()),
            seed: 0,
            jobs: 0,
            tolerance: None,
        }
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let ini = Ini::load_from_str_noescape(text).map_err(|e| CliError::Config(e.to_string()))?;
        for (section, _) in ini.iter() {
            if let Some(s) = section {
                if !["experiment", "problem", "sweep", "shoot", "phase", "profile"].contains(&s) {
                    return Err(CliError::Config(format!("unknown section [{s}]")));
                }
            } else if !ini.general_section().is_empty() {
                return Err(CliError::Config("keys outside any section".into()));
            }
        }
        let preset: Preset = ini.get_from(Some("experiment"), "preset").unwrap_or("custom").parse()?;
        let mut cfg = ExperimentConfig::new(preset);
        if let Some(sec) = ini.section(Some("experiment")) {
            for (k, v) in sec.iter() {
                match k {
                    "preset" => {}
                    "output_dir" => cfg.output_dir = PathBuf::from(v.trim()),
                    "seed" => {
                        cfg.seed = v
                            .trim()
                            .parse()
                            .map_err(|_| CliError::Config(format!("seed: '{v}' is not an integer")))?
                    }
                    "jobs" => {
                        cfg.jobs = v
                            .trim()
                            .parse()
                            .map_err(|_| CliError::Config(format!("jobs: '{v}' is not an integer")))?
                    }
                    "tolerance" => cfg.tolerance = Some(parse_f64(k, v)?),
                    _ => return Err(CliError::Config(format!("unknown experiment key '{k}'"))),
                }
            }
        }
        cfg.apply_preset_defaults();
        if let Some(sec) = ini.section(Some("problem")) {
            for (k, v) in sec.iter() {
                cfg.problem.set(k, v)?;
            }
        }
        if let Some(sec) = ini.section(Some("sweep")) {
            let mut sweep = SweepConfig::default();
            for (k, v) in sec.iter() {
                if k == "bump" {
                    sweep.bumps = parse_bumps(v)?;
                    continue;
                }
                if !PROBLEM_KEYS.contains(&k) || matches!(k, "support" | "datum" | "probes" | "expand") {
                    return Err(CliError::Config(format!("'{k}' cannot be swept")));
                }
                let values = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| SweepValue::parse(k, s))
                    .collect::<CliResult<Vec<_>>>()?;
                sweep.axes.push(SweepAxis {
                    key: k.to_string(),
                    values,
                });
            }
            // `m` first so that `m+k` entries of later axes can resolve.
            sweep.axes.sort_by_key(|a| a.key != "m");
            cfg.sweep = Some(sweep);
        }
        if let Some(sec) = ini.section(Some("shoot")) {
            for (k, v) in sec.iter() {
                match k {
                    "m" => cfg.shoot.m = Some(parse_f64(k, v)?),
                    "alpha" => cfg.shoot.alphas = parse_list(k, v)?,
                    "scan_points" => {
                        cfg.shoot.scan_points = v
                            .trim()
                            .parse()
                            .map_err(|_| CliError::Config(format!("scan_points: '{v}' is not an integer")))?
                    }
                    _ => return Err(CliError::Config(format!("unknown shoot key '{k}'"))),
                }
            }
        }
        if let Some(sec) = ini.section(Some("phase")) {
            for (k, v) in sec.iter() {
                match k {
                    "alpha" => cfg.phase.alpha = Some(parse_f64(k, v)?),
                    "variant" => {
                        cfg.phase.variant = match v.trim() {
                            "psi" => PhaseVariant::Psi,
                            "phi" => PhaseVariant::Phi,
                            _ => return Err(CliError::Config(format!("variant: '{v}' (expected psi or phi)"))),
                        }
                    }
                    "kappa" => cfg.phase.kappas = parse_list(k, v)?,
                    "eta_max" => cfg.phase.eta_max = parse_f64(k, v)?,
                    _ => return Err(CliError::Config(format!("unknown phase key '{k}'"))),
                }
            }
        }
        if let Some(sec) = ini.section(Some("profile")) {
            for (k, v) in sec.iter() {
                match k {
                    "kind" => {
                        cfg.profile.kind = match v.trim() {
                            "psi" => ProfileChoice::Psi,
                            "phi" => ProfileChoice::Phi,
                            "blowup-sub" => ProfileChoice::BlowUpSub,
                            "blowup-outer" => ProfileChoice::BlowUpOuter,
                            _ => {
                                return Err(CliError::Config(format!(
                                    "kind: '{v}' (expected psi, phi, blowup-sub or blowup-outer)"
                                )))
                            }
                        }
                    }
                    "alpha" => cfg.profile.alpha = Some(parse_f64(k, v)?),
                    "lambda" | "mu" | "slope" => cfg.profile.shoot = Some(parse_f64(k, v)?),
                    "xi_max" => cfg.profile.xi_max = parse_f64(k, v)?,
                    _ => return Err(CliError::Config(format!("unknown profile key '{k}'"))),
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Problem defaults that make each preset meaningful without a config
    /// file; explicit `[problem]` keys override them.
    pub fn apply_preset_defaults(&mut self) {
        let pr = &mut self.problem;
        match self.preset {
            Preset::RegimeMap => {
                pr.floor = 0.01;
                pr.x_min = -20.0;
                pr.x_max = 20.0;
                pr.dx = 0.1;
                self.sweep = Some(SweepConfig {
                    axes: vec![
                        SweepAxis {
                            key: "m".into(),
                            values: [0.5, 1.0, 2.0].map(SweepValue::Literal).to_vec(),
                        },
                        SweepAxis {
                            key: "p".into(),
                            values: vec![
                                SweepValue::Literal(0.5),
                                SweepValue::Literal(1.0),
                                SweepValue::MPlus(1.0),
                                SweepValue::MPlus(2.0),
                                SweepValue::MPlus(3.0),
                            ],
                        },
                    ],
                    bumps: vec![(1.0, 4.0), (4.0, 2.0)],
                });
            }
            Preset::GrowUpRate => {
                pr.m = 1.0;
                pr.p = 0.5;
                pr.floor = 0.01;
                pr.max_time = 100.0;
            }
            Preset::BlowUpRate => {
                pr.m = 1.0;
                pr.p = 3.0;
                pr.center = 3.0;
                pr.width = 4.0;
                pr.height = 4.0;
                pr.x_min = -10.0;
                pr.x_max = 10.0;
                pr.dx = 0.025;
            }
            Preset::BlowUpSet => {
                pr.m = 2.0;
                pr.p = 2.0;
                pr.height = 4.0;
                pr.x_min = -10.0;
                pr.x_max = 10.0;
                pr.dx = 0.05;
                pr.max_time = 50.0;
            }
            Preset::AlphaStar | Preset::LambdaLaws | Preset::PhasePortrait | Preset::Profile => {
                pr.m = 2.0;
            }
            Preset::Custom => {
                pr.m = 2.0;
                pr.support = ReactionSupport::None;
                pr.datum = DatumKind::Barenblatt;
                pr.x_min = -6.0;
                pr.x_max = 6.0;
                pr.dx = 0.02;
                pr.expand = false;
                pr.max_time = 1.0;
            }
        }
    }

    /// Preset-specific requirements, checked before anything runs.
    pub fn validate(&self) -> CliResult<()> {
        let pr = &self.problem;
        let bad = |m: String| Err(CliError::Config(m));
        if self.tolerance.is_some_and(|t| !(t > 0.0)) {
            return bad("tolerance must be positive".into());
        }
        if !(pr.dx > 0.0) || !(pr.x_max > pr.x_min) || !(pr.max_time > 0.0) {
            return bad("problem needs dx > 0, x_max > x_min and max_time > 0".into());
        }
        match self.preset {
            Preset::RegimeMap => {
                if self.sweep.as_ref().is_none_or(|s| s.is_empty()) {
                    return bad("regime-map needs a nonempty [sweep]".into());
                }
            }
            Preset::GrowUpRate => {
                if !(pr.p <= 1.0) {
                    return bad(format!("guprate needs p <= 1, got {}", pr.p));
                }
            }
            Preset::BlowUpRate | Preset::BlowUpSet => {
                if !(pr.p > 1.0) {
                    return bad(format!("{} needs p > 1, got {}", self.preset, pr.p));
                }
            }
            Preset::AlphaStar | Preset::LambdaLaws => {
                if !(self.shoot_m() > 1.0) {
                    return bad(format!("{} needs m > 1", self.preset));
                }
                if self.preset == Preset::AlphaStar && self.shoot.scan_points < 2 {
                    return bad("alpha-star needs scan_points >= 2".into());
                }
                if self.preset == Preset::LambdaLaws && self.shoot.alphas.len() < 2 {
                    return bad("lambda-laws needs at least two alpha values".into());
                }
            }
            Preset::PhasePortrait => {
                if !(pr.m > 1.0) {
                    return bad("phase-portrait needs m > 1".into());
                }
                if self.phase.kappas.iter().any(|&k| !(k > 0.0)) {
                    return bad("phase-portrait kappas must be positive".into());
                }
            }
            Preset::Profile => {
                if !(self.problem.m > 0.0) || !(self.profile.xi_max > 0.0) {
                    return bad("profile needs m > 0 and xi_max > 0".into());
                }
            }
            Preset::Custom => {}
        }
        Ok(())
    }

    pub fn shoot_m(&self) -> f64 {
        self.shoot.m.unwrap_or(self.problem.m)
    }
}

fn parse_bumps(v: &str) -> CliResult<Vec<(f64, f64)>> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (h, w) = s
                .split_once('x')
                .ok_or_else(|| CliError::Config(format!("bump: '{s}' (expected height x width)")))?;
            Ok((parse_f64("bump", h)?, parse_f64("bump", w)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_sweeps() {
        let cfg = ExperimentConfig::parse(
            "[experiment]\npreset = custom\nseed = 7\n\n[problem]\nm = 2\nsupport = interval:1.5\n\
             datum = bump\n\n[sweep]\np = 2, m+1, m + 2\nm = 1, 3\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.problem.support, ReactionSupport::Interval(1.5));
        let cells = cfg.sweep.as_ref().unwrap().cells(&cfg.problem);
        let ps: Vec<(f64, f64)> = cells
            .iter()
            .map(|c| (c.get("m").unwrap(), c.get("p").unwrap()))
            .collect();
        assert_eq!(
            ps,
            vec![(1.0, 2.0), (1.0, 2.0), (1.0, 3.0), (3.0, 2.0), (3.0, 4.0), (3.0, 5.0)]
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::parse("[experiment]\npreset = nope\n").is_err());
        assert!(ExperimentConfig::parse("[problem]\nq = 1\n").is_err());
        assert!(ExperimentConfig::parse("[bogus]\nq = 1\n").is_err());
        assert!(ExperimentConfig::parse("[experiment]\npreset = guprate\n[problem]\np = 3\n").is_err());
        assert!(ExperimentConfig::parse("[sweep]\ndatum = bump\n").is_err());
    }

    #[test]
    fn regime_map_defaults() {
        let cfg = ExperimentConfig::parse("[experiment]\npreset = regime-map\n").unwrap();
        let cells = cfg.sweep.as_ref().unwrap().cells(&cfg.problem);
        assert_eq!(cells.len(), 30);
        assert_eq!(cells[9].label(), "m=0.5 p=3.5 bump=4x2");
    }

    #[test]
    fn random_probes_follow_the_seed() {
        let mut pr = ProblemConfig {
            random_probes: 3,
            ..ProblemConfig::default()
        };
        let a = pr.to_spec(1).unwrap().probes;
        let b = pr.to_spec(1).unwrap().probes;
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        pr.random_probes = 0;
        assert_eq!(pr.to_spec(2).unwrap().probes, vec![-1.0, 0.0, 1.0]);
    }
}
