//! Experiment presets. Each writes its CSVs, charts and `report.txt` into
//! the output directory and returns the manifest.

use halfline_core::odeshoot::{
    barenblatt, blowup_outer_profile, find_alpha_star, find_lambda_minus, find_lambda_plus, find_mu0,
    integrate_profile_with, mismatch_scan, profile_residual, write_profile_csv, write_shooting_csv, ProfileOptions,
    ProfileProblem, ShootingRow,
};
use halfline_core::pde::{estimate_blowup_time, TIME_RESOLUTION};
use halfline_core::phaseplane::{find_separatrix_kappa, integrate_from_origin};
use halfline_core::rates::{
    blowup_set, check_x0, doubling_sequence, fit_blowup, fit_exponential, fit_power, write_rates_csv, FitWindow,
    RateRow, SetShape, Verdict,
};
use halfline_core::{detect_regime, run, Location, PhaseParams, RateLaw, ReactionSupport, Regime, Trace};

use crate::config::{DatumKind, ExperimentConfig, PhaseVariant, Preset, ProblemConfig, ProfileChoice, SweepCell};
use crate::error::{CliError, CliResult};
use crate::report::{Artifacts, Check, Manifest, Report};
use crate::svg::{LineChart, Series};
use crate::sweep::{run_cells, write_summary_csv, CellResult};

pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<Manifest> {
    cfg.validate()?;
    let mut art = Artifacts::new(&cfg.output_dir)?;
    let report = match cfg.preset {
        Preset::RegimeMap => regime_map(cfg, &mut art)?,
        Preset::GrowUpRate => growup_rate(cfg, &mut art)?,
        Preset::BlowUpRate => blowup_rate(cfg, &mut art)?,
        Preset::BlowUpSet => blowup_set_preset(cfg, &mut art)?,
        Preset::AlphaStar => alpha_star(cfg, &mut art)?,
        Preset::LambdaLaws => lambda_laws(cfg, &mut art)?,
        Preset::PhasePortrait => phase_portrait(cfg, &mut art)?,
        Preset::Profile => profile(cfg, &mut art)?,
        Preset::Custom => custom(cfg, &mut art)?,
    };
    art.finish(cfg.preset.name(), &report)
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn simulate(cfg: &ProblemConfig, seed: u64) -> CliResult<Trace> {
    Ok(run(&cfg.to_spec(seed)?)?)
}

/// `trace.csv`, the sup-norm chart and the probe chart.
fn trace_artifacts(art: &mut Artifacts, trace: &Trace, prefix: &str, log_time: bool) -> CliResult<()> {
    trace.write_csv(&art.path(&format!("{prefix}trace.csv")))?;
    let sup: Vec<(f64, f64)> = trace
        .times
        .iter()
        .copied()
        .zip(trace.sup_norms.iter().copied())
        .collect();
    let mut chart = LineChart::new("sup-norm", "t", "sup u")
        .log_y()
        .with(Series::line("sup u", sup));
    if log_time {
        chart = chart.log_x();
    }
    chart.write(&art.path(&format!("{prefix}sup.svg")))?;
    let mut probes = LineChart::new("probe values", "t", "u(x, t)").log_y();
    if log_time {
        probes = probes.log_x();
    }
    for (x, vals) in trace.probe_points.iter().zip(&trace.probe_values) {
        let pts = trace.times.iter().copied().zip(vals.iter().copied()).collect();
        probes = probes.with(Series::line(format!("x = {x}"), pts));
    }
    probes.write(&art.path(&format!("{prefix}probes.svg")))?;
    Ok(())
}

fn profiles_chart(art: &mut Artifacts, trace: &Trace, name: &str) -> CliResult<()> {
    let n = trace.snapshots.len();
    let step = n.div_ceil(6).max(1);
    let mut chart = LineChart::new("snapshots", "x", "u");
    for s in trace.snapshots.iter().step_by(step).chain(trace.snapshots.last()) {
        let pts = s.grid.nodes().into_iter().zip(s.values.iter().copied()).collect();
        chart = chart.with(Series::line(format!("t = {:.4}", s.time), pts));
    }
    chart.write(&art.path(name))
}

/// Regime predicted for a cell of a half-line sweep. For `p > m + 2` the
/// answer depends on the datum: the first bump of the sweep is read as the
/// small datum and the last as the large one.
pub fn expected_regime(m: f64, p: f64, bump_role: BumpRole) -> Vec<Regime> {
    if p <= 1.0 {
        vec![Regime::GrowUp]
    } else if p <= m + 2.0 {
        vec![Regime::BlowUp]
    } else {
        match bump_role {
            BumpRole::Small => vec![Regime::GlobalBounded],
            BumpRole::Large => vec![Regime::BlowUp],
            BumpRole::Unknown => vec![Regime::GlobalBounded, Regime::BlowUp],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BumpRole {
    Small,
    Large,
    Unknown,
}

fn bump_role(cfg: &ExperimentConfig, cell: &SweepCell) -> BumpRole {
    let bumps = cfg.sweep.as_ref().map(|s| s.bumps.as_slice()).unwrap_or(&[]);
    match cell.bump {
        Some(b) if bumps.len() >= 2 && b == bumps[0] => BumpRole::Small,
        Some(b) if bumps.len() >= 2 && b == bumps[bumps.len() - 1] => BumpRole::Large,
        _ => BumpRole::Unknown,
    }
}

/// Horizon and resolution used by the regime map when not set explicitly:
/// growth is slow for `p < 1`, blow-up of large data happens early, and the
/// decay of small data for `p > m + 2` needs a long run. Fast diffusion
/// spreads mass far out, so the grid is coarsened there.
pub fn regime_cell_defaults(cfg: &mut ProblemConfig) {
    if !cfg.explicit.contains("max_time") {
        cfg.max_time = if cfg.p < 1.0 {
            20.0
        } else if cfg.p == 1.0 {
            12.0
        } else {
            60.0
        };
    }
    if !cfg.explicit.contains("dx") && cfg.m < 1.0 {
        cfg.dx *= 2.0;
    }
}

fn regime_map(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("regime-map needs a sweep".into()))?;
    let cells = sweep.cells(&cfg.problem);
    let results = run_cells(&cfg.problem, &cells, cfg.seed, cfg.jobs, |c, _| regime_cell_defaults(c))?;
    write_summary_csv(&results, &art.path("summary.csv"))?;

    let mut report = Report::new(
        "Regime map on the half-line",
        "with reaction on the half-line only, every solution grows up when p <= 1; for 1 < p <= m+2 every \
         nontrivial solution blows up in finite time; for p > m+2 small data stay bounded for all time while \
         large data blow up",
    );
    let mut rows = Vec::new();
    let mut by_regime: Vec<(Regime, Vec<(f64, f64)>)> =
        [Regime::GrowUp, Regime::BlowUp, Regime::GlobalBounded, Regime::Undecided]
            .into_iter()
            .map(|r| (r, Vec::new()))
            .collect();
    for r in &results {
        let role = bump_role(cfg, &r.cell);
        let expected = expected_regime(r.config.m, r.config.p, role);
        let exp_names: Vec<&str> = expected.iter().map(|e| e.name()).collect();
        let (observed, ok) = match &r.outcome {
            Ok(s) => {
                if let Some(slot) = by_regime.iter_mut().find(|(g, _)| *g == s.regime) {
                    slot.1.push((r.config.m, r.config.p));
                }
                (s.regime.name().to_string(), expected.contains(&s.regime))
            }
            Err(e) => (format!("error: {e}"), false),
        };
        report.check(Check::new(
            format!("cell {} [{}]", r.cell.index, r.cell.label()),
            exp_names.join(" or "),
            observed.clone(),
            ok,
        ));
        rows.push(cell_row(r, &exp_names.join("|"), &observed));
    }
    report.table(
        "Cells",
        &["cell", "m", "p", "bump", "tmax", "dx", "expected", "observed", "t_end"],
        &rows,
    );
    let mut chart = LineChart::new("regimes", "m", "p");
    for (regime, pts) in by_regime {
        if !pts.is_empty() {
            chart = chart.with(Series::markers(regime.name(), pts));
        }
    }
    chart.write(&art.path("regimes.svg"))?;
    Ok(report)
}

fn cell_row(r: &CellResult, expected: &str, observed: &str) -> Vec<String> {
    vec![
        r.cell.index.to_string(),
        r.config.m.to_string(),
        r.config.p.to_string(),
        r.cell.bump.map_or("-".into(), |(h, w)| format!("{h}x{w}")),
        r.config.max_time.to_string(),
        r.config.dx.to_string(),
        expected.to_string(),
        observed.to_string(),
        r.outcome.as_ref().map_or("NA".into(), |s| fmt(s.final_time)),
    ]
}

/// Expected grow-up laws for a half-line problem: `(location, law,
/// exponent, default tolerance)`.
pub fn growup_targets(m: f64, p: f64) -> CliResult<Vec<(Location, RateLaw, f64, f64)>> {
    let pw = RateLaw::Power;
    let ex = RateLaw::Exponential;
    Ok(if p < 1.0 && m >= p {
        vec![
            (Location::Point(1.0), pw, 1.0 / (1.0 - p), 0.10),
            (Location::Point(-1.0), pw, 1.0 / (1.0 - p), 0.10),
        ]
    } else if p < 1.0 {
        vec![
            (Location::Point(1.0), pw, 1.0 / (1.0 - p), 0.15),
            (Location::Point(-1.0), pw, 1.0 / (1.0 - m), 0.15),
        ]
    } else if p == 1.0 && m == 1.0 {
        vec![(Location::Point(0.0), ex, 1.0, 0.05)]
    } else if p == 1.0 && m < 1.0 {
        vec![
            (Location::Point(1.0), ex, 1.0, 0.10),
            (Location::Point(-1.0), pw, 1.0 / (1.0 - m), 0.15),
        ]
    } else if p == 1.0 {
        let star = find_alpha_star(m)?;
        vec![(Location::Point(0.0), ex, star.alpha_star, 0.10)]
    } else {
        return Err(CliError::Config(format!("grow-up needs p <= 1, got {p}")));
    })
}

fn growup_rate(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let pr = &cfg.problem;
    if pr.support != ReactionSupport::HalfLine {
        return Err(CliError::Config("guprate expects support = halfline".into()));
    }
    let targets = growup_targets(pr.m, pr.p)?;
    let mut pr = pr.clone();
    for (loc, ..) in &targets {
        if let Location::Point(x) = loc {
            if !pr.probes.contains(x) {
                pr.probes.push(*x);
            }
        }
    }
    let trace = simulate(&pr, cfg.seed)?;
    trace_artifacts(art, &trace, "", true)?;
    let mut report = Report::new(
        "Grow-up rates",
        "for p < 1 and m >= p solutions grow like t^(1/(1-p)) everywhere; for m < p < 1 the reaction side \
         grows like t^(1/(1-p)) and the diffusion side like t^(1/(1-m)); for p = 1 growth is exponential, \
         with rate 1 when m = 1, rate 1 on the reaction side and power t^(1/(1-m)) on the other side when \
         m < 1, and rate alpha* (the matching exponent of the self-similar profiles) when m > 1",
    );
    report.note(format!(
        "regime {} at t = {}",
        detect_regime(&trace).name(),
        fmt(trace.last_time())
    ));
    let mut rows = Vec::new();
    for (loc, law, theory, tol) in targets {
        let tol = cfg.tolerance.unwrap_or(tol);
        let fit = match law {
            RateLaw::Exponential => fit_exponential(&trace, loc, FitWindow::Auto),
            _ => fit_power(&trace, loc, FitWindow::Auto),
        };
        if let Err(e) = &fit {
            report.note(format!("{} fit at {loc}: {e}", law.name()));
        }
        let row = RateRow {
            m: pr.m,
            p: pr.p,
            support: pr.support.name().to_string(),
            location: loc,
            law,
            theoretical: theory,
            fitted: fit.ok(),
            tolerance: tol,
        };
        let observed = match &row.fitted {
            Some(f) => format!(
                "{} (rms {:.2e}, window [{}, {}])",
                fmt(f.fitted),
                f.residual,
                fmt(f.window.0),
                fmt(f.window.1)
            ),
            None => "no fit".into(),
        };
        report.check(Check::new(
            format!("{} rate at {loc}", law.name()),
            format!("{} within {}%", fmt(theory), tol * 100.0),
            observed,
            row.verdict() == Verdict::Pass,
        ));
        rows.push(row);
    }
    write_rates_csv(&rows, &art.path("rates.csv"))?;
    Ok(report)
}

/// Blow-up fit of one run: `(gamma fit, doubling max z, T)`.
struct BlowUpRun {
    trace: Trace,
    t_blowup: f64,
    gamma: Option<halfline_core::RateFit>,
    max_z: Option<f64>,
}

fn blowup_run(pr: &ProblemConfig, seed: u64) -> CliResult<BlowUpRun> {
    let trace = simulate(pr, seed)?;
    let t_blowup = estimate_blowup_time(&trace, pr.p).time;
    let gamma = fit_blowup(&trace, t_blowup).ok();
    let max_z = doubling_sequence(&trace, pr.p).ok().map(|d| d.max_z());
    Ok(BlowUpRun {
        trace,
        t_blowup,
        gamma,
        max_z,
    })
}

fn blowup_rate(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let pr = &cfg.problem;
    let mut fine = pr.clone();
    fine.dx = pr.dx / 2.0;
    let (coarse, fine) = rayon::join(|| blowup_run(pr, cfg.seed), || blowup_run(&fine, cfg.seed));
    let (coarse, fine) = (coarse?, fine?);
    trace_artifacts(art, &coarse.trace, "", false)?;
    profiles_chart(art, &coarse.trace, "snapshots.svg")?;

    let theory = 1.0 / (pr.p - 1.0);
    let tol = cfg.tolerance.unwrap_or(0.10);
    let mut report = Report::new(
        "Blow-up rate",
        "a solution that is nondecreasing in time and blows up at T satisfies sup u ~ (T-t)^(-1/(p-1)); \
         equivalently the gaps between successive doublings of the maximum, scaled by M^(p-1), stay bounded",
    );
    report.check(Check::new(
        "regime",
        "BlowUp",
        detect_regime(&coarse.trace).name(),
        detect_regime(&coarse.trace) == Regime::BlowUp,
    ));
    let row = RateRow {
        m: pr.m,
        p: pr.p,
        support: pr.support.name().to_string(),
        location: Location::SupNorm,
        law: RateLaw::BlowUpPower {
            t_blowup: coarse.t_blowup,
        },
        theoretical: theory,
        fitted: coarse.gamma,
        tolerance: tol,
    };
    let gamma_ok = coarse.gamma.is_some_and(|g| rel_err(g.fitted, theory) <= tol);
    report.check(Check::new(
        "blow-up exponent",
        format!("{} within {}%", fmt(theory), tol * 100.0),
        coarse.gamma.map_or("no fit".into(), |g| fmt(g.fitted)),
        gamma_ok,
    ));
    report.check(Check::new(
        "fit residual",
        "rms below 0.05",
        coarse.gamma.map_or("no fit".into(), |g| format!("{:.3e}", g.residual)),
        coarse.gamma.is_some_and(|g| g.residual < 0.05),
    ));
    let z_ok = match (coarse.max_z, fine.max_z) {
        (Some(a), Some(b)) => a.is_finite() && b.is_finite() && rel_err(b, a) <= 0.2,
        _ => false,
    };
    let show = |z: Option<f64>| z.map_or("none".to_string(), fmt);
    report.check(Check::new(
        "doubling gaps",
        "max z finite and stable within 20% when dx is halved",
        format!(
            "{} at dx = {}, {} at dx = {}",
            show(coarse.max_z),
            pr.dx,
            show(fine.max_z),
            pr.dx / 2.0
        ),
        z_ok,
    ));
    report.table(
        "Refinement",
        &["dx", "T", "gamma", "rms", "max z"],
        &[(&coarse, pr.dx), (&fine, pr.dx / 2.0)]
            .iter()
            .map(|(r, dx)| {
                vec![
                    dx.to_string(),
                    fmt(r.t_blowup),
                    r.gamma.map_or("NA".into(), |g| fmt(g.fitted)),
                    r.gamma.map_or("NA".into(), |g| format!("{:.3e}", g.residual)),
                    show(r.max_z),
                ]
            })
            .collect::<Vec<_>>(),
    );
    match check_x0(&coarse.trace, coarse.t_blowup, pr.p) {
        Ok(x0) => report.note(format!(
            "lower bound u(x0, t) >= c (T-t)^(-1/(p-1)) at the maximum x0 = {}: {}",
            fmt(x0.x0),
            if x0.held { "held" } else { "not observed" }
        )),
        Err(e) => report.note(format!("lower bound at the maximum not checked: {e}")),
    }
    write_rates_csv(&[row], &art.path("rates.csv"))?;
    if let Ok(d) = doubling_sequence(&coarse.trace, pr.p) {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(art.path("doubling.csv"))?;
        w.write_record(["j", "t_j", "M_j", "z_j"])?;
        for j in 0..d.z.len() {
            w.write_record([
                j.to_string(),
                d.times[j].to_string(),
                d.maxima[j].to_string(),
                d.z[j].to_string(),
            ])?;
        }
        w.flush()?;
    }
    let pts: Vec<(f64, f64)> = coarse
        .trace
        .times
        .iter()
        .zip(&coarse.trace.sup_norms)
        .filter(|(t, _)| coarse.t_blowup - **t > TIME_RESOLUTION * coarse.t_blowup)
        .map(|(t, s)| (coarse.t_blowup - t, *s))
        .collect();
    let c = pts.last().map_or(1.0, |&(d, s)| s * d.powf(theory));
    let reference = pts.iter().map(|&(d, _)| (d, c * d.powf(-theory))).collect();
    LineChart::new("sup u against T - t", "T - t", "sup u")
        .log_x()
        .log_y()
        .with(Series::line("computed", pts))
        .with(Series::line(format!("slope -{}", fmt(theory)), reference))
        .write(&art.path("rate.svg"))?;
    Ok(report)
}

fn blowup_set_preset(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let pr = &cfg.problem;
    let trace = simulate(pr, cfg.seed)?;
    trace_artifacts(art, &trace, "", false)?;
    profiles_chart(art, &trace, "snapshots.svg")?;
    let mut report = Report::new(
        "Blow-up set",
        "the blow-up set is a single point in the reaction region when p > m, a bounded interval when \
         p = m, and the whole line when p < m",
    );
    let regime = detect_regime(&trace);
    report.check(Check::new("regime", "BlowUp", regime.name(), regime == Regime::BlowUp));
    let est = blowup_set(&trace)?;
    let dx = pr.dx;
    let shape = match est.interval {
        SetShape::Interval(a, b) => format!("[{}, {}]", fmt(a), fmt(b)),
        SetShape::WholeWindow => "whole window".to_string(),
    };
    let observed = format!("{shape} (marked fraction {:.3})", est.final_fraction);
    if pr.p > pr.m {
        let ok = matches!(est.interval, SetShape::Interval(a, b) if a > -dx && b - a <= 10.0 * dx);
        report.check(Check::new(
            "single point",
            format!("interval inside (-dx, inf) of length at most 10 dx = {}", 10.0 * dx),
            observed,
            ok,
        ));
    } else if pr.p == pr.m {
        let ok = matches!(est.interval, SetShape::Interval(a, b) if b - a > 10.0 * dx);
        report.check(Check::new(
            "bounded interval",
            format!("bounded interval longer than 10 dx = {}", 10.0 * dx),
            observed,
            ok,
        ));
    } else {
        report.check(Check::new(
            "global",
            "whole window",
            observed,
            est.interval == SetShape::WholeWindow,
        ));
    }
    report.note(format!(
        "threshold schedule: {}; confidence {:?}",
        est.threshold_schedule, est.confidence
    ));
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(art.path("set_history.csv"))?;
    w.write_record(["t", "left", "right"])?;
    for (t, iv) in &est.history {
        let (a, b) = iv.map_or(("NA".into(), "NA".into()), |(a, b)| (a.to_string(), b.to_string()));
        w.write_record([t.to_string(), a, b])?;
    }
    w.flush()?;
    Ok(report)
}

fn sign_changes(h: &[(f64, f64)]) -> usize {
    h.windows(2).filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0)).count()
}

fn alpha_star(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let m = cfg.shoot_m();
    let scan = mismatch_scan(m, cfg.shoot.scan_points)?;
    let star = find_alpha_star(m)?;
    let (lo, hi) = (1.0 / m, 2.0 / (m + 1.0));
    let mut report = Report::new(
        "Matching exponent alpha*",
        "for m > 1 the initial slopes of the reaction-side and reaction-free self-similar profiles coincide \
         for exactly one alpha* between 1/m and 2/(m+1); the exponential grow-up rate at the origin is alpha*",
    );
    report.check(Check::new(
        "alpha* location",
        format!("inside ({}, {})", fmt(lo), fmt(hi)),
        fmt(star.alpha_star),
        star.alpha_star > lo && star.alpha_star < hi,
    ));
    let changes = sign_changes(&scan);
    report.check(Check::new(
        "sign changes of h",
        format!("exactly one on {} points", scan.len()),
        changes.to_string(),
        changes == 1,
    ));
    report.note(format!(
        "lambda at the match {}, gamma* = {}",
        fmt(star.lambda_at_match),
        fmt(star.gamma_star)
    ));
    report.table(
        "h(alpha) = lambda+ - lambda-",
        &["alpha", "h"],
        &scan.iter().map(|(a, h)| vec![fmt(*a), fmt(*h)]).collect::<Vec<_>>(),
    );
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(art.path("mismatch.csv"))?;
    w.write_record(["m", "alpha", "h"])?;
    for (a, h) in &scan {
        w.write_record([m.to_string(), a.to_string(), h.to_string()])?;
    }
    w.flush()?;
    // h blows up next to 1/m; clip for the chart.
    let pts = scan.iter().map(|&(a, h)| (a, h.clamp(-2.0, 2.0))).collect();
    LineChart::new("mismatch h(alpha)", "alpha", "h (clipped to [-2, 2])")
        .with(Series::line("h", pts))
        .with(Series::markers("alpha*", vec![(star.alpha_star, 0.0)]))
        .write(&art.path("mismatch.svg"))?;
    Ok(report)
}

/// Where the phase-plane cross-check of `lambda+` is made by default.
pub fn cross_check_alpha(m: f64) -> f64 {
    let (lo, hi) = (1.0 / m, 2.0 / (m + 1.0));
    lo + 0.6 * (hi - lo)
}

fn spread(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min) / (0.5 * (max + min)).abs()
}

fn lambda_laws(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let m = cfg.shoot_m();
    let alphas = &cfg.shoot.alphas;
    let (lo, hi) = (1.0 / m, 2.0 / (m + 1.0));
    let mut rows = Vec::new();
    for &a in alphas {
        let minus = find_lambda_minus(m, a)?;
        let plus = if a > lo && a <= hi {
            find_lambda_plus(m, a).ok()
        } else {
            None
        };
        rows.push(ShootingRow {
            m,
            alpha: a,
            lambda_plus: plus,
            lambda_minus: Some(minus),
        });
    }
    write_shooting_csv(&rows, &art.path("shooting.csv"))?;

    let mut report = Report::new(
        "Slopes of the one-sided profiles",
        "lambda-(alpha) times sqrt(alpha) is constant in alpha; lambda+ vanishes at alpha = 2/(m+1); the \
         separatrix of the phase plane reproduces lambda+",
    );
    let prod: Vec<f64> = rows.iter().map(|r| r.lambda_minus.unwrap() * r.alpha.sqrt()).collect();
    let quot: Vec<f64> = rows.iter().map(|r| r.lambda_minus.unwrap() / r.alpha.sqrt()).collect();
    let tol = cfg.tolerance.unwrap_or(0.02);
    report.check(Check::new(
        "lambda- sqrt(alpha)",
        format!("constant within {}%", tol * 100.0),
        format!("relative spread {:.4}", spread(&prod)),
        spread(&prod) < tol,
    ));
    report.note(format!(
        "lambda- / sqrt(alpha) has relative spread {:.2e}; substituting s = sqrt(alpha) xi removes alpha \
         from the reaction-free profile equation, so lambda- is proportional to sqrt(alpha)",
        spread(&quot)
    ));
    let at_end = find_lambda_plus(m, hi)?;
    report.check(Check::new(
        "lambda+ at 2/(m+1)",
        format!("at most {:e}", halfline_core::odeshoot::shooting::TOL_LAMBDA),
        format!("{at_end:e}"),
        at_end <= halfline_core::odeshoot::shooting::TOL_LAMBDA,
    ));
    let ac = cross_check_alpha(m);
    let plus = find_lambda_plus(m, ac)?;
    let kappa = find_separatrix_kappa(&PhaseParams::psi(m, ac))?;
    let via_phase = kappa / m.sqrt();
    report.check(Check::new(
        format!("separatrix at alpha = {}", fmt(ac)),
        format!("kappa+/sqrt(m) within 1% of lambda+ = {}", fmt(plus)),
        fmt(via_phase),
        rel_err(via_phase, plus) <= 0.01,
    ));
    report.table(
        "Slopes",
        &[
            "alpha",
            "lambda+",
            "lambda-",
            "lambda- sqrt(alpha)",
            "lambda- / sqrt(alpha)",
        ],
        &rows
            .iter()
            .zip(prod.iter().zip(&quot))
            .map(|(r, (p, q))| {
                vec![
                    fmt(r.alpha),
                    r.lambda_plus.map_or("NA".into(), fmt),
                    fmt(r.lambda_minus.unwrap()),
                    fmt(*p),
                    fmt(*q),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.alpha, r.lambda_minus.unwrap())).collect();
    LineChart::new("lambda- against alpha", "alpha", "lambda-")
        .log_x()
        .log_y()
        .with(Series::markers("lambda-", pts))
        .write(&art.path("lambda_minus.svg"))?;
    Ok(report)
}

fn phase_portrait(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let m = cfg.problem.m;
    let alpha = cfg.phase.alpha.unwrap_or_else(|| cross_check_alpha(m));
    let params = match cfg.phase.variant {
        PhaseVariant::Psi => PhaseParams::psi(m, alpha),
        PhaseVariant::Phi => PhaseParams::phi(m, alpha),
    };
    params.validate()?;
    let mut report = Report::new(
        "Phase portrait",
        "orbits leaving the origin of the (X, Y) plane keep Y >= 0 and end at one of the terminal states; \
         on the reaction side the separatrix value kappa+/sqrt(m) equals the slope lambda+",
    );
    let mut chart = LineChart::new(format!("orbits, alpha = {}", fmt(alpha)), "X", "Y").log_y();
    let mut rows = Vec::new();
    let mut min_y = f64::INFINITY;
    for (k, &kappa) in cfg.phase.kappas.iter().enumerate() {
        let traj = integrate_from_origin(kappa, &params, cfg.phase.eta_max)?;
        traj.write_csv(&art.path(&format!("orbit_{k:02}.csv")))?;
        min_y = traj.samples.iter().map(|s| s.y).fold(min_y, f64::min);
        rows.push(vec![
            kappa.to_string(),
            traj.terminal.name().to_string(),
            traj.samples.len().to_string(),
            traj.clamped.to_string(),
        ]);
        chart = chart.with(Series::line(
            format!("kappa = {kappa}"),
            traj.samples.iter().map(|s| (s.x, s.y)).collect(),
        ));
    }
    chart.write(&art.path("portrait.svg"))?;
    report.check(Check::new(
        "Y >= 0",
        "Y nonnegative on every orbit",
        format!("min Y = {min_y:e}"),
        min_y >= 0.0,
    ));
    report.table("Orbits", &["kappa", "terminal", "samples", "clamped"], &rows);
    let interior = alpha > 1.0 / m && alpha < 2.0 / (m + 1.0);
    if cfg.phase.variant == PhaseVariant::Psi && interior {
        let kappa = find_separatrix_kappa(&params)?;
        let plus = find_lambda_plus(m, alpha)?;
        report.check(Check::new(
            "separatrix",
            format!("kappa+/sqrt(m) within 1% of lambda+ = {}", fmt(plus)),
            fmt(kappa / m.sqrt()),
            rel_err(kappa / m.sqrt(), plus) <= 0.01,
        ));
    }
    Ok(report)
}

fn profile(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let m = cfg.problem.m;
    let p = cfg.problem.p;
    let alpha = cfg.profile.alpha.unwrap_or_else(|| cross_check_alpha(m));
    let xi_max = cfg.profile.xi_max;
    let step = xi_max / 4000.0;
    let opts = ProfileOptions::default().with_xi_max(xi_max).sampled(step);
    let mut report = Report::new(
        "Self-similar profile",
        "the profile equation is integrated from the origin with the given shooting parameter and \
         classified by its behaviour at the end of the interval",
    );
    let (problem, outcome) = match cfg.profile.kind {
        ProfileChoice::Psi | ProfileChoice::Phi => {
            let psi = cfg.profile.kind == ProfileChoice::Psi;
            let lambda = match cfg.profile.shoot {
                Some(l) => l,
                None if psi => find_lambda_plus(m, alpha)?,
                None => find_lambda_minus(m, alpha)?,
            };
            let problem = if psi {
                ProfileProblem::psi(m, alpha, lambda)
            } else {
                ProfileProblem::phi(m, alpha, lambda)
            };
            (problem, integrate_profile_with(&problem, &opts)?)
        }
        ProfileChoice::BlowUpSub => {
            let mu = match cfg.profile.shoot {
                Some(mu) => mu,
                None => find_mu0(m, p)?.mu0,
            };
            let problem = ProfileProblem::blowup_sub(m, p, mu);
            (problem, integrate_profile_with(&problem, &opts)?)
        }
        ProfileChoice::BlowUpOuter => {
            let outer = blowup_outer_profile(m, p)?;
            let slope = cfg.profile.shoot.unwrap_or(-outer.slope_at_origin);
            if let Some(g) = outer.tail_exponent {
                report.note(format!("fitted tail exponent {}", fmt(g)));
            }
            let problem = ProfileProblem::blowup_outer(m, p, slope);
            (problem, integrate_profile_with(&problem, &opts)?)
        }
    };
    report.note(format!(
        "classification {} ({:?}); {} samples; shooting parameter {}",
        outcome.classification.name(),
        outcome.classification,
        outcome.samples.len(),
        fmt(problem.shoot)
    ));
    match profile_residual(&problem, &outcome.samples, 1e-6) {
        Ok(r) => report.check(Check::new(
            "ODE residual",
            "at most 1e-6",
            format!("{r:.3e}"),
            r <= 1e-6,
        )),
        Err(e) => report.note(format!("residual not evaluated: {e}")),
    }
    write_profile_csv(&outcome.samples, &art.path("profile.csv"))?;
    LineChart::new("profile", "xi", "f")
        .with(Series::line("f", outcome.samples.iter().map(|s| (s.xi, s.f)).collect()))
        .write(&art.path("profile.svg"))?;
    Ok(report)
}

fn custom(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let pr = &cfg.problem;
    if let Some(sweep) = cfg.sweep.as_ref().filter(|s| !s.is_empty()) {
        let cells = sweep.cells(pr);
        let results = run_cells(pr, &cells, cfg.seed, cfg.jobs, |_, _| {})?;
        write_summary_csv(&results, &art.path("summary.csv"))?;
        let mut report = Report::new(
            "Parameter sweep",
            "each cell is integrated and classified independently",
        );
        let failed = results.iter().filter(|r| r.outcome.is_err()).count();
        report.note(format!("{} cells, {} recorded errors", results.len(), failed));
        let rows: Vec<Vec<String>> = results
            .iter()
            .map(|r| {
                let obs = match &r.outcome {
                    Ok(s) => s.regime.name().to_string(),
                    Err(e) => format!("error: {e}"),
                };
                cell_row(r, "-", &obs)
            })
            .collect();
        report.table(
            "Cells",
            &["cell", "m", "p", "bump", "tmax", "dx", "expected", "observed", "t_end"],
            &rows,
        );
        return Ok(report);
    }
    if pr.datum == DatumKind::Barenblatt && pr.support == ReactionSupport::None {
        return barenblatt_convergence(cfg, art);
    }
    let trace = simulate(pr, cfg.seed)?;
    trace_artifacts(art, &trace, "", false)?;
    profiles_chart(art, &trace, "snapshots.svg")?;
    std::fs::create_dir_all(art.dir.join("snapshots"))?;
    let snaps = trace.write_snapshots(&art.dir.join("snapshots"), "u")?;
    for s in &snaps {
        art.record(s);
    }
    let mut report = Report::new("Single run", "the problem is integrated and classified");
    report.note(format!(
        "regime {} at t = {}, sup = {:e}",
        detect_regime(&trace).name(),
        fmt(trace.last_time()),
        trace.sup_norms.last().copied().unwrap_or(f64::NAN)
    ));
    if let Some(t) = trace.blowup_time_estimate {
        report.note(format!("estimated blow-up time {}", fmt(t)));
    }
    for d in &trace.diagnostics {
        report.note(d.clone());
    }
    Ok(report)
}

/// Relative sup error against the exact Barenblatt solution at the end of a
/// run started from it.
pub fn barenblatt_error(pr: &ProblemConfig, seed: u64) -> CliResult<(f64, Trace)> {
    let trace = simulate(pr, seed)?;
    let last = trace
        .snapshots
        .last()
        .ok_or_else(|| CliError::Core(halfline_core::Error::InsufficientData("no snapshots".into())))?;
    let t = pr.barenblatt_t + last.time;
    let exact: Vec<f64> = last
        .grid
        .nodes()
        .into_iter()
        .map(|x| barenblatt(x, t, pr.barenblatt_d, pr.m))
        .collect();
    let peak = exact.iter().copied().fold(0.0, f64::max);
    let err = last
        .values
        .iter()
        .zip(&exact)
        .map(|(u, b)| (u - b).abs())
        .fold(0.0, f64::max);
    Ok((err / peak, trace))
}

fn barenblatt_convergence(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Report> {
    let pr = &cfg.problem;
    let levels: Vec<ProblemConfig> = (0..3)
        .map(|k| ProblemConfig {
            dx: pr.dx / f64::from(1 << k),
            ..pr.clone()
        })
        .collect();
    let results: Vec<CliResult<(f64, Trace)>> = {
        use rayon::prelude::*;
        levels.par_iter().map(|l| barenblatt_error(l, cfg.seed)).collect()
    };
    let mut errs = Vec::new();
    for r in results {
        errs.push(r?);
    }
    let mut report = Report::new(
        "Barenblatt refinement study",
        "without reaction the Barenblatt solution evolves exactly by the porous medium flow, so the \
         computed solution should approach it as the grid is refined",
    );
    let t_end = pr.barenblatt_t + pr.max_time;
    let mut rows = Vec::new();
    for (k, (e, _)) in errs.iter().enumerate() {
        let ratio = if k > 0 { errs[k - 1].0 / e } else { f64::NAN };
        rows.push(vec![
            levels[k].dx.to_string(),
            format!("{e:.4e}"),
            if k > 0 { format!("{ratio:.3}") } else { "-".into() },
            if k > 0 {
                format!("{:.3}", ratio.log2())
            } else {
                "-".into()
            },
        ]);
    }
    report.table(
        format!("Relative sup error at t = {t_end}"),
        &["dx", "error", "reduction", "order"],
        &rows,
    );
    let finest = errs.last().map(|e| e.0).unwrap_or(f64::NAN);
    report.check(Check::new(
        "finest error",
        "at most 2%",
        format!("{finest:.4e} at dx = {}", levels[2].dx),
        finest <= 0.02,
    ));
    let ratio = errs[1].0 / errs[2].0;
    report.check(Check::new(
        "last halving",
        "error reduced by a factor of at least 3.5",
        format!("{ratio:.3}"),
        ratio >= 3.5,
    ));
    let (_, trace) = &errs[2];
    if let Some(last) = trace.snapshots.last() {
        let t = pr.barenblatt_t + last.time;
        let exact = last
            .grid
            .nodes()
            .into_iter()
            .map(|x| (x, barenblatt(x, t, pr.barenblatt_d, pr.m)))
            .collect();
        LineChart::new(format!("t = {t}"), "x", "u")
            .with(Series::line(
                "computed",
                last.grid.nodes().into_iter().zip(last.values.iter().copied()).collect(),
            ))
            .with(Series::line("exact", exact))
            .write(&art.path("barenblatt.svg"))?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(art.path("convergence.csv"))?;
    w.write_record(["dx", "relative_error"])?;
    for (l, (e, _)) in levels.iter().zip(&errs) {
        w.write_record([l.dx.to_string(), e.to_string()])?;
    }
    w.flush()?;
    Ok(report)
}
