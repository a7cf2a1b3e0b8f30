//! Explicit finite-difference solver for `u_t = (u^m)_xx + a(x) u^p`.
//!
//! The diffusion term is the conservative central second difference of the
//! array `u^m`, so the same stencil serves the degenerate (`m > 1`) and the
//! singular (`m < 1`) regimes without ever forming `u^(m-1)` at `u = 0`.
//! Time stepping is forward Euler with a step recomputed every iteration
//! from the current solution.

use std::path::Path;

use crate::error::{Error, Result};
use crate::fit::line_fit;
use crate::problem::{trapezoid, DatumSpec, Field, Grid, ProblemSpec, ReactionSupport};

/// Smallest `(T - t) / t` trusted by the blow-up fits.
pub const TIME_RESOLUTION: f64 = 1e-8;

/// Guard for the diffusivity of fast diffusion at vanishing density.
pub const EPS_CFL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverTolerances {
    /// Fraction of the explicit diffusion limit actually used.
    pub cfl_safety: f64,
    /// Largest relative growth of the peak per step due to the reaction.
    pub reaction_safety: f64,
    pub blowup_threshold: f64,
    pub max_time: f64,
    /// Time between regular snapshots.
    pub snapshot_stride: f64,
    /// Extra snapshot whenever the sup-norm grows by this factor.
    pub snapshot_growth: f64,
    /// Relative size of the near-boundary solution that triggers expansion.
    pub far_field_tail_tol: f64,
    /// Trace rows are written at least this often in time ...
    pub record_interval: f64,
    /// ... and whenever the sup-norm changes by this factor.
    pub record_growth: f64,
}

impl Default for SolverTolerances {
    fn default() -> Self {
        SolverTolerances {
            cfl_safety: 0.9,
            reaction_safety: 1e-4,
            blowup_threshold: 1e8,
            max_time: 10.0,
            snapshot_stride: 0.5,
            snapshot_growth: 2f64.powf(0.25),
            far_field_tail_tol: 1e-3,
            record_interval: 0.05,
            record_growth: 1.01,
        }
    }
}

impl SolverTolerances {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidProblem(m.to_string()));
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 0.9) {
            return bad("cfl_safety must lie in (0, 0.9]");
        }
        if !(self.reaction_safety > 0.0 && self.reaction_safety < 1.0) {
            return bad("reaction_safety must lie in (0, 1)");
        }
        if !(self.blowup_threshold >= 1e3) {
            return bad("blowup_threshold must be at least 1e3");
        }
        if !(self.max_time > 0.0 && self.max_time.is_finite()) {
            return bad("max_time must be positive and finite");
        }
        if !(self.snapshot_stride > 0.0) || !(self.snapshot_growth > 1.0) {
            return bad("snapshot_stride must be positive and snapshot_growth > 1");
        }
        if !(self.far_field_tail_tol > 0.0 && self.far_field_tail_tol < 1.0) {
            return bad("far_field_tail_tol must lie in (0, 1)");
        }
        if !(self.record_interval > 0.0) || !(self.record_growth > 1.0) {
            return bad("record_interval must be positive and record_growth > 1");
        }
        Ok(())
    }
}

/// Far-field condition on one end of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Zero flux; the ghost node mirrors the first interior node.
    Neumann,
    /// Fixed value.
    Dirichlet(f64),
}

/// Far-field conditions implied by a problem on a given grid.
///
/// Slow diffusion uses zero flux (compact data stay compactly supported).
/// Otherwise a side where the reaction is active is zero-flux too: far out
/// the solution follows the flat ODE, which is what a reflecting end
/// reproduces. A reaction-free side with `m <= 1` is pinned to the datum's
/// tail value.
pub fn boundary_conditions(spec: &ProblemSpec, grid: &Grid) -> (Boundary, Boundary) {
    let side = |x: f64| {
        if spec.m > 1.0 || spec.support.coefficient(x) > 0.0 {
            Boundary::Neumann
        } else {
            Boundary::Dirichlet(spec.datum.value(x))
        }
    };
    (side(grid.x_min()), side(grid.x_max()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    GlobalBounded,
    GrowUp,
    BlowUp,
    Undecided,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::GlobalBounded => "GlobalBounded",
            Regime::GrowUp => "GrowUp",
            Regime::BlowUp => "BlowUp",
            Regime::Undecided => "Undecided",
        }
    }
}

#[inline]
fn powi_m(u: f64, e: f64) -> f64 {
    if e == 1.0 {
        u
    } else if e == 2.0 {
        u * u
    } else if e == 3.0 {
        u * u * u
    } else {
        u.powf(e)
    }
}

/// In-place explicit stepper with fixed boundary conditions.
#[derive(Debug, Clone)]
pub struct Stepper {
    pub field: Field,
    pub m: f64,
    pub p: f64,
    pub left: Boundary,
    pub right: Boundary,
    coeff: Vec<f64>,
    flux: Vec<f64>,
    has_reaction: bool,
    // Compensation term for the running time; near blow-up the steps fall
    // far below the resolution of `time`.
    carry: f64,
}

impl Stepper {
    pub fn new(field: Field, m: f64, p: f64, support: ReactionSupport, left: Boundary, right: Boundary) -> Self {
        let coeff: Vec<f64> = (0..field.grid.len())
            .map(|i| support.coefficient(field.grid.x(i)))
            .collect();
        let has_reaction = coeff.iter().any(|&a| a > 0.0);
        let n = field.grid.len();
        let mut s = Stepper {
            field,
            m,
            p,
            left,
            right,
            coeff,
            flux: vec![0.0; n],
            has_reaction,
            carry: 0.0,
        };
        s.apply_dirichlet();
        s
    }

    fn apply_dirichlet(&mut self) {
        let n = self.field.values.len();
        if let Boundary::Dirichlet(v) = self.left {
            self.field.values[0] = v;
        }
        if let Boundary::Dirichlet(v) = self.right {
            self.field.values[n - 1] = v;
        }
    }

    /// Largest stable step for diffusion.
    pub fn diffusion_dt(&self, cfl_safety: f64) -> f64 {
        let dx = self.field.grid.dx();
        let m = self.m;
        let diffusivity = if m == 1.0 {
            1.0
        } else if m > 1.0 {
            let sup = self.field.values.iter().cloned().fold(0.0, f64::max);
            m * sup.max(EPS_CFL).powf(m - 1.0)
        } else {
            let min = self.field.values.iter().cloned().fold(f64::INFINITY, f64::min);
            m * min.max(EPS_CFL).powf(m - 1.0)
        };
        if diffusivity <= 0.0 {
            return f64::INFINITY;
        }
        cfl_safety * dx * dx / (2.0 * diffusivity)
    }

    /// Largest step keeping the relative reaction growth at the peak below
    /// `safety`.
    pub fn reaction_dt(&self, safety: f64) -> f64 {
        if !self.has_reaction {
            return f64::INFINITY;
        }
        let sup = self
            .field
            .values
            .iter()
            .zip(&self.coeff)
            .filter(|(_, &a)| a > 0.0)
            .map(|(&u, _)| u)
            .fold(0.0, f64::max);
        if sup <= 0.0 {
            return f64::INFINITY;
        }
        safety / sup.powf(self.p - 1.0)
    }

    pub fn stable_dt(&self, tol: &SolverTolerances) -> f64 {
        self.diffusion_dt(tol.cfl_safety)
            .min(self.reaction_dt(tol.reaction_safety))
    }

    /// One forward-Euler step. Returns `false` if the new state is not finite
    /// (blow-up escalation); the field is then left untouched.
    pub fn advance(&mut self, dt: f64) -> bool {
        let n = self.field.values.len();
        let dx = self.field.grid.dx();
        let r = dt / (dx * dx);
        let (m, p) = (self.m, self.p);
        let u = &self.field.values;
        let w = &mut self.flux;
        for i in 0..n {
            w[i] = powi_m(u[i], m);
        }
        let mut out = vec![0.0; n];
        let mut ok = true;
        for i in 0..n {
            let wl = if i == 0 { w[1] } else { w[i - 1] };
            let wr = if i == n - 1 { w[n - 2] } else { w[i + 1] };
            let mut v = u[i] + r * (wl - 2.0 * w[i] + wr);
            if self.coeff[i] > 0.0 {
                v += dt * self.coeff[i] * powi_m(u[i], p);
            }
            if !v.is_finite() {
                ok = false;
            }
            out[i] = v.max(0.0);
        }
        if !ok {
            return false;
        }
        self.field.values = out;
        let y = dt - self.carry;
        let t = self.field.time + y;
        self.carry = (t - self.field.time) - y;
        self.field.time = t;
        self.apply_dirichlet();
        true
    }
}

/// Outcome of a single [`step`].
#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Advanced(Field),
    /// The update overflowed: the caller should treat this as blow-up.
    Escalated {
        time: f64,
    },
}

/// Advances `field` by `dt` under the problem's equation and far-field
/// conditions.
pub fn step(field: &Field, spec: &ProblemSpec, dt: f64) -> Result<StepOutcome> {
    let (left, right) = boundary_conditions(spec, &field.grid);
    let mut s = Stepper::new(field.clone(), spec.m, spec.p, spec.support, left, right);
    // Dirichlet data are applied on construction; keep the caller's values
    // if they differ so the step is a pure function of its input.
    s.field.values = field.values.clone();
    let limit = s.diffusion_dt(spec.tolerances.cfl_safety);
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "dt = {dt} exceeds the explicit stability limit {limit}"
        )));
    }
    if s.advance(dt) {
        Ok(StepOutcome::Advanced(s.field))
    } else {
        Ok(StepOutcome::Escalated { time: field.time + dt })
    }
}

/// `(1/2) int |(u^m)_x|^2 - m/(p+m) int_{support} u^(p+m)`.
pub fn energy_with(field: &Field, m: f64, p: f64, support: ReactionSupport) -> f64 {
    let g = &field.grid;
    let n = g.len();
    let dx = g.dx();
    let w: Vec<f64> = field.values.iter().map(|&u| powi_m(u, m)).collect();
    let grad2: Vec<f64> = (0..n)
        .map(|i| {
            let d = if i == 0 {
                (w[1] - w[0]) / dx
            } else if i == n - 1 {
                (w[n - 1] - w[n - 2]) / dx
            } else {
                (w[i + 1] - w[i - 1]) / (2.0 * dx)
            };
            d * d
        })
        .collect();
    let diffusion = 0.5 * trapezoid(&grad2, dx);
    let react: Vec<f64> = field.values.iter().map(|&u| powi_m(u, p + m)).collect();
    let reaction = match support {
        ReactionSupport::None => 0.0,
        ReactionSupport::Global => trapezoid(&react, dx),
        ReactionSupport::HalfLine => trapezoid(&react[g.origin()..], dx),
        ReactionSupport::Interval(l) => {
            let idx: Vec<usize> = (0..n).filter(|&i| g.x(i).abs() <= l).collect();
            match (idx.first(), idx.last()) {
                (Some(&a), Some(&b)) => trapezoid(&react[a..=b], dx),
                _ => 0.0,
            }
        }
    };
    diffusion - m / (p + m) * reaction
}

/// Energy of a field under the problem's exponents and support.
pub fn energy(field: &Field, spec: &ProblemSpec) -> f64 {
    energy_with(field, spec.m, spec.p, spec.support)
}

/// Time series produced by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub m: f64,
    pub p: f64,
    pub support: ReactionSupport,
    /// Initial computational window, used as the monitoring window.
    pub window: (f64, f64),
    pub initial_dx: f64,
    pub times: Vec<f64>,
    pub sup_norms: Vec<f64>,
    pub sup_locations: Vec<f64>,
    pub masses: Vec<f64>,
    pub energies: Vec<f64>,
    pub probe_points: Vec<f64>,
    /// `probe_values[k][i]` is `u(probe_points[k], times[i])`; NaN outside
    /// the grid.
    pub probe_values: Vec<Vec<f64>>,
    pub snapshots: Vec<Field>,
    pub regime: Regime,
    pub blowup_time_estimate: Option<f64>,
    /// The run stopped on overflow or on crossing the blow-up threshold.
    pub escalated: bool,
    pub blowup_threshold: f64,
    pub max_time: f64,
    /// Last time step used.
    pub dt_last: f64,
    /// Set when the run had to stop early for a reason other than blow-up.
    pub aborted: Option<String>,
    pub diagnostics: Vec<String>,
}

impl Trace {
    pub fn empty(m: f64, p: f64, support: ReactionSupport, window: (f64, f64), dx: f64) -> Self {
        Trace {
            m,
            p,
            support,
            window,
            initial_dx: dx,
            times: Vec::new(),
            sup_norms: Vec::new(),
            sup_locations: Vec::new(),
            masses: Vec::new(),
            energies: Vec::new(),
            probe_points: Vec::new(),
            probe_values: Vec::new(),
            snapshots: Vec::new(),
            regime: Regime::Undecided,
            blowup_time_estimate: None,
            escalated: false,
            blowup_threshold: 1e8,
            max_time: f64::INFINITY,
            dt_last: 0.0,
            aborted: None,
            diagnostics: Vec::new(),
        }
    }

    /// Synthetic trace from a sup-norm series (masses and energies zero).
    pub fn from_sup_series(p: f64, times: &[f64], sup_norms: &[f64]) -> Self {
        let mut t = Trace::empty(1.0, p, ReactionSupport::HalfLine, (0.0, 0.0), 0.0);
        t.times = times.to_vec();
        t.sup_norms = sup_norms.to_vec();
        t.sup_locations = vec![0.0; times.len()];
        t.masses = vec![0.0; times.len()];
        t.energies = vec![0.0; times.len()];
        t.max_time = times.last().copied().unwrap_or(0.0);
        t.dt_last = match times.len() {
            0 | 1 => 0.0,
            n => times[n - 1] - times[n - 2],
        };
        t
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    fn push(&mut self, field: &Field, m: f64, p: f64) {
        let (sup, loc) = field.sup();
        self.times.push(field.time);
        self.sup_norms.push(sup);
        self.sup_locations.push(loc);
        self.masses.push(field.mass());
        self.energies.push(energy_with(field, m, p, self.support));
        for (k, &x) in self.probe_points.iter().enumerate() {
            self.probe_values[k].push(field.sample(x).unwrap_or(f64::NAN));
        }
    }

    /// Appends a row, or replaces the last one when the clock has not
    /// visibly advanced since (steps below the resolution of `t`).
    fn push_latest(&mut self, field: &Field, m: f64, p: f64) {
        if self.times.last().is_some_and(|&t| field.time <= t) {
            self.times.pop();
            self.sup_norms.pop();
            self.sup_locations.pop();
            self.masses.pop();
            self.energies.pop();
            for v in &mut self.probe_values {
                v.pop();
            }
        }
        self.push(field, m, p);
    }

    /// Time series at a probe point, if it was recorded.
    pub fn probe(&self, x: f64) -> Option<&[f64]> {
        self.probe_points
            .iter()
            .position(|&p| (p - x).abs() < 1e-12)
            .map(|k| self.probe_values[k].as_slice())
    }

    /// Running maximum `M(t)` of the sup-norm.
    pub fn running_max(&self) -> Vec<f64> {
        let mut best = f64::NEG_INFINITY;
        self.sup_norms
            .iter()
            .map(|&s| {
                best = best.max(s);
                best
            })
            .collect()
    }

    /// Columns `t, sup_norm, sup_location, mass, energy`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)?;
        w.write_record(["t", "sup_norm", "sup_location", "mass", "energy"])?;
        for i in 0..self.len() {
            w.write_record([
                self.times[i].to_string(),
                self.sup_norms[i].to_string(),
                self.sup_locations[i].to_string(),
                self.masses[i].to_string(),
                self.energies[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the columns written by [`Trace::write_csv`]; snapshots and
    /// metadata other than `p` are not stored in that file.
    pub fn read_csv(path: &Path, m: f64, p: f64) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let mut t = Trace::empty(m, p, ReactionSupport::HalfLine, (0.0, 0.0), 0.0);
        for rec in r.records() {
            let rec = rec?;
            let get = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Csv(format!("bad field {i} in {rec:?}")))
            };
            t.times.push(get(0)?);
            t.sup_norms.push(get(1)?);
            t.sup_locations.push(get(2)?);
            t.masses.push(get(3)?);
            t.energies.push(get(4)?);
        }
        t.max_time = t.last_time();
        Ok(t)
    }

    /// One file per snapshot, `<prefix>_<k>.csv` with columns `x, u`.
    pub fn write_snapshots(&self, dir: &Path, prefix: &str) -> Result<Vec<std::path::PathBuf>> {
        let mut out = Vec::new();
        for (k, s) in self.snapshots.iter().enumerate() {
            let path = dir.join(format!("{prefix}_{k:04}.csv"));
            write_field_csv(s, &path)?;
            out.push(path);
        }
        Ok(out)
    }
}

pub fn write_field_csv(field: &Field, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(["x", "u"])?;
    for (i, v) in field.values.iter().enumerate() {
        w.write_record([field.grid.x(i).to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

enum Side {
    Left,
    Right,
}

/// Runs the problem until `max_time`, blow-up escalation, or an abort.
pub fn run(spec: &ProblemSpec) -> Result<Trace> {
    spec.validate()?;
    let tol = &spec.tolerances;
    let field = spec.initial_field()?;
    let grid0 = field.grid.clone();
    let (left, right) = boundary_conditions(spec, &grid0);
    let mut st = Stepper::new(field, spec.m, spec.p, spec.support, left, right);
    let mut trace = Trace::empty(spec.m, spec.p, spec.support, (grid0.x_min(), grid0.x_max()), grid0.dx());
    trace.blowup_threshold = tol.blowup_threshold;
    trace.max_time = tol.max_time;
    trace.probe_points = spec.probes.clone();
    trace.probe_values = vec![Vec::new(); spec.probes.len()];
    trace.push(&st.field, spec.m, spec.p);
    trace.snapshots.push(st.field.clone());

    let mut last_record = (st.field.time, st.field.sup().0);
    let mut next_snapshot = tol.snapshot_stride;
    let mut snapshot_sup = st.field.sup().0;

    while st.field.time < tol.max_time {
        let t = st.field.time;
        let sliver = 1e-12 * t.max(1.0);
        if tol.max_time - t <= sliver {
            break;
        }
        let mut dt = st.stable_dt(tol).min(tol.max_time - t);
        if next_snapshot - t > sliver {
            dt = dt.min(next_snapshot - t);
        }
        if !(dt > 0.0) || !dt.is_finite() {
            trace.aborted = Some(format!("time step collapsed at t = {t}"));
            break;
        }
        let ok = st.advance(dt);
        trace.dt_last = dt;
        let (sup, _) = st.field.sup();
        if !ok || !(sup.is_finite()) || sup > tol.blowup_threshold {
            trace.escalated = true;
            if ok {
                trace.push_latest(&st.field, spec.m, spec.p);
                push_snapshot(&mut trace.snapshots, &st.field);
            }
            break;
        }
        let now = st.field.time;
        let ratio = sup / last_record.1;
        if now - last_record.0 >= tol.record_interval || ratio >= tol.record_growth || ratio <= 1.0 / tol.record_growth
        {
            trace.push_latest(&st.field, spec.m, spec.p);
            last_record = (now, sup);
        }
        let due = now >= next_snapshot - sliver;
        if due || sup >= snapshot_sup * tol.snapshot_growth {
            if due {
                next_snapshot += tol.snapshot_stride;
            }
            if sup >= snapshot_sup * tol.snapshot_growth {
                snapshot_sup = sup;
            }
            push_snapshot(&mut trace.snapshots, &st.field);
        }
        if spec.domain.expand {
            if let Err(msg) = maybe_expand(&mut st, spec) {
                trace.aborted = Some(msg);
                break;
            }
        }
    }
    if trace.last_time() < st.field.time {
        trace.push(&st.field, spec.m, spec.p);
    }
    if trace.snapshots.last().is_none_or(|s| s.time < st.field.time) {
        trace.snapshots.push(st.field.clone());
    }
    if let Some(msg) = &trace.aborted {
        trace.diagnostics.push(msg.clone());
    }
    trace.regime = detect_regime(&trace);
    if trace.regime == Regime::BlowUp {
        let est = estimate_blowup_time(&trace, spec.p);
        if est.low_confidence {
            trace
                .diagnostics
                .push("blow-up time from fallback (low confidence)".into());
        }
        trace.blowup_time_estimate = Some(est.time);
    }
    Ok(trace)
}

fn push_snapshot(snapshots: &mut Vec<Field>, field: &Field) {
    if snapshots.last().is_some_and(|s| field.time <= s.time) {
        snapshots.pop();
    }
    snapshots.push(field.clone());
}

/// Doubles the domain on a side whose near-boundary value is no longer
/// negligible, coarsening by two when the node budget is exceeded.
fn maybe_expand(st: &mut Stepper, spec: &ProblemSpec) -> std::result::Result<(), String> {
    let n = st.field.values.len();
    let sup = st.field.sup().0;
    let tol = spec.tolerances.far_field_tail_tol * sup;
    let grid = &st.field.grid;
    // With p <= 1 and a positive datum under the reaction, the far field
    // follows the flat ODE and never becomes negligible; expanding there
    // would never stop and gains nothing.
    let flat_side = |x: f64| spec.p <= 1.0 && spec.support.coefficient(x) > 0.0 && spec.datum.value(x) > 0.0;
    let mut todo = Vec::new();
    if st.field.values[1] > tol && !flat_side(grid.x_min()) {
        todo.push(Side::Left);
    }
    if st.field.values[n - 2] > tol && !flat_side(grid.x_max()) {
        todo.push(Side::Right);
    }
    for side in todo {
        expand(st, spec, side)?;
    }
    Ok(())
}

fn expand(st: &mut Stepper, spec: &ProblemSpec, side: Side) -> std::result::Result<(), String> {
    let grid = st.field.grid.clone();
    let (l, r) = grid.counts();
    let (nl, nr) = match side {
        Side::Left => (2 * l.max(1), r),
        Side::Right => (l, 2 * r.max(1)),
    };
    let dx = grid.dx();
    let mut new_grid = Grid::from_counts(nl, nr, dx).map_err(|e| e.to_string())?;
    let datum = &spec.datum;
    let old_values = &st.field.values;
    let mut values: Vec<f64> = (0..new_grid.len())
        .map(|i| {
            let k = i as isize - nl as isize + l as isize;
            if k >= 0 && (k as usize) < grid.len() {
                old_values[k as usize]
            } else {
                tail_value(datum, new_grid.x(i), old_values, k < 0)
            }
        })
        .collect();
    if new_grid.len() > spec.domain.max_nodes {
        if !spec.domain.coarsen {
            return Err(format!(
                "domain expansion to {} nodes exceeds the cap of {}",
                new_grid.len(),
                spec.domain.max_nodes
            ));
        }
        let (g, v) = coarsen(&new_grid, &values, datum);
        new_grid = g;
        values = v;
    }
    let time = st.field.time;
    let field = Field {
        grid: new_grid,
        values,
        time,
    };
    let (left, right) = boundary_conditions(spec, &field.grid);
    *st = Stepper::new(field, spec.m, spec.p, spec.support, left, right);
    Ok(())
}

/// Fill value for a node added by expansion: the datum's tail, capped by the
/// old boundary value so expansion never creates a new local maximum.
fn tail_value(datum: &DatumSpec, x: f64, old: &[f64], left: bool) -> f64 {
    let edge = if left { old[0] } else { old[old.len() - 1] };
    datum.value(x).min(edge)
}

fn coarsen(grid: &Grid, values: &[f64], datum: &DatumSpec) -> (Grid, Vec<f64>) {
    let (mut l, mut r) = grid.counts();
    let dx = grid.dx();
    let mut vals = values.to_vec();
    if l % 2 == 1 {
        let x = grid.x_min() - dx;
        vals.insert(0, datum.value(x).min(vals[0]));
        l += 1;
    }
    if r % 2 == 1 {
        let x = grid.x_max() + dx;
        let edge = *vals.last().unwrap();
        vals.push(datum.value(x).min(edge));
        r += 1;
    }
    let g = Grid::from_counts(l / 2, r / 2, 2.0 * dx).expect("coarse grid");
    let v = (0..g.len()).map(|i| vals[2 * i]).collect();
    (g, v)
}

/// Blow-up time extrapolated from the tail of a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowUpTime {
    pub time: f64,
    pub low_confidence: bool,
    /// Fitting window `(t_lo, t_hi)`.
    pub window: (f64, f64),
}

/// Indices of the blow-up fitting window: the final 30 % of the points whose
/// sup-norm exceeds ten times the initial one, among those where the time
/// left before blow-up is still resolved by the clock.
///
/// The remaining time is gauged by the flat rate `sup^(1-p) / (p-1)`; rows
/// where it drops below [`TIME_RESOLUTION`] times `t` carry no usable
/// information about `T - t`.
pub fn blowup_window(trace: &Trace) -> Vec<usize> {
    let Some(&s0) = trace.sup_norms.first() else {
        return Vec::new();
    };
    let p = trace.p;
    let resolved = |i: usize| {
        if !(p > 1.0) {
            return true;
        }
        let left = trace.sup_norms[i].powf(1.0 - p) / (p - 1.0);
        left >= TIME_RESOLUTION * trace.times[i].abs().max(f64::MIN_POSITIVE)
    };
    let hot: Vec<usize> = (0..trace.len())
        .filter(|&i| trace.sup_norms[i] > 10.0 * s0 && resolved(i))
        .collect();
    let keep = ((hot.len() as f64) * 0.3).ceil() as usize;
    hot[hot.len() - keep..].to_vec()
}

/// Extrapolates `sup^-(p-1)`, which is linear in `t` under the rate
/// `(T - t)^(-1/(p-1))`, to its zero crossing.
pub fn estimate_blowup_time(trace: &Trace, p: f64) -> BlowUpTime {
    let last = trace.last_time();
    let fallback = |window: (f64, f64)| BlowUpTime {
        time: last + trace.dt_last,
        low_confidence: true,
        window,
    };
    if !(p > 1.0) {
        return fallback((last, last));
    }
    let idx = blowup_window(trace);
    if idx.len() < 10 {
        return fallback((last, last));
    }
    let t: Vec<f64> = idx.iter().map(|&i| trace.times[i]).collect();
    let s: Vec<f64> = idx.iter().map(|&i| trace.sup_norms[i].powf(-(p - 1.0))).collect();
    let window = (t[0], t[t.len() - 1]);
    if s.windows(2).any(|w| w[1] > w[0]) {
        return fallback(window);
    }
    match line_fit(&t, &s) {
        Ok(f) if f.slope < 0.0 => {
            let tb = -f.intercept / f.slope;
            if tb.is_finite() && tb >= last {
                BlowUpTime {
                    time: tb,
                    low_confidence: false,
                    window,
                }
            } else {
                fallback(window)
            }
        }
        _ => fallback(window),
    }
}

/// Classifies a finished trace without guessing.
pub fn detect_regime(trace: &Trace) -> Regime {
    if trace.escalated {
        return Regime::BlowUp;
    }
    if trace.aborted.is_some() || trace.len() < 2 {
        return Regime::Undecided;
    }
    let s0 = trace.sup_norms[0];
    let last = *trace.sup_norms.last().unwrap();
    let t_end = trace.last_time();
    let t_half = trace.times[0] + 0.5 * (t_end - trace.times[0]);
    let tail: Vec<f64> = trace
        .times
        .iter()
        .zip(&trace.sup_norms)
        .filter(|(&t, _)| t >= t_half)
        .map(|(_, &s)| s)
        .collect();
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    if nonincreasing && last < 10.0 * s0 {
        return Regime::GlobalBounded;
    }
    if last >= 10.0 * s0 && last < trace.blowup_threshold {
        return Regime::GrowUp;
    }
    Regime::Undecided
}

/// A snapshot in the variables `xi = x t^-a`, `v = t^a u`, `tau = log t`
/// with `a = 1/(m+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledSnapshot {
    pub tau: f64,
    pub xi: Vec<f64>,
    pub v: Vec<f64>,
}

impl RescaledSnapshot {
    pub fn sup(&self) -> f64 {
        self.v.iter().cloned().fold(0.0, f64::max)
    }
}

/// Rescales the snapshots of a critical-exponent run (`p = m + 2`).
pub fn rescale_critical(trace: &Trace, m: f64) -> Result<Vec<RescaledSnapshot>> {
    if (trace.p - (m + 2.0)).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "critical rescaling needs p = m + 2, got m = {m}, p = {}",
            trace.p
        )));
    }
    let a = 1.0 / (m + 1.0);
    Ok(trace
        .snapshots
        .iter()
        .filter(|s| s.time > 0.0)
        .map(|s| {
            let scale = s.time.powf(a);
            RescaledSnapshot {
                tau: s.time.ln(),
                xi: (0..s.grid.len()).map(|i| s.grid.x(i) / scale).collect(),
                v: s.values.iter().map(|u| u * scale).collect(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{DomainPolicy, Grid};
    use approx::assert_relative_eq;

    fn spec(m: f64, p: f64, support: ReactionSupport, datum: DatumSpec) -> ProblemSpec {
        ProblemSpec::new(m, p, support, datum, DomainPolicy::new(-5.0, 5.0, 0.1))
    }

    #[test]
    fn zero_is_fixed_point() {
        let g = Grid::new(-1.0, 1.0, 21).unwrap();
        let f = Field::zeros(g, 0.0);
        let s = spec(2.0, 3.0, ReactionSupport::HalfLine, DatumSpec::Uniform { height: 0.0 });
        match step(&f, &s, 1e-3).unwrap() {
            StepOutcome::Advanced(next) => assert!(next.values.iter().all(|&v| v == 0.0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn uniform_global_follows_reaction() {
        let g = Grid::new(-1.0, 1.0, 21).unwrap();
        let c = 1.5;
        let f = Field::new(g.clone(), vec![c; g.len()], 0.0).unwrap();
        let s = spec(2.0, 3.0, ReactionSupport::Global, DatumSpec::Uniform { height: c });
        let dt = 1e-4;
        let StepOutcome::Advanced(next) = step(&f, &s, dt).unwrap() else {
            panic!()
        };
        for v in next.values {
            assert_relative_eq!(v, c + dt * c.powi(3), max_relative = 1e-14);
        }
    }

    #[test]
    fn rejects_unstable_step() {
        let g = Grid::new(-1.0, 1.0, 21).unwrap();
        let f = Field::new(g.clone(), vec![1.0; g.len()], 0.0).unwrap();
        let s = spec(1.0, 2.0, ReactionSupport::None, DatumSpec::Uniform { height: 1.0 });
        assert!(step(&f, &s, 1.0).is_err());
    }

    #[test]
    fn overflow_escalates() {
        let g = Grid::new(-1.0, 1.0, 21).unwrap();
        let f = Field::new(g.clone(), vec![1e200; g.len()], 0.0).unwrap();
        let s = spec(1.0, 3.0, ReactionSupport::Global, DatumSpec::Uniform { height: 1.0 });
        assert!(matches!(step(&f, &s, 1e-3).unwrap(), StepOutcome::Escalated { .. }));
    }

    #[test]
    fn energy_of_zero() {
        let g = Grid::new(-1.0, 1.0, 21).unwrap();
        assert_eq!(
            energy_with(&Field::zeros(g, 0.0), 2.0, 3.0, ReactionSupport::HalfLine),
            0.0
        );
    }

    #[test]
    fn synthetic_blowup_time_exact_law() {
        // sup = (1 - t)^(-1/2), p = 3: sup^-2 = 1 - t is exactly linear.
        let taus: Vec<f64> = (0..400).map(|k| 10f64.powf(-(k as f64) / 60.0)).collect();
        let t: Vec<f64> = taus.iter().map(|tau| 1.0 - tau).collect();
        let s: Vec<f64> = taus.iter().map(|tau| tau.powf(-0.5)).collect();
        let tr = Trace::from_sup_series(3.0, &t, &s);
        let est = estimate_blowup_time(&tr, 3.0);
        assert!(!est.low_confidence);
        assert!((est.time - 1.0).abs() < 1e-6, "T = {}", est.time);
    }

    #[test]
    fn nonmonotone_tail_falls_back() {
        let t: Vec<f64> = (0..100).map(|k| k as f64 * 0.01).collect();
        let s: Vec<f64> = t
            .iter()
            .map(|&x| 1.0 + 100.0 * x * (1.0 + 0.5 * (50.0 * x).sin()))
            .collect();
        let tr = Trace::from_sup_series(2.0, &t, &s);
        let est = estimate_blowup_time(&tr, 2.0);
        assert!(est.low_confidence);
        assert!(est.time >= tr.last_time());
    }

    #[test]
    fn regime_examples() {
        let mut tr = Trace::from_sup_series(2.0, &[0.0, 1.0], &[1.0, 2.0]);
        tr.escalated = true;
        assert_eq!(detect_regime(&tr), Regime::BlowUp);

        let t: Vec<f64> = (0..100).map(|k| k as f64).collect();
        let s: Vec<f64> = t.iter().map(|&x| (1.0 + x).powf(-1.5)).collect();
        let tr = Trace::from_sup_series(4.0, &t, &s);
        assert!(*s.last().unwrap() < 1e-2);
        assert_eq!(detect_regime(&tr), Regime::GlobalBounded);

        let t: Vec<f64> = (1..=100).map(|k| k as f64 * 0.316).collect();
        let s: Vec<f64> = t.iter().map(|&x| x * x).collect();
        let tr = Trace::from_sup_series(0.5, &t, &s);
        assert!((s.last().unwrap() - 1e3).abs() < 10.0);
        assert_eq!(detect_regime(&tr), Regime::GrowUp);

        let s: Vec<f64> = t.iter().map(|&x| 1.0 + 0.5 * x.sin()).collect();
        let tr = Trace::from_sup_series(2.0, &t, &s);
        assert_eq!(detect_regime(&tr), Regime::Undecided);
    }

    #[test]
    fn rescale_identity_and_similarity() {
        let m = 1.0;
        let a = 1.0 / (m + 1.0);
        let g = Grid::new(-4.0, 4.0, 81).unwrap();
        let profile = |xi: f64| (-xi * xi).exp();
        let mut tr = Trace::empty(m, 3.0, ReactionSupport::HalfLine, (-4.0, 4.0), 0.1);
        for &t in &[1.0f64, 2.0, 5.0] {
            let vals = (0..g.len())
                .map(|i| t.powf(-a) * profile(g.x(i) * t.powf(-a)))
                .collect();
            tr.snapshots.push(Field::new(g.clone(), vals, t).unwrap());
        }
        let r = rescale_critical(&tr, m).unwrap();
        assert_eq!(r[0].tau, 0.0);
        for (i, xi) in r[0].xi.iter().enumerate() {
            assert_eq!(*xi, g.x(i));
        }
        for snap in &r {
            for (xi, v) in snap.xi.iter().zip(&snap.v) {
                assert!((v - profile(*xi)).abs() < 1e-13);
            }
        }
        let bad = Trace::empty(1.0, 2.5, ReactionSupport::HalfLine, (0.0, 1.0), 0.1);
        assert!(rescale_critical(&bad, 1.0).is_err());
    }
}
