//! Planar system for the profile equation `(g^m)'' + beta xi g' - q g = 0`
//! in the variables `X = xi g'/g`, `Y = xi^2 g^(1-m) / m`, `eta = log xi`:
//!
//! ```text
//! X' = X (1 - m X) + Y (q - beta X)
//! Y' = Y (2 - (m - 1) X)
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::fit::line_fit;
use crate::integrate::{Advance, Dopri, Options};

/// Launch height above the `X` axis.
pub const Y_START: f64 = 1e-8;
/// Speed above which the flow is slowed to unit arclength.
const SPEED_CAP: f64 = 1e6;
const X_ESCAPE: f64 = 1e8;
const Y_ESCAPE: f64 = 1e14;
/// `Y` beyond which an orbit on the slow branch is taken as approaching
/// `Lambda2`; the relaxation of `X` there is stiff, so integrating further
/// is wasted.
const Y_BOUNDED_X: f64 = 1e4;
const MAX_SAMPLES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    pub m: f64,
    pub q: f64,
    pub beta: f64,
}

impl PhaseParams {
    /// Reaction side: `q = alpha - 1`.
    pub fn psi(m: f64, alpha: f64) -> Self {
        PhaseParams {
            m,
            q: alpha - 1.0,
            beta: 0.5 * (m - 1.0) * alpha,
        }
    }

    /// Reaction-free side: `q = alpha`.
    pub fn phi(m: f64, alpha: f64) -> Self {
        PhaseParams {
            m,
            q: alpha,
            beta: 0.5 * (m - 1.0) * alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 1.0) || !self.q.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "phase plane needs m > 1 and finite q, beta; got {self:?}"
            )));
        }
        Ok(())
    }

    /// `X` coordinate of the vertical asymptote of decaying orbits.
    pub fn lambda2_x(&self) -> f64 {
        self.q / self.beta
    }

    /// `alpha` for the reaction-side role.
    fn alpha(&self) -> f64 {
        self.q + 1.0
    }
}

pub fn vector_field(x: f64, y: f64, params: &PhaseParams) -> (f64, f64) {
    let PhaseParams { m, q, beta } = *params;
    (x * (1.0 - m * x) + y * (q - beta * x), y * (2.0 - (m - 1.0) * x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Terminal {
    /// `X -> -inf` with `Y ~ D |X|` (clean contact of the profile).
    Lambda1Linear(f64),
    /// `X -> -inf` with `Y ~ |X|^((m-1)/m)` (crossing with nonzero flux).
    Lambda1Sublinear,
    /// `X -> q/beta` with `Y -> inf` (positive decaying profile).
    Lambda2 {
        x: f64,
    },
    /// `X -> +inf`.
    Lambda3,
    /// `X` returns to zero from below (the profile turns upward).
    CrossesAxis,
    Unresolved,
}

impl Terminal {
    pub fn name(&self) -> &'static str {
        match self {
            Terminal::Lambda1Linear(_) => "Lambda1Linear",
            Terminal::Lambda1Sublinear => "Lambda1Sublinear",
            Terminal::Lambda2 { .. } => "Lambda2",
            Terminal::Lambda3 => "Lambda3",
            Terminal::CrossesAxis => "CrossesAxis",
            Terminal::Unresolved => "Unresolved",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample {
    pub eta: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kappa: f64,
    pub params: PhaseParams,
    pub samples: Vec<PhaseSample>,
    pub terminal: Terminal,
    /// Fitted slope of `log Y` against `log |X|` on the escape, when one was
    /// attempted.
    pub escape_slope: Option<f64>,
    /// Number of times `Y` dipped below zero and was clamped.
    pub clamped: usize,
}

/// `xi` at which `Y = y0` on the orbit with `g(0) = 1`, `g'(0) = kappa/sqrt(m)`,
/// from the second-order expansion of `g`.
fn xi_at_launch(kappa: f64, params: &PhaseParams, y0: f64) -> f64 {
    let m = params.m;
    let lam = kappa / m.sqrt();
    let g2 = params.q / m - (m - 1.0) * lam * lam;
    let g = |xi: f64| 1.0 + lam * xi + 0.5 * g2 * xi * xi;
    let mut xi = (m * y0).sqrt();
    for _ in 0..50 {
        let r = xi * xi * g(xi).powf(1.0 - m) - m * y0;
        let dg = lam + g2 * xi;
        let dr = 2.0 * xi * g(xi).powf(1.0 - m) + xi * xi * (1.0 - m) * g(xi).powf(-m) * dg;
        let step = r / dr;
        xi -= step;
        if step.abs() <= 1e-16 * xi {
            break;
        }
    }
    xi
}

pub fn integrate_from_origin(kappa: f64, params: &PhaseParams, eta_max: f64) -> Result<Trajectory> {
    integrate_from_origin_with(kappa, params, eta_max, Y_START)
}

/// Integrates the orbit leaving the origin along `X ~ kappa sqrt(Y)`.
pub fn integrate_from_origin_with(kappa: f64, params: &PhaseParams, eta_max: f64, y_start: f64) -> Result<Trajectory> {
    params.validate()?;
    if !eta_max.is_finite() || !(y_start > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need finite eta_max and positive launch height, got {eta_max}, {y_start}"
        )));
    }
    let m = params.m;
    let x0 = kappa * y_start.sqrt() + y_start * (params.q - 0.5 * (m + 1.0) * kappa * kappa);
    let eta0 = xi_at_launch(kappa, params, y_start).ln();
    let rhs = |_s: f64, z: &[f64; 3]| {
        let (fx, fy) = vector_field(z[0], z[1], params);
        let speed = fx.hypot(fy);
        let scale = 1.0 / (1.0 + (speed / SPEED_CAP).powi(2)).sqrt();
        [fx * scale, fy * scale, scale]
    };
    let valid = |z: &[f64; 3]| z[1] >= -1e-12 * z[1].abs().max(1.0);
    let opts = Options {
        rtol: 1e-10,
        atol: 1e-14,
        ..Options::default()
    };
    let mut ode = Dopri::new(0.0, [x0, y_start, eta0], 1e-4, opts);
    let mut samples = vec![PhaseSample {
        eta: eta0,
        x: x0,
        y: y_start,
    }];
    let mut clamped = 0;
    let mut was_negative = x0 < 0.0;
    let mut terminal = None;
    while ode.y[2] < eta_max && samples.len() < MAX_SAMPLES {
        if ode.advance(&rhs, &valid, f64::INFINITY) == Advance::Blocked {
            break;
        }
        if ode.y[1] < 0.0 {
            clamped += 1;
            ode.y[1] = 0.0;
        }
        let [x, y, eta] = ode.y;
        samples.push(PhaseSample { eta, x, y });
        if x < 0.0 {
            was_negative = true;
        } else if was_negative {
            terminal = Some(Terminal::CrossesAxis);
            break;
        }
        if x.abs() > X_ESCAPE || y > Y_ESCAPE || (y > Y_BOUNDED_X && on_slow_branch(x, y, params)) {
            break;
        }
    }
    let (terminal, escape_slope) = match terminal {
        Some(t) => (t, None),
        None => classify_end(params, &samples),
    };
    Ok(Trajectory {
        kappa,
        params: *params,
        samples,
        terminal,
        escape_slope,
        clamped,
    })
}

/// For large `Y` the `X` equation relaxes quickly onto the branch where
/// `Y (q - beta X)` balances `X (1 - m X)`; being there with bounded `X`
/// means the orbit follows a vertical asymptote.
fn on_slow_branch(x: f64, y: f64, params: &PhaseParams) -> bool {
    let (fx, _) = vector_field(x, y, params);
    x.abs() < 1e3 && fx.abs() <= 1e-3 * y * (params.q.abs() + (params.beta * x).abs())
}

fn classify_end(params: &PhaseParams, samples: &[PhaseSample]) -> (Terminal, Option<f64>) {
    let last = *samples.last().expect("nonempty trajectory");
    let m = params.m;
    if last.x > X_ESCAPE / 10.0 {
        return (Terminal::Lambda3, None);
    }
    if last.x < -X_ESCAPE / 10.0 {
        // Escape through X -> -inf: compare log Y against log |X| on the
        // last 20% of the escape measured in log |X|.
        let lx_end = (-last.x).ln();
        let esc: Vec<&PhaseSample> = samples.iter().filter(|s| s.x < -10.0 && s.y > 0.0).collect();
        if esc.len() < 5 {
            return (Terminal::Unresolved, None);
        }
        let lx_start = (-esc[0].x).ln();
        let cut = lx_end - 0.2 * (lx_end - lx_start);
        let window: Vec<&&PhaseSample> = esc.iter().filter(|s| (-s.x).ln() >= cut).collect();
        let window = if window.len() >= 5 {
            window
        } else {
            esc.iter().collect()
        };
        let lx: Vec<f64> = window.iter().map(|s| (-s.x).ln()).collect();
        let ly: Vec<f64> = window.iter().map(|s| s.y.ln()).collect();
        let slope = match line_fit(&lx, &ly) {
            Ok(f) => f.slope,
            Err(_) => return (Terminal::Unresolved, None),
        };
        let mid = 0.5 * (1.0 + (m - 1.0) / m);
        if slope >= mid {
            return (Terminal::Lambda1Linear(last.y / -last.x), Some(slope));
        }
        return (Terminal::Lambda1Sublinear, Some(slope));
    }
    if last.y > Y_BOUNDED_X && on_slow_branch(last.x, last.y, params) {
        return (Terminal::Lambda2 { x: last.x }, None);
    }
    (Terminal::Unresolved, None)
}

/// Separatrix `kappa+` between crossing orbits (`Lambda1Sublinear`) and
/// decaying ones (`Lambda2`) on the reaction side.
pub fn find_separatrix_kappa(params: &PhaseParams) -> Result<f64> {
    params.validate()?;
    let m = params.m;
    let alpha = params.alpha();
    if !(alpha > 1.0 / m && alpha <= 2.0 / (m + 1.0) + 1e-12) || params.q >= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "separatrix search needs q = alpha - 1 with alpha in (1/m, 2/(m+1)], got {params:?}"
        )));
    }
    let eta_max = 60.0;
    let decays = |k: f64| -> Result<bool> {
        Ok(matches!(
            integrate_from_origin(k, params, eta_max)?.terminal,
            Terminal::Lambda2 { .. }
        ))
    };
    if decays(0.0)? {
        return Err(Error::NoBracket("the kappa = 0 orbit already decays".into()));
    }
    let cap = 1e3 * m.sqrt();
    let mut hi = 1e-2;
    while !decays(hi)? {
        hi *= 2.0;
        if hi > cap {
            return Err(Error::NoBracket(format!("no decaying orbit for kappa <= {cap}")));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-8 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if decays(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

impl Trajectory {
    /// Profile `g(xi)` reconstructed from the orbit: `xi = e^eta`,
    /// `g = (m Y / xi^2)^(1/(1-m))`.
    pub fn pullback(&self) -> Vec<(f64, f64)> {
        let m = self.params.m;
        self.samples
            .iter()
            .filter(|s| s.y > 0.0)
            .map(|s| {
                let xi = s.eta.exp();
                (xi, (m * s.y / (xi * xi)).powf(1.0 / (1.0 - m)))
            })
            .collect()
    }

    /// Columns `eta, X, Y, terminal`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)?;
        w.write_record(["eta", "X", "Y", "terminal"])?;
        let tag = self.terminal.name();
        for s in &self.samples {
            w.write_record([s.eta.to_string(), s.x.to_string(), s.y.to_string(), tag.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_points() {
        let p = PhaseParams::psi(2.0, 0.6);
        assert_eq!(vector_field(0.0, 0.0, &p), (0.0, 0.0));
        let (a, b) = vector_field(0.5, 0.0, &p);
        assert!(a.abs() < 1e-15 && b == 0.0);
        for x in [-3.0, 0.2, 7.0] {
            assert_eq!(vector_field(x, 0.0, &p).1, 0.0);
        }
    }

    #[test]
    fn extreme_kappas() {
        let p = PhaseParams::psi(2.0, 0.6);
        let big = integrate_from_origin(20.0, &p, 60.0).unwrap();
        match big.terminal {
            Terminal::Lambda2 { x } => {
                assert!((x - p.lambda2_x()).abs() < 0.01 * p.lambda2_x().abs(), "{x}")
            }
            t => panic!("{t:?}"),
        }
        let small = integrate_from_origin(1e-3, &p, 60.0).unwrap();
        assert_eq!(small.terminal, Terminal::Lambda1Sublinear);
    }
}
