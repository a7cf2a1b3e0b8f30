//! Bisection on shooting parameters.

use super::profile::{integrate_profile_with, Classification, ProfileOptions, ProfileOutcome, ProfileProblem};
use crate::error::{Error, Result};

/// Relative tolerance on `lambda` and `mu`.
pub const TOL_LAMBDA: f64 = 1e-8;
/// Absolute tolerance on `alpha`.
pub const TOL_ALPHA: f64 = 1e-6;
/// Upper end of the bracket search on `lambda`.
pub const LAMBDA_CAP: f64 = 1e3;

#[derive(Debug, Clone)]
pub struct ShootSettings {
    pub tol: f64,
    pub cap: f64,
    pub profile: ProfileOptions,
}

impl Default for ShootSettings {
    fn default() -> Self {
        ShootSettings {
            tol: TOL_LAMBDA,
            cap: LAMBDA_CAP,
            profile: ProfileOptions::default(),
        }
    }
}

/// Bisection result: `lo` and `hi` carry opposite classifications.
#[derive(Debug, Clone)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub lo_outcome: ProfileOutcome,
    pub hi_outcome: ProfileOutcome,
}

impl Bracket {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Bisects `shoot` in `[lo, hi]` where `touches(lo) != touches(hi)`.
fn bisect(problem: &ProfileProblem, mut lo: f64, mut hi: f64, settings: &ShootSettings) -> Result<Bracket> {
    let run = |s: f64| integrate_profile_with(&problem.with_shoot(s), &settings.profile);
    let mut lo_out = run(lo)?;
    let mut hi_out = run(hi)?;
    let side = |o: &ProfileOutcome| o.classification.touches_zero();
    let lo_side = side(&lo_out);
    if lo_side == side(&hi_out) {
        return Err(Error::NoBracket(format!(
            "no change of behaviour between {lo} ({}) and {hi} ({})",
            lo_out.classification.name(),
            hi_out.classification.name()
        )));
    }
    while hi - lo > settings.tol * lo.abs().max(hi.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let out = run(mid)?;
        if side(&out) == lo_side {
            lo = mid;
            lo_out = out;
        } else {
            hi = mid;
            hi_out = out;
        }
    }
    Ok(Bracket {
        lo,
        hi,
        lo_outcome: lo_out,
        hi_outcome: hi_out,
    })
}

/// Expands `hi` by doubling from `start` until the classification differs
/// from the one at `lo`.
fn search_upper(problem: &ProfileProblem, lo: f64, start: f64, settings: &ShootSettings) -> Result<f64> {
    let touches = |s: f64| -> Result<bool> {
        Ok(integrate_profile_with(&problem.with_shoot(s), &settings.profile)?
            .classification
            .touches_zero())
    };
    let at_lo = touches(lo)?;
    let mut hi = start;
    while hi <= settings.cap {
        if touches(hi)? != at_lo {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::NoBracket(format!(
        "behaviour unchanged on [{lo}, {}]",
        settings.cap
    )))
}

/// Slope separating crossing profiles from positive decaying ones for the
/// equation on the reaction side.
pub fn find_lambda_plus(m: f64, alpha: f64) -> Result<f64> {
    lambda_plus_bracket(m, alpha, &ShootSettings::default()).map(|b| b.mid())
}

pub fn lambda_plus_bracket(m: f64, alpha: f64, settings: &ShootSettings) -> Result<Bracket> {
    let top = 2.0 / (m + 1.0);
    if !(m > 1.0) {
        return Err(Error::InvalidArgument(format!("need m > 1, got {m}")));
    }
    if !(alpha > 1.0 / m) {
        return Err(Error::InvalidArgument(format!(
            "no compactly supported profile for alpha = {alpha} <= 1/m = {}",
            1.0 / m
        )));
    }
    if alpha > top + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} exceeds 2/(m+1) = {top}"
        )));
    }
    let prob = ProfileProblem::psi(m, alpha, 0.0);
    let hi = search_upper(&prob, 0.0, 1e-3, settings)?;
    bisect(&prob, 0.0, hi, settings)
}

/// Slope separating unbounded profiles from crossing ones for the equation
/// on the reaction-free side.
pub fn find_lambda_minus(m: f64, alpha: f64) -> Result<f64> {
    lambda_minus_bracket(m, alpha, &ShootSettings::default()).map(|b| b.mid())
}

pub fn lambda_minus_bracket(m: f64, alpha: f64, settings: &ShootSettings) -> Result<Bracket> {
    if !(m > 1.0) {
        return Err(Error::InvalidArgument(format!("need m > 1, got {m}")));
    }
    if !(alpha > 0.0 && alpha < 2.0 / (m + 1.0)) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} outside (0, 2/(m+1))")));
    }
    let prob = ProfileProblem::phi(m, alpha, 0.0);
    let hi = search_upper(&prob, 0.0, 1e-2, settings)?;
    bisect(&prob, 0.0, hi, settings)
}

/// `alpha` at which the two one-sided slopes match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchResult {
    pub alpha_star: f64,
    pub lambda_at_match: f64,
    /// `2 (1 - alpha*) / ((m - 1) alpha*)`.
    pub gamma_star: f64,
    pub bracket: (f64, f64),
}

/// `alpha(gamma) = 2 / (2 + gamma (m - 1))`.
pub fn alpha_of_gamma(m: f64, gamma: f64) -> f64 {
    2.0 / (2.0 + gamma * (m - 1.0))
}

pub fn gamma_star(m: f64, alpha: f64) -> f64 {
    2.0 * (1.0 - alpha) / ((m - 1.0) * alpha)
}

/// `h(alpha) = lambda_plus - lambda_minus`; `+inf` when no compactly
/// supported profile exists below the bracket cap.
pub fn mismatch(m: f64, alpha: f64) -> Result<f64> {
    let plus = match find_lambda_plus(m, alpha) {
        Ok(v) => v,
        Err(Error::NoBracket(_)) => return Ok(f64::INFINITY),
        Err(e) => return Err(e),
    };
    Ok(plus - find_lambda_minus(m, alpha)?)
}

/// Margin kept from both ends of `(1/m, 2/(m+1))`.
pub fn alpha_search_interval(m: f64) -> (f64, f64) {
    let (a, b) = (1.0 / m, 2.0 / (m + 1.0));
    let eps = 1e-3 * (b - a);
    (a + eps, b - eps)
}

/// `(alpha, h(alpha))` on `n` equally spaced points of the search interval.
pub fn mismatch_scan(m: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let (a, b) = alpha_search_interval(m);
    (0..n)
        .map(|i| {
            let al = a + (b - a) * i as f64 / (n - 1) as f64;
            Ok((al, mismatch(m, al)?))
        })
        .collect()
}

pub fn find_alpha_star(m: f64) -> Result<MatchResult> {
    if !(m > 1.0) {
        return Err(Error::InvalidArgument(format!("need m > 1, got {m}")));
    }
    let (mut lo, mut hi) = alpha_search_interval(m);
    let h_lo = mismatch(m, lo)?;
    let h_hi = mismatch(m, hi)?;
    if !(h_lo > 0.0 && h_hi < 0.0) {
        return Err(Error::NoBracket(format!(
            "h does not change sign on [{lo}, {hi}]: h = {h_lo}, {h_hi}"
        )));
    }
    let bracket = (lo, hi);
    while hi - lo > TOL_ALPHA {
        let mid = 0.5 * (lo + hi);
        if mismatch(m, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha_star = 0.5 * (lo + hi);
    Ok(MatchResult {
        alpha_star,
        lambda_at_match: find_lambda_minus(m, alpha_star)?,
        gamma_star: gamma_star(m, alpha_star),
        bracket,
    })
}

/// Flux at the origin for which the blow-up sub-profile first returns to
/// zero, together with that profile.
#[derive(Debug, Clone)]
pub struct Mu0Result {
    /// A flux whose profile returns to zero at `xi0`.
    pub mu0: f64,
    pub xi0: f64,
    /// `(largest trapped flux, smallest returning flux)`; the lower end is 0
    /// when every positive flux returns.
    pub bracket: (f64, f64),
    pub outcome: ProfileOutcome,
}

pub fn find_mu0(m: f64, p: f64) -> Result<Mu0Result> {
    if !(p > 1.0) || p > m {
        return Err(Error::InvalidArgument(format!(
            "sub-profile shooting needs 1 < p <= m, got m = {m}, p = {p}"
        )));
    }
    let settings = ShootSettings {
        profile: ProfileOptions::default().with_xi_max(1e4),
        ..ShootSettings::default()
    };
    let prob = ProfileProblem::blowup_sub(m, p, 0.0);
    let run = |mu: f64| integrate_profile_with(&prob.with_shoot(mu), &settings.profile);
    // Probe fluxes 2^-10 .. 2^10.
    let mut probes = (-10..=10).map(|k| 2f64.powi(k));
    let first = probes.next().unwrap();
    let out = run(first)?;
    if out.classification.touches_zero() {
        return Ok(Mu0Result {
            mu0: first,
            xi0: out.classification.xi_stop().unwrap(),
            bracket: (0.0, first),
            outcome: out,
        });
    }
    let mut lo = first;
    for mu in probes {
        let out = run(mu)?;
        if out.classification.touches_zero() {
            let b = bisect(&prob, lo, mu, &settings)?;
            let xi0 = b.hi_outcome.classification.xi_stop().unwrap();
            return Ok(Mu0Result {
                mu0: b.hi,
                xi0,
                bracket: (b.lo, b.hi),
                outcome: b.hi_outcome,
            });
        }
        lo = mu;
    }
    Err(Error::NoBracket(format!(
        "no returning sub-profile for flux up to 1024 (m = {m}, p = {p})"
    )))
}

/// Threshold slope of the outer blow-up profile with `beta = 0` (`p = m`):
/// the profile between unbounded growth and a crossing has compact support.
pub fn outer_slope_bracket(m: f64, p: f64, settings: &ShootSettings) -> Result<Bracket> {
    let prob = ProfileProblem::blowup_outer(m, p, 0.0);
    let hi = search_upper(&prob, 0.0, 1e-2, settings)?;
    bisect(&prob, 0.0, hi, settings)
}

/// Classification helper used by monotonicity scans.
pub fn classify(problem: &ProfileProblem) -> Result<Classification> {
    Ok(integrate_profile_with(problem, &ProfileOptions::default())?.classification)
}
