//! Blow-up profile on the reaction-free side.

use super::profile::{Classification, ProfileKind, ProfileOptions, ProfileOutcome, ProfileProblem, ProfileSample};
use super::shooting::{outer_slope_bracket, ShootSettings};
use crate::error::{Error, Result};
use crate::fit::line_fit;
use crate::integrate::{Advance, Dopri, Options};

/// Outer profile normalised to `F(0) = 1`, sampled on `xi <= 0`.
#[derive(Debug, Clone)]
pub struct OuterProfile {
    pub m: f64,
    pub p: f64,
    pub outcome: ProfileOutcome,
    /// `F'(0)`.
    pub slope_at_origin: f64,
    /// Fitted `gamma` in `F ~ |xi|^-gamma` (`None` for compact profiles).
    pub tail_exponent: Option<f64>,
}

/// Builds the outer blow-up profile.
///
/// For `p = m` the drift vanishes and the profile with compact support is
/// found by shooting on `F'(0)`. For `p > m` the decaying profile is a
/// repeller of the forward flow, so it is computed backwards from a large
/// `|xi|` (where every backward orbit is drawn onto it), then rescaled with
/// the invariance `C F(C^((1-m)/2) xi)` to `F(0) = 1`.
pub fn blowup_outer_profile(m: f64, p: f64) -> Result<OuterProfile> {
    if !(p > 1.0) || !(m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need p > 1 and m > 0, got m = {m}, p = {p}"
        )));
    }
    if p < m {
        return Err(Error::InvalidArgument(format!(
            "outer profile needs p >= m, got m = {m}, p = {p}"
        )));
    }
    if p == m {
        let b = outer_slope_bracket(m, p, &ShootSettings::default())?;
        let mut outcome = b.hi_outcome;
        flip(&mut outcome);
        return Ok(OuterProfile {
            m,
            p,
            outcome,
            slope_at_origin: b.hi,
            tail_exponent: None,
        });
    }
    let prob = ProfileProblem::blowup_outer(m, p, 0.0);
    let s_far = 1e3;
    let samples = backward_from_tail(&prob, s_far)?;
    let g0 = samples[0].f;
    let flux0 = samples[0].flux;
    // Normalise: F -> F(k s) / g0 with k = g0^((m-1)/2).
    let c = 1.0 / g0;
    let k = c.powf(0.5 * (1.0 - m));
    let mut normalized: Vec<ProfileSample> = samples
        .iter()
        .map(|s| ProfileSample {
            xi: -s.xi / k,
            f: c * s.f,
            flux: -c.powf(m) * k * s.flux,
        })
        .collect();
    normalized.reverse();
    // G' = w / (m G^(m-1)) at s = 0, rescaled.
    let slope_g = flux0 / (m * g0.powf(m - 1.0));
    let slope_at_origin = -c * k * slope_g;
    let s_end = s_far / k;
    let tail: Vec<&ProfileSample> = normalized
        .iter()
        .filter(|s| -s.xi >= 0.01 * s_end && -s.xi <= 0.1 * s_end)
        .collect();
    let x: Vec<f64> = tail.iter().map(|s| (-s.xi).ln()).collect();
    let y: Vec<f64> = tail.iter().map(|s| s.f.ln()).collect();
    let gamma = -line_fit(&x, &y)?.slope;
    Ok(OuterProfile {
        m,
        p,
        outcome: ProfileOutcome {
            classification: Classification::PositiveDecaying { decay_exponent: gamma },
            samples: normalized,
            flagged: false,
        },
        slope_at_origin,
        tail_exponent: Some(gamma),
    })
}

/// Integrates the outer equation from `s_far` down to `s = 0`, starting from
/// a flat state. Samples are returned in increasing `s` with `xi = s`.
fn backward_from_tail(prob: &ProfileProblem, s_far: f64) -> Result<Vec<ProfileSample>> {
    let m = prob.m;
    let y0 = [1.0, 0.0];
    let rhs = |tau: f64, y: &[f64; 2]| [-y[1], -prob.second_derivative(-tau, y[0], y[1])];
    let valid = |y: &[f64; 2]| y[0] > 0.0;
    let opts = Options {
        rtol: 1e-12,
        atol: 1e-14,
        ..Options::default()
    };
    let mut ode = Dopri::new(-s_far, y0, 1e-3, opts);
    let mut out = vec![ProfileSample {
        xi: s_far,
        f: 1.0,
        flux: 0.0,
    }];
    while ode.t < 0.0 {
        if ode.advance(&rhs, &valid, 0.0) == Advance::Blocked {
            return Err(Error::Integration(format!(
                "outer profile integration stalled at s = {}",
                -ode.t
            )));
        }
        out.push(ProfileSample {
            xi: -ode.t,
            f: ode.y[0].powf(1.0 / m),
            flux: ode.y[1],
        });
    }
    out.reverse();
    Ok(out)
}

/// Maps samples in `s = -xi` to increasing `xi <= 0`.
fn flip(outcome: &mut ProfileOutcome) {
    for s in outcome.samples.iter_mut() {
        s.xi = -s.xi;
        s.flux = -s.flux;
    }
    outcome.samples.reverse();
}

/// `C F(C^((1-m)/2) xi)` sampled at the points `xi / C^((1-m)/2)` so that
/// the family member can be checked against the equation.
pub fn rescale_outer(profile: &OuterProfile, c: f64) -> Vec<ProfileSample> {
    let m = profile.m;
    let k = c.powf(0.5 * (1.0 - m));
    profile
        .outcome
        .samples
        .iter()
        .map(|s| ProfileSample {
            xi: s.xi / k,
            f: c * s.f,
            flux: c.powf(m) * k * s.flux,
        })
        .collect()
}

/// Residual of the outer equation `(F^m)'' - beta xi F' - alpha F` at the
/// interior samples, by central differences on a nonuniform grid.
pub fn outer_residual(m: f64, p: f64, samples: &[ProfileSample], derivative_drift: bool) -> f64 {
    let alpha = 1.0 / (p - 1.0);
    let beta = 0.5 * (p - m) * alpha;
    let kind = ProfileKind::BlowUpOuter { p, derivative_drift };
    let prob = ProfileProblem {
        kind,
        m,
        alpha,
        beta,
        shoot: 0.0,
    };
    let mut worst: f64 = 0.0;
    for k in 1..samples.len().saturating_sub(1) {
        let (a, b, c) = (samples[k - 1], samples[k], samples[k + 1]);
        let h1 = b.xi - a.xi;
        let h2 = c.xi - b.xi;
        if !(h1 > 0.0 && h2 > 0.0) {
            continue;
        }
        // Three-point derivative of the flux on a nonuniform grid.
        let d = (-h2 / (h1 * (h1 + h2))) * a.flux + ((h2 - h1) / (h1 * h2)) * b.flux + (h1 / (h2 * (h1 + h2))) * c.flux;
        // The equation in s = -xi with G(s) = F(-s): (G^m)'' equals (F^m)''
        // and the flux changes sign.
        let rhs = prob.second_derivative(-b.xi, b.f.powf(m), -b.flux);
        worst = worst.max((d - rhs).abs() / (1.0 + b.f.abs()));
    }
    worst
}

/// Forward-shooting bracket check: for `p > m` the slope `F'(0)` of the
/// decaying profile separates unbounded growth (smaller slopes) from
/// crossings (larger slopes).
pub fn outer_forward_classification(m: f64, p: f64, slope: f64) -> Result<Classification> {
    let prob = ProfileProblem::blowup_outer(m, p, slope);
    Ok(super::profile::integrate_profile_with(&prob, &ProfileOptions::default().with_xi_max(50.0))?.classification)
}
