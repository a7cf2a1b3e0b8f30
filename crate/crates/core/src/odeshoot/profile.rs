//! Self-similar profile equations written as first-order systems in
//! `v = f^m` and `w = (f^m)'`.
//!
//! Every equation handled here has the form
//!
//! ```text
//! (f^m)'' = -drift * xi * f' + linear * f + source * f^p
//! ```
//!
//! and `f' = w / (m f^(m-1))` is only formed while `v > 0`. The validity
//! predicate `v > 0` makes the integrator stop at a contact with zero, which
//! is then classified from the flux `w` at the stopping point.

use crate::error::{Error, Result};
use crate::fit::line_fit;
use crate::integrate::{Advance, Dopri, Options};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    /// `(f^m)'' - beta xi f' + f^p - alpha f = 0`, `f(0) = 0`,
    /// `(f^m)'(0) = mu`.
    BlowUpSub { p: f64 },
    /// `(f^m)'' + beta xi f' + (1 - alpha) f = 0`, `f(0) = 1`, `f'(0) = lambda`.
    Psi,
    /// `(f^m)'' + beta xi f' - alpha f = 0`, `f(0) = 1`, `f'(0) = -lambda`.
    Phi,
    /// `(g^m)'' + beta xi g' - q g = 0` on `xi < xi0` with a clean contact at
    /// `xi0`, integrated backwards.
    Gp { q: f64, xi0: f64 },
    /// Blow-up profile on the reaction-free side, written in `s = -xi > 0`:
    /// `(G^m)'' - beta s G' - alpha G = 0`, `G(0) = 1`, `G'(0) = -slope`.
    /// With `derivative_drift = false` the drift term is `beta s G` instead.
    BlowUpOuter { p: f64, derivative_drift: bool },
}

/// One profile equation with its shooting parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileProblem {
    pub kind: ProfileKind,
    pub m: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `lambda`, `mu` or the outer slope, depending on `kind`.
    pub shoot: f64,
}

impl ProfileProblem {
    pub fn psi(m: f64, alpha: f64, lambda: f64) -> Self {
        ProfileProblem {
            kind: ProfileKind::Psi,
            m,
            alpha,
            beta: 0.5 * (m - 1.0) * alpha,
            shoot: lambda,
        }
    }

    pub fn phi(m: f64, alpha: f64, lambda: f64) -> Self {
        ProfileProblem {
            kind: ProfileKind::Phi,
            ..Self::psi(m, alpha, lambda)
        }
    }

    pub fn gp(m: f64, beta: f64, q: f64, xi0: f64) -> Self {
        ProfileProblem {
            kind: ProfileKind::Gp { q, xi0 },
            m,
            alpha: 0.0,
            beta,
            shoot: 0.0,
        }
    }

    pub fn blowup_sub(m: f64, p: f64, mu: f64) -> Self {
        let alpha = 1.0 / (p - 1.0);
        ProfileProblem {
            kind: ProfileKind::BlowUpSub { p },
            m,
            alpha,
            beta: 0.5 * (p - m) * alpha,
            shoot: mu,
        }
    }

    pub fn blowup_outer(m: f64, p: f64, slope: f64) -> Self {
        ProfileProblem {
            kind: ProfileKind::BlowUpOuter {
                p,
                derivative_drift: true,
            },
            ..Self::blowup_sub(m, p, slope)
        }
    }

    pub fn with_shoot(mut self, shoot: f64) -> Self {
        self.shoot = shoot;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.m > 0.0 && self.m.is_finite()) {
            return bad(format!("m must be positive, got {}", self.m));
        }
        if !self.alpha.is_finite() || !self.beta.is_finite() || !self.shoot.is_finite() {
            return bad("profile parameters must be finite".into());
        }
        match self.kind {
            ProfileKind::BlowUpSub { p } | ProfileKind::BlowUpOuter { p, .. } if !(p > 1.0) => {
                bad(format!("blow-up profiles need p > 1, got {p}"))
            }
            ProfileKind::Gp { xi0, .. } if !(xi0 > 0.0) || !(self.m > 1.0) || !(self.beta > 0.0) => {
                bad("contact problem needs m > 1, beta > 0 and xi0 > 0".into())
            }
            _ => Ok(()),
        }
    }

    /// Reaction exponent entering the residual weight.
    pub fn power(&self) -> f64 {
        match self.kind {
            ProfileKind::BlowUpSub { p } => p,
            _ => 1.0,
        }
    }

    /// `f` and `f'` from the state.
    pub fn recover(&self, v: f64, w: f64) -> (f64, f64) {
        let m = self.m;
        if m == 1.0 {
            return (v, w);
        }
        let f = v.powf(1.0 / m);
        (f, w / (m * f.powf(m - 1.0)))
    }

    /// `(f^m)''` at the given point.
    pub fn second_derivative(&self, xi: f64, v: f64, w: f64) -> f64 {
        let (f, fp) = self.recover(v, w);
        let (a, b) = (self.alpha, self.beta);
        match self.kind {
            ProfileKind::Psi => -b * xi * fp - (1.0 - a) * f,
            ProfileKind::Phi => -b * xi * fp + a * f,
            ProfileKind::Gp { q, .. } => -b * xi * fp + q * f,
            ProfileKind::BlowUpSub { p } => b * xi * fp - f.powf(p) + a * f,
            ProfileKind::BlowUpOuter { derivative_drift, .. } => {
                if derivative_drift {
                    b * xi * fp + a * f
                } else {
                    -b * xi * f + a * f
                }
            }
        }
    }

    /// Independent-variable value and state `(f^m, (f^m)')` where integration
    /// starts.
    pub fn initial_state(&self) -> (f64, [f64; 2]) {
        let m = self.m;
        match self.kind {
            ProfileKind::Psi => (0.0, [1.0, m * self.shoot]),
            ProfileKind::Phi => (0.0, [1.0, -m * self.shoot]),
            ProfileKind::BlowUpOuter { .. } => (0.0, [1.0, -m * self.shoot]),
            ProfileKind::BlowUpSub { .. } => {
                let eps = 1e-10;
                (eps, [self.shoot * eps, self.shoot])
            }
            ProfileKind::Gp { xi0, .. } => {
                // g ~ ((m-1) beta xi0 (xi0 - xi) / m)^(1/(m-1)), (g^m)' ~ -beta xi0 g.
                let delta = 1e-6 * xi0;
                let g = ((m - 1.0) * self.beta * xi0 * delta / m).powf(1.0 / (m - 1.0));
                (xi0 - delta, [g.powf(m), -self.beta * xi0 * g])
            }
        }
    }

    /// Exponent `gamma` of the expected algebraic decay `f ~ xi^-gamma`.
    pub fn predicted_decay(&self) -> Option<f64> {
        match self.kind {
            ProfileKind::Psi if self.beta > 0.0 => Some((1.0 - self.alpha) / self.beta),
            ProfileKind::BlowUpOuter { .. } if self.beta > 0.0 => Some(self.alpha / self.beta),
            _ => None,
        }
    }

    /// Kinds whose orbits cannot turn back down once `f' > 0`.
    fn monotone_after_turn(&self) -> bool {
        match self.kind {
            ProfileKind::Phi => true,
            ProfileKind::BlowUpOuter { derivative_drift, .. } => derivative_drift,
            _ => false,
        }
    }

    /// Lyapunov energy `w^2 / 2 + V(f)` of the sub-profile equation; it is
    /// nonincreasing when `beta <= 0`.
    pub fn sub_energy(&self, v: f64, w: f64) -> Option<f64> {
        match self.kind {
            ProfileKind::BlowUpSub { p } => {
                let m = self.m;
                let f = v.powf(1.0 / m);
                let pot = m / (p + m) * f.powf(p + m) - self.alpha * m / (m + 1.0) * f.powf(m + 1.0);
                Some(0.5 * w * w + pot)
            }
            _ => None,
        }
    }
}

/// Outcome of integrating a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    /// `f` reaches zero with a nonzero outward flux.
    CrossesZeroBadSlope {
        xi_stop: f64,
        slope: f64,
    },
    /// `f` and `(f^m)'` vanish together.
    CompactSupportClean {
        xi_stop: f64,
    },
    /// Positive with `f ~ xi^-decay_exponent`.
    PositiveDecaying {
        decay_exponent: f64,
    },
    PositiveUnbounded,
    /// Positive and trapped in a potential well (negative energy).
    PositiveBounded,
    /// Backward contact problem reached the origin with `g(0) = value`.
    ReachesOrigin {
        value: f64,
        slope: f64,
    },
    Inconclusive {
        xi_max: f64,
    },
}

impl Classification {
    pub fn touches_zero(&self) -> bool {
        matches!(
            self,
            Classification::CrossesZeroBadSlope { .. } | Classification::CompactSupportClean { .. }
        )
    }

    pub fn xi_stop(&self) -> Option<f64> {
        match *self {
            Classification::CrossesZeroBadSlope { xi_stop, .. } | Classification::CompactSupportClean { xi_stop } => {
                Some(xi_stop)
            }
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Classification::CrossesZeroBadSlope { .. } => "CrossesZeroBadSlope",
            Classification::CompactSupportClean { .. } => "CompactSupportClean",
            Classification::PositiveDecaying { .. } => "PositiveDecaying",
            Classification::PositiveUnbounded => "PositiveUnbounded",
            Classification::PositiveBounded => "PositiveBounded",
            Classification::ReachesOrigin { .. } => "ReachesOrigin",
            Classification::Inconclusive { .. } => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub xi: f64,
    pub f: f64,
    /// `(f^m)'`.
    pub flux: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOutcome {
    pub classification: Classification,
    /// Samples in increasing `xi`.
    pub samples: Vec<ProfileSample>,
    /// The integrator stalled away from a contact; the classification comes
    /// from the last reliable state.
    pub flagged: bool,
}

impl ProfileOutcome {
    pub fn last(&self) -> ProfileSample {
        *self.samples.last().expect("nonempty profile")
    }

    /// Linear interpolation of `f`; `None` outside the samples.
    pub fn value_at(&self, xi: f64) -> Option<f64> {
        let s = &self.samples;
        if s.is_empty() || xi < s[0].xi || xi > s[s.len() - 1].xi {
            return None;
        }
        let j = s.partition_point(|p| p.xi <= xi).clamp(1, s.len() - 1);
        let (a, b) = (s[j - 1], s[j]);
        if b.xi == a.xi {
            return Some(a.f);
        }
        let t = (xi - a.xi) / (b.xi - a.xi);
        Some(a.f * (1.0 - t) + b.f * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOptions {
    pub xi_max: f64,
    pub rtol: f64,
    pub atol: f64,
    /// A contact is clean when `|(f^m)'| <= slope_tol * max(1, |initial flux|)`.
    pub slope_tol: f64,
    /// Number of times `xi_max` is multiplied by 4 on an inconclusive tail.
    pub extensions: usize,
    /// Record samples on a uniform grid of this spacing instead of at the
    /// accepted steps.
    pub sample_step: Option<f64>,
    /// A decaying tail is accepted once `xi^2 f^(1-m) / m` exceeds this and
    /// the local exponent `xi f'/f` matches the prediction; past that point
    /// the equation is stiff and integrating on gains nothing.
    pub stiff_tail: f64,
    /// Hard cap on accepted steps.
    pub max_steps: usize,
    /// Stop as soon as a profile that can only grow starts increasing.
    /// Turn off to keep sampling it up to `xi_max`.
    pub stop_on_turn: bool,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            xi_max: 1e3,
            rtol: 1e-11,
            atol: 1e-30,
            slope_tol: 1e-6,
            extensions: 2,
            sample_step: None,
            stiff_tail: 1e6,
            max_steps: 2_000_000,
            stop_on_turn: true,
        }
    }
}

impl ProfileOptions {
    pub fn with_xi_max(mut self, xi_max: f64) -> Self {
        self.xi_max = xi_max;
        self
    }

    pub fn without_turn_stop(mut self) -> Self {
        self.stop_on_turn = false;
        self
    }

    pub fn sampled(mut self, step: f64) -> Self {
        self.sample_step = Some(step);
        self
    }
}

/// Integrates a profile with default options up to `xi_max`.
pub fn integrate_profile(problem: &ProfileProblem, xi_max: f64) -> Result<ProfileOutcome> {
    integrate_profile_with(problem, &ProfileOptions::default().with_xi_max(xi_max))
}

pub fn integrate_profile_with(problem: &ProfileProblem, opts: &ProfileOptions) -> Result<ProfileOutcome> {
    problem.validate()?;
    if !(opts.xi_max > 0.0) || !opts.xi_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "xi_max must be positive and finite, got {}",
            opts.xi_max
        )));
    }
    if let ProfileKind::Gp { .. } = problem.kind {
        return integrate_contact(problem, opts);
    }
    if let ProfileKind::BlowUpSub { .. } = problem.kind {
        if !(problem.shoot > 0.0) {
            // f(0) = 0 with no outward flux: the profile never becomes positive.
            let (xi, _) = problem.initial_state();
            return Ok(ProfileOutcome {
                classification: Classification::CrossesZeroBadSlope {
                    xi_stop: xi,
                    slope: problem.shoot,
                },
                samples: vec![ProfileSample {
                    xi: 0.0,
                    f: 0.0,
                    flux: problem.shoot,
                }],
                flagged: false,
            });
        }
    }
    let mut xi_max = opts.xi_max;
    let mut outcome = forward(problem, opts, xi_max)?;
    for _ in 0..opts.extensions {
        if !matches!(outcome.classification, Classification::Inconclusive { .. }) {
            break;
        }
        xi_max *= 4.0;
        outcome = forward(problem, opts, xi_max)?;
    }
    Ok(outcome)
}

fn options(opts: &ProfileOptions) -> Options {
    Options {
        rtol: opts.rtol,
        atol: opts.atol,
        ..Options::default()
    }
}

fn forward(problem: &ProfileProblem, opts: &ProfileOptions, xi_max: f64) -> Result<ProfileOutcome> {
    let (xi0, y0) = problem.initial_state();
    let rhs = |xi: f64, y: &[f64; 2]| [y[1], problem.second_derivative(xi, y[0], y[1])];
    let valid = |y: &[f64; 2]| y[0] > 0.0;
    let slope_scale = y0[1].abs().max(1.0);
    let h0 = opts.sample_step.unwrap_or(1e-3).min(1e-3);
    let mut ode = Dopri::new(xi0, y0, h0, options(opts));
    let mut samples = Vec::new();
    let push = |samples: &mut Vec<ProfileSample>, xi: f64, y: &[f64; 2]| {
        let (f, _) = problem.recover(y[0].max(0.0), y[1]);
        samples.push(ProfileSample { xi, f, flux: y[1] });
    };
    if let ProfileKind::BlowUpSub { .. } = problem.kind {
        samples.push(ProfileSample {
            xi: 0.0,
            f: 0.0,
            flux: problem.shoot,
        });
    }
    push(&mut samples, xi0, &y0);
    let mut next_sample = opts.sample_step.map(|h| xi0 + h);
    let mut turned = false;
    loop {
        let limit = next_sample.unwrap_or(xi_max).min(xi_max);
        let status = ode.advance(&rhs, &valid, limit);
        if status == Advance::Blocked {
            if ode.t >= xi_max {
                break;
            }
            if next_sample.is_some() && ode.t >= limit {
                // Exactly on a sample point.
            } else {
                return Ok(contact(problem, ode.t, ode.y, slope_scale, opts, samples));
            }
        }
        match next_sample {
            Some(ref mut ns) => {
                if ode.t >= *ns - 1e-12 * ns.abs().max(1.0) {
                    push(&mut samples, ode.t, &ode.y);
                    *ns += opts.sample_step.unwrap();
                }
            }
            None => push(&mut samples, ode.t, &ode.y),
        }
        if opts.stop_on_turn && problem.monotone_after_turn() && ode.y[1] > 0.0 {
            turned = true;
            break;
        }
        if let Some(gamma) = stiff_decay(problem, ode.t, &ode.y, opts.stiff_tail) {
            if samples.last().is_none_or(|s| s.xi < ode.t) {
                push(&mut samples, ode.t, &ode.y);
            }
            return Ok(ProfileOutcome {
                classification: Classification::PositiveDecaying { decay_exponent: gamma },
                samples,
                flagged: false,
            });
        }
        if ode.steps >= opts.max_steps {
            return Ok(ProfileOutcome {
                classification: Classification::Inconclusive { xi_max: ode.t },
                samples,
                flagged: true,
            });
        }
        if let Some(e) = problem.sub_energy(ode.y[0], ode.y[1]) {
            if problem.beta <= 0.0 && e < 0.0 {
                if samples.last().is_none_or(|s| s.xi < ode.t) {
                    push(&mut samples, ode.t, &ode.y);
                }
                return Ok(ProfileOutcome {
                    classification: Classification::PositiveBounded,
                    samples,
                    flagged: false,
                });
            }
        }
        if ode.t >= xi_max {
            break;
        }
    }
    if samples.last().is_none_or(|s| s.xi < ode.t) {
        push(&mut samples, ode.t, &ode.y);
    }
    if turned {
        return Ok(ProfileOutcome {
            classification: Classification::PositiveUnbounded,
            samples,
            flagged: false,
        });
    }
    Ok(ProfileOutcome {
        classification: tail_class(problem, &samples, xi_max),
        samples,
        flagged: false,
    })
}

/// Local decay exponent `-xi f'/f` once the tail is settled on the
/// predicted algebraic decay.
fn stiff_decay(problem: &ProfileProblem, xi: f64, y: &[f64; 2], threshold: f64) -> Option<f64> {
    let pred = problem.predicted_decay()?;
    if !(xi > 0.0 && y[0] > 0.0) {
        return None;
    }
    let m = problem.m;
    let (f, fp) = problem.recover(y[0], y[1]);
    let big_y = xi * xi * f.powf(1.0 - m) / m;
    let gamma = -xi * fp / f;
    (big_y > threshold && (gamma - pred).abs() <= 1e-2 * pred).then_some(gamma)
}

fn contact(
    problem: &ProfileProblem,
    xi: f64,
    y: [f64; 2],
    slope_scale: f64,
    opts: &ProfileOptions,
    mut samples: Vec<ProfileSample>,
) -> ProfileOutcome {
    let (f, _) = problem.recover(y[0].max(0.0), y[1]);
    if samples.last().is_none_or(|s| s.xi < xi) {
        samples.push(ProfileSample { xi, f, flux: y[1] });
    }
    // A genuine contact has `f^m` small relative to its starting size.
    let near_zero = y[0] < 1e-6;
    let tol = opts.slope_tol * slope_scale;
    let (classification, flagged) = if !near_zero {
        (Classification::Inconclusive { xi_max: xi }, true)
    } else if y[1].abs() <= tol {
        (Classification::CompactSupportClean { xi_stop: xi }, false)
    } else if y[1] < 0.0 {
        (
            Classification::CrossesZeroBadSlope {
                xi_stop: xi,
                slope: y[1],
            },
            false,
        )
    } else {
        (Classification::Inconclusive { xi_max: xi }, true)
    };
    ProfileOutcome {
        classification,
        samples,
        flagged,
    }
}

/// Classifies a positive profile from its last decade of samples.
fn tail_class(problem: &ProfileProblem, samples: &[ProfileSample], xi_max: f64) -> Classification {
    let last = samples[samples.len() - 1];
    let lo = xi_max / 10.0;
    let tail: Vec<&ProfileSample> = samples.iter().filter(|s| s.xi >= lo && s.f > 0.0).collect();
    if last.flux > 0.0 {
        return Classification::PositiveUnbounded;
    }
    if tail.len() < 4 {
        return Classification::Inconclusive { xi_max };
    }
    let x: Vec<f64> = tail.iter().map(|s| s.xi.ln()).collect();
    let y: Vec<f64> = tail.iter().map(|s| s.f.ln()).collect();
    let Ok(fit) = line_fit(&x, &y) else {
        return Classification::Inconclusive { xi_max };
    };
    let gamma = -fit.slope;
    match problem.predicted_decay() {
        Some(pred) if (gamma - pred).abs() <= 0.1 * pred => Classification::PositiveDecaying { decay_exponent: gamma },
        None if gamma > 0.0 => Classification::PositiveDecaying { decay_exponent: gamma },
        _ => Classification::Inconclusive { xi_max },
    }
}

/// Backward integration of the contact problem from just inside `xi0`.
fn integrate_contact(problem: &ProfileProblem, opts: &ProfileOptions) -> Result<ProfileOutcome> {
    let (start, y0) = problem.initial_state();
    // tau = -xi turns the backward sweep into a forward one.
    let rhs = |tau: f64, y: &[f64; 2]| [-y[1], -problem.second_derivative(-tau, y[0], y[1])];
    let valid = |y: &[f64; 2]| y[0] > 0.0;
    let mut ode = Dopri::new(-start, y0, 1e-6 * start, options(opts));
    let mut samples = Vec::new();
    let push = |samples: &mut Vec<ProfileSample>, tau: f64, y: &[f64; 2]| {
        let (f, _) = problem.recover(y[0].max(0.0), y[1]);
        samples.push(ProfileSample {
            xi: -tau,
            f,
            flux: y[1],
        });
    };
    push(&mut samples, -start, &y0);
    let scale = samples[0].f.max(1e-300);
    let mut classification = None;
    while ode.t < 0.0 {
        match ode.advance(&rhs, &valid, 0.0) {
            Advance::Step => push(&mut samples, ode.t, &ode.y),
            Advance::Blocked => {
                let (f, _) = problem.recover(ode.y[0].max(0.0), ode.y[1]);
                if f < 1e-3 * scale.max(1e-6) || ode.y[0] < 1e-8 {
                    classification = Some(Classification::CrossesZeroBadSlope {
                        xi_stop: -ode.t,
                        slope: ode.y[1],
                    });
                } else {
                    classification = Some(Classification::Inconclusive { xi_max: -ode.t });
                }
                break;
            }
        }
    }
    let classification = classification.unwrap_or_else(|| {
        let (f, fp) = problem.recover(ode.y[0], ode.y[1]);
        Classification::ReachesOrigin { value: f, slope: fp }
    });
    samples.reverse();
    Ok(ProfileOutcome {
        classification,
        samples,
        flagged: matches!(classification, Classification::Inconclusive { .. }),
    })
}

/// Largest pointwise residual of a uniformly sampled profile, weighted by
/// `1 + |f|^max(p, 1)`.
///
/// `(f^m)''` is taken from a fourth-order central difference of the sampled
/// flux and compared with the right-hand side evaluated from the samples.
/// Points within two samples of a contact (where `f <= f_floor`) are skipped,
/// as is anything after the first irregular spacing.
pub fn profile_residual(problem: &ProfileProblem, samples: &[ProfileSample], f_floor: f64) -> Result<f64> {
    let n = samples.len();
    if n < 5 {
        return Err(Error::InsufficientData("residual needs at least five samples".into()));
    }
    let h = samples[1].xi - samples[0].xi;
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("residual needs increasing samples".into()));
    }
    // A contact or an early exit may append one off-grid sample; only the
    // uniform prefix is used.
    let n = 1 + samples
        .windows(2)
        .take_while(|w| ((w[1].xi - w[0].xi) - h).abs() <= 1e-9 * h)
        .count();
    if n < 5 {
        return Err(Error::InvalidArgument("residual needs uniformly spaced samples".into()));
    }
    let weight = problem.power().max(1.0);
    let mut worst: f64 = 0.0;
    for k in 2..n - 2 {
        if samples[k - 2..=k + 2].iter().any(|s| s.f <= f_floor) {
            continue;
        }
        let w = |j: usize| samples[j].flux;
        let d = (w(k - 2) - 8.0 * w(k - 1) + 8.0 * w(k + 1) - w(k + 2)) / (12.0 * h);
        let s = samples[k];
        let rhs = problem.second_derivative(s.xi, s.f.powf(problem.m), s.flux);
        let r = (d - rhs).abs() / (1.0 + s.f.abs().powf(weight));
        worst = worst.max(r);
    }
    Ok(worst)
}
