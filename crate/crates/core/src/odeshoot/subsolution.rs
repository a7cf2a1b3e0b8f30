//! Four-piece self-similar subsolution for `p < 1 <= m`.
//!
//! With `alpha = 1/(1-p)` and `beta = -(m-p) alpha / 2` the profile of
//! `t^alpha f(x t^beta)` must satisfy
//! `L(f) = (f^m)'' - beta xi f' + a(xi) f^p - alpha f >= 0`.

use super::profile::{Classification, ProfileKind, ProfileOutcome, ProfileProblem};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FourPieceSubsolution {
    pub m: f64,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    /// Left edge of the support.
    pub xi0: f64,
    /// Vertex of the quadratic piece on the reaction side.
    pub xi1: f64,
    pub f3_at_xi1: f64,
    /// Tail piece on `xi >= xi1`.
    pub tail: ProfileOutcome,
    /// Where the tail reaches zero, if it does.
    pub xi2: Option<f64>,
    /// Smallest residual `L(f)` found on the check grid.
    pub min_residual: f64,
}

impl FourPieceSubsolution {
    fn slope(&self) -> f64 {
        (2.0 * self.alpha).sqrt() * self.a.powf((1.0 + self.m) / (2.0 * self.m))
    }

    fn curvature3(&self) -> f64 {
        self.a.powf(self.p / self.m) - self.alpha * self.a.powf(1.0 / self.m)
    }

    /// `(f^m, (f^m)', (f^m)'')` of the two quadratic pieces.
    fn quadratic(&self, xi: f64) -> (f64, f64, f64) {
        let s = self.slope();
        if xi <= 0.0 {
            let c = self.alpha * self.a.powf(1.0 / self.m);
            (self.a + s * xi + 0.5 * c * xi * xi, s + c * xi, c)
        } else {
            let c = self.curvature3();
            (self.a + s * xi - 0.5 * c * xi * xi, s - c * xi, -c)
        }
    }

    pub fn value(&self, xi: f64) -> f64 {
        if xi <= self.xi0 {
            0.0
        } else if xi <= self.xi1 {
            self.quadratic(xi).0.max(0.0).powf(1.0 / self.m)
        } else {
            match self.xi2 {
                Some(end) if xi >= end => 0.0,
                _ => self.tail.value_at(xi).unwrap_or(0.0),
            }
        }
    }

    /// `L(f)` on the closed-form pieces (`xi0 < xi <= xi1`).
    pub fn residual_closed(&self, xi: f64) -> f64 {
        let (v, w, dw) = self.quadratic(xi);
        let m = self.m;
        let f = v.max(0.0).powf(1.0 / m);
        let fp = if f > 0.0 { w / (m * f.powf(m - 1.0)) } else { 0.0 };
        let react = if xi > 0.0 { f.powf(self.p) } else { 0.0 };
        dw - self.beta * xi * fp + react - self.alpha * f
    }
}

/// Builds the subsolution for the given `A` and checks it on a grid.
pub fn build_subsolution_p_lt_1(m: f64, p: f64, a: f64) -> Result<FourPieceSubsolution> {
    if !(p > 0.0 && p < 1.0 && m >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "four-piece construction needs p < 1 <= m, got m = {m}, p = {p}"
        )));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("A must be positive, got {a}")));
    }
    let alpha = 1.0 / (1.0 - p);
    let beta = -0.5 * (m - p) * alpha;
    let r = alpha * a.powf((1.0 - p) / m);
    if !(r < 1.0) {
        return Err(Error::ConditionViolated(format!(
            "alpha A^((1-p)/m) = {r} must be < 1 for the quadratic piece to turn"
        )));
    }
    let xi0 = -(2.0 / alpha).sqrt() * a.powf((m - 1.0) / (2.0 * m));
    // Vertex of f3^m: the closed form carries the factor 1/(1 - alpha A^((1-p)/m)).
    let xi1 = (2.0 * alpha).sqrt() * a.powf((1.0 + m - 2.0 * p) / (2.0 * m)) / (1.0 - r);
    let f3_at_xi1 = a.powf(1.0 / m) * (1.0 + r / (1.0 - r)).powf(1.0 / m);
    let increasing_limit = (p / alpha).powf(1.0 / (1.0 - p));
    if !(f3_at_xi1 < increasing_limit) {
        return Err(Error::ConditionViolated(format!(
            "f^p - alpha f must increase on [0, xi1]: f3(xi1) = {f3_at_xi1} >= (p/alpha)^(1/(1-p)) = {increasing_limit}"
        )));
    }
    let decreasing_limit = (1.0 / alpha).powf(alpha);
    if !(f3_at_xi1 < decreasing_limit) {
        return Err(Error::ConditionViolated(format!(
            "f3(xi1) = {f3_at_xi1} must be below (1/alpha)^alpha = {decreasing_limit}"
        )));
    }
    let tail = tail_piece(m, p, alpha, beta, xi1, f3_at_xi1)?;
    let xi2 = tail.classification.xi_stop();
    let mut sub = FourPieceSubsolution {
        m,
        p,
        alpha,
        beta,
        a,
        xi0,
        xi1,
        f3_at_xi1,
        tail,
        xi2,
        min_residual: 0.0,
    };
    let n = 2000;
    let mut worst = f64::INFINITY;
    for i in 1..=n {
        let xi = xi0 + (xi1 - xi0) * i as f64 / n as f64;
        worst = worst.min(sub.residual_closed(xi));
    }
    worst = worst.min(tail_residual(&sub));
    sub.min_residual = worst;
    Ok(sub)
}

/// Solves `(g^m)'' - beta xi g' + g^p - alpha g = 0` from `(xi1, f3(xi1))`
/// with zero slope, sampled uniformly.
fn tail_piece(m: f64, p: f64, alpha: f64, beta: f64, xi1: f64, g1: f64) -> Result<ProfileOutcome> {
    let span = 50.0 * (1.0 + xi1);
    TailProblem { m, p, alpha, beta }.integrate(xi1, g1, span, span / 20000.0)
}

struct TailProblem {
    m: f64,
    p: f64,
    alpha: f64,
    beta: f64,
}

impl TailProblem {
    fn as_profile(&self) -> ProfileProblem {
        ProfileProblem {
            kind: ProfileKind::BlowUpSub { p: self.p },
            m: self.m,
            alpha: self.alpha,
            beta: self.beta,
            shoot: 0.0,
        }
    }

    /// The tail equation is the sub-profile equation with these exponents,
    /// shifted so that integration starts at `xi1`.
    fn integrate(&self, xi1: f64, g1: f64, span: f64, h: f64) -> Result<ProfileOutcome> {
        use crate::integrate::{Advance, Dopri, Options};
        let prob = self.as_profile();
        let rhs = |xi: f64, y: &[f64; 2]| [y[1], prob.second_derivative(xi, y[0], y[1])];
        let valid = |y: &[f64; 2]| y[0] > 0.0;
        let opts = Options {
            rtol: 1e-11,
            atol: 1e-14,
            ..Options::default()
        };
        let mut ode = Dopri::new(xi1, [g1.powf(self.m), 0.0], h, opts);
        let mut samples = vec![super::profile::ProfileSample {
            xi: xi1,
            f: g1,
            flux: 0.0,
        }];
        let end = xi1 + span;
        let mut k = 1usize;
        loop {
            let target = (xi1 + k as f64 * h).min(end);
            match ode.advance(&rhs, &valid, target) {
                Advance::Step => {
                    if ode.t >= target {
                        samples.push(super::profile::ProfileSample {
                            xi: ode.t,
                            f: ode.y[0].powf(1.0 / self.m),
                            flux: ode.y[1],
                        });
                        k += 1;
                        if ode.t >= end {
                            return Ok(ProfileOutcome {
                                classification: Classification::Inconclusive { xi_max: end },
                                samples,
                                flagged: false,
                            });
                        }
                    }
                }
                Advance::Blocked => {
                    samples.push(super::profile::ProfileSample {
                        xi: ode.t,
                        f: ode.y[0].max(0.0).powf(1.0 / self.m),
                        flux: ode.y[1],
                    });
                    return Ok(ProfileOutcome {
                        classification: Classification::CrossesZeroBadSlope {
                            xi_stop: ode.t,
                            slope: ode.y[1],
                        },
                        samples,
                        flagged: false,
                    });
                }
            }
        }
    }
}

/// Residual of the numerically integrated tail; it solves the equation, so
/// this is a discretisation check.
fn tail_residual(sub: &FourPieceSubsolution) -> f64 {
    let s = &sub.tail.samples;
    let uniform: Vec<_> = match sub.xi2 {
        Some(_) => s[..s.len() - 1].to_vec(),
        None => s.clone(),
    };
    let prob = ProfileProblem {
        kind: ProfileKind::BlowUpSub { p: sub.p },
        m: sub.m,
        alpha: sub.alpha,
        beta: sub.beta,
        shoot: 0.0,
    };
    let floor = 1e-3 * sub.f3_at_xi1;
    match super::profile::profile_residual(&prob, &uniform, floor) {
        Ok(r) => -r,
        Err(_) => 0.0,
    }
}
