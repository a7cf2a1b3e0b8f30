use crate::error::{Error, Result};

/// Solution of `U' = U^p`, `U(0) = u0`.
///
/// For `p > 1` and `t` at or past the blow-up time the error carries that
/// time.
pub fn flat_ode(u0: f64, p: f64, t: f64) -> Result<f64> {
    if !(u0 > 0.0) || !(p > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "flat ODE needs u0 > 0 and p > 0, got u0 = {u0}, p = {p}"
        )));
    }
    if p < 1.0 {
        let q = 1.0 - p;
        Ok((q * t + u0.powf(q)).powf(1.0 / q))
    } else if p == 1.0 {
        Ok(u0 * t.exp())
    } else {
        let tb = flat_blowup_time(u0, p).expect("p > 1");
        if t >= tb {
            return Err(Error::FlatBlowUp { time: tb });
        }
        Ok(u0 * (1.0 - (p - 1.0) * u0.powf(p - 1.0) * t).powf(-1.0 / (p - 1.0)))
    }
}

/// `1 / ((p - 1) u0^(p-1))` for `p > 1`, `None` otherwise.
pub fn flat_blowup_time(u0: f64, p: f64) -> Option<f64> {
    (p > 1.0 && u0 > 0.0).then(|| 1.0 / ((p - 1.0) * u0.powf(p - 1.0)))
}

/// `k = (m - 1) / (2 m (m + 1))`.
pub fn barenblatt_k(m: f64) -> f64 {
    (m - 1.0) / (2.0 * m * (m + 1.0))
}

/// Source-type solution `t^(-1/(m+1)) (D - k x^2 t^(-2/(m+1)))_+^(1/(m-1))`.
pub fn barenblatt(x: f64, t: f64, d: f64, m: f64) -> f64 {
    let a = 1.0 / (m + 1.0);
    let inner = d - barenblatt_k(m) * x * x * t.powf(-2.0 * a);
    if inner <= 0.0 {
        0.0
    } else {
        t.powf(-a) * inner.powf(1.0 / (m - 1.0))
    }
}

/// Half-width of the support of `B(., t; D)`.
pub fn barenblatt_front(t: f64, d: f64, m: f64) -> f64 {
    (d / barenblatt_k(m)).sqrt() * t.powf(1.0 / (m + 1.0))
}

/// Separated-variables profile for linear diffusion with a half-line
/// reaction:
///
/// ```text
/// f(x) = C1 e^(sqrt(a) x) + C2 e^(-sqrt(a) x)            x < 0
/// f(x) = C3 sin(sqrt(1-a) x) + cos(sqrt(1-a) x)          x > 0
/// ```
///
/// with `C1 + C2 = 1` and a `C1` matching of the derivative at the origin,
/// truncated by zero outside `[x_minus, x_plus]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearProfile {
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Left zero, `-inf` when the left branch stays positive.
    pub x_minus: f64,
    pub x_plus: f64,
}

impl LinearProfile {
    /// Profile from the left coefficient `C2` (then `C1 = 1 - C2`).
    pub fn from_c2(alpha: f64, c2: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        let c1 = 1.0 - c2;
        let c3 = (alpha / (1.0 - alpha)).sqrt() * (c1 - c2);
        let x_minus = if c2 < 0.0 && c1 > 0.0 {
            (-c2 / c1).ln() / (2.0 * alpha.sqrt())
        } else {
            f64::NEG_INFINITY
        };
        let x_plus = 1.0f64.atan2(-c3) / (1.0 - alpha).sqrt();
        Ok(LinearProfile {
            alpha,
            c1,
            c2,
            c3,
            x_minus,
            x_plus,
        })
    }

    /// `f'(0)`, equal from both sides.
    pub fn slope_at_origin(&self) -> f64 {
        self.alpha.sqrt() * (self.c1 - self.c2)
    }

    /// Untruncated branches.
    pub fn raw(&self, x: f64) -> f64 {
        if x < 0.0 {
            let s = self.alpha.sqrt() * x;
            self.c1 * s.exp() + self.c2 * (-s).exp()
        } else {
            let w = (1.0 - self.alpha).sqrt() * x;
            self.c3 * w.sin() + w.cos()
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        if x < self.x_minus || x > self.x_plus {
            0.0
        } else {
            self.raw(x).max(0.0)
        }
    }
}

/// Linear profile vanishing at `x_minus < 0`.
pub fn linear_profile(alpha: f64, x_minus: f64) -> Result<LinearProfile> {
    if !(x_minus < 0.0) || !x_minus.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "x_minus must be negative, got {x_minus}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let e = (alpha.sqrt() * x_minus).exp();
    let c2 = e / (e - 1.0 / e);
    let mut prof = LinearProfile::from_c2(alpha, c2)?;
    prof.x_minus = x_minus;
    Ok(prof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, PI};

    #[test]
    fn flat_ode_examples() {
        assert_relative_eq!(flat_ode(1.0, 0.5, 2.0).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(flat_ode(1.0, 1.0, 1.0).unwrap(), E, max_relative = 1e-14);
        assert_eq!(flat_blowup_time(1.0, 3.0), Some(0.5));
        assert_eq!(flat_ode(1.0, 3.0, 0.5), Err(Error::FlatBlowUp { time: 0.5 }));
        assert!(flat_ode(0.0, 2.0, 0.1).is_err());
    }

    #[test]
    fn barenblatt_examples() {
        assert_eq!(barenblatt(0.0, 1.0, 1.0, 2.0), 1.0);
        assert_relative_eq!(barenblatt_k(2.0), 1.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(barenblatt_front(1.0, 1.0, 2.0), 12f64.sqrt(), max_relative = 1e-15);
        assert_eq!(barenblatt(4.0, 1.0, 1.0, 2.0), 0.0);
    }

    #[test]
    fn linear_profile_examples() {
        let forced = LinearProfile::from_c2(0.75, 0.5).unwrap();
        assert_eq!(forced.c3, 0.0);
        assert_relative_eq!(forced.x_plus, PI, max_relative = 1e-14);
        assert_eq!(forced.x_minus, f64::NEG_INFINITY);

        for &(a, xm) in &[(0.5, -2.0), (0.75, -0.3), (0.2, -5.0)] {
            let f = linear_profile(a, xm).unwrap();
            assert_relative_eq!(f.raw(0.0), 1.0, max_relative = 1e-14);
            assert!(f.raw(xm).abs() < 1e-12);
            assert!(f.raw(f.x_plus).abs() < 1e-12);
            let w = (1.0 - a).sqrt();
            assert!(f.x_plus > PI / (2.0 * w) && f.x_plus < PI / w);
        }
        let f = linear_profile(0.5, -2.0).unwrap();
        assert!(f.x_plus > 2.2214 && f.x_plus < 4.4429);
    }
}
