use super::profile::ProfileSample;
use crate::error::{Error, Result};

/// Self-similar ansatz built from a profile `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelfSimilarMode {
    /// `e^(alpha t) f(x e^(-beta t))`.
    GrowUpExp { alpha: f64, beta: f64 },
    /// `t^alpha f(x t^beta)`.
    GrowUpPow { alpha: f64, beta: f64 },
    /// `(T - t)^(-alpha) F(x (T - t)^(-beta))`.
    BlowUp { t_blowup: f64, alpha: f64, beta: f64 },
}

/// Profile samples with linear interpolation; zero outside the sampled range
/// when `compact`, otherwise clamped to the end values.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub xi: Vec<f64>,
    pub f: Vec<f64>,
    pub compact: bool,
}

impl SampledProfile {
    pub fn new(xi: Vec<f64>, f: Vec<f64>, compact: bool) -> Result<Self> {
        if xi.len() != f.len() || xi.is_empty() {
            return Err(Error::InvalidArgument(
                "profile needs matching, nonempty xi and f".into(),
            ));
        }
        if xi.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("profile xi must increase".into()));
        }
        Ok(SampledProfile { xi, f, compact })
    }

    pub fn from_samples(samples: &[ProfileSample], compact: bool) -> Result<Self> {
        Self::new(
            samples.iter().map(|s| s.xi).collect(),
            samples.iter().map(|s| s.f.max(0.0)).collect(),
            compact,
        )
    }

    /// Joins a left profile on `xi <= 0` (given in increasing `xi`) with a
    /// right profile on `xi >= 0`, dropping the duplicated origin.
    pub fn glue(left: &[ProfileSample], right: &[ProfileSample], compact: bool) -> Result<Self> {
        let mut xi: Vec<f64> = left.iter().map(|s| s.xi).collect();
        let mut f: Vec<f64> = left.iter().map(|s| s.f.max(0.0)).collect();
        for s in right {
            if xi.last().is_none_or(|&l| s.xi > l) {
                xi.push(s.xi);
                f.push(s.f.max(0.0));
            }
        }
        Self::new(xi, f, compact)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xi.len();
        if x < self.xi[0] || x > self.xi[n - 1] {
            if self.compact {
                return 0.0;
            }
            return if x < self.xi[0] { self.f[0] } else { self.f[n - 1] };
        }
        if n == 1 {
            return self.f[0];
        }
        let j = self.xi.partition_point(|&v| v <= x).clamp(1, n - 1);
        let (x0, x1) = (self.xi[j - 1], self.xi[j]);
        let t = (x - x0) / (x1 - x0);
        self.f[j - 1] * (1.0 - t) + self.f[j] * t
    }
}

/// Evaluates the ansatz at `(x, t)`.
pub fn selfsimilar_eval(profile: &SampledProfile, mode: SelfSimilarMode, x: f64, t: f64) -> Result<f64> {
    match mode {
        SelfSimilarMode::GrowUpExp { alpha, beta } => Ok((alpha * t).exp() * profile.eval(x * (-beta * t).exp())),
        SelfSimilarMode::GrowUpPow { alpha, beta } => {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(format!("power ansatz needs t > 0, got {t}")));
            }
            Ok(t.powf(alpha) * profile.eval(x * t.powf(beta)))
        }
        SelfSimilarMode::BlowUp { t_blowup, alpha, beta } => {
            if t >= t_blowup {
                return Err(Error::InvalidArgument(format!(
                    "blow-up ansatz needs t < T = {t_blowup}, got {t}"
                )));
            }
            let s = t_blowup - t;
            Ok(s.powf(-alpha) * profile.eval(x * s.powf(-beta)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump() -> SampledProfile {
        let xi: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 * 0.01).collect();
        let f = xi.iter().map(|x| 1.0 - x * x).collect();
        SampledProfile::new(xi, f, true).unwrap()
    }

    #[test]
    fn ansatz_examples() {
        let p = bump();
        let g = selfsimilar_eval(&p, SelfSimilarMode::GrowUpExp { alpha: 0.6, beta: 0.1 }, 0.5, 0.0).unwrap();
        assert!((g - 0.75).abs() < 1e-12);
        let b = SelfSimilarMode::BlowUp {
            t_blowup: 1.0,
            alpha: 1.0,
            beta: 0.0,
        };
        assert!((selfsimilar_eval(&p, b, 0.0, 0.5).unwrap() - 2.0).abs() < 1e-12);
        assert!(selfsimilar_eval(&p, b, 0.0, 1.0).is_err());
        let (m, q) = (0.3, 0.5);
        let alpha = 1.0 / (1.0 - q);
        let w = selfsimilar_eval(
            &p,
            SelfSimilarMode::GrowUpPow {
                alpha,
                beta: (q - m) / (2.0 * (1.0 - q)),
            },
            0.0,
            3.0,
        )
        .unwrap();
        assert!((w - 9.0).abs() < 1e-12);
        assert_eq!(p.eval(2.0), 0.0);
    }
}
