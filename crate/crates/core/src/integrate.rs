//! Adaptive Dormand-Prince 5(4) integrator for small autonomous or
//! non-autonomous systems.
//!
//! The stepper never leaves the admissible region: a trial step whose stages
//! or endpoint are non-finite, or that fails the caller's validity check, is
//! retried with a smaller step. When the step size underflows the stepper
//! reports [`Advance::Blocked`], which callers use to locate degenerate
//! contacts (a profile reaching zero, a trajectory escaping to infinity).

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    /// Relative floor for the step size (scaled by `max(1, |t|)`).
    pub h_min_rel: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: f64::INFINITY,
            h_min_rel: 1e-14,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Advance {
    /// One step was accepted.
    Step,
    /// The step size underflowed before an admissible step was found.
    Blocked,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dormand-Prince stepper for an `N`-dimensional system `y' = f(t, y)`.
#[derive(Debug, Clone)]
pub struct Dopri<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub h: f64,
    pub opts: Options,
    /// Number of accepted steps.
    pub steps: usize,
}

impl<const N: usize> Dopri<N> {
    pub fn new(t: f64, y: [f64; N], h: f64, opts: Options) -> Self {
        Dopri {
            t,
            y,
            h: h.min(opts.h_max),
            opts,
            steps: 0,
        }
    }

    fn h_min(&self) -> f64 {
        self.opts.h_min_rel * self.t.abs().max(1.0)
    }

    /// Attempts one step of size at most `t_limit - t`.
    pub fn advance<F, V>(&mut self, f: &F, valid: &V, t_limit: f64) -> Advance
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        V: Fn(&[f64; N]) -> bool,
    {
        loop {
            let room = t_limit - self.t;
            if room <= 0.0 {
                return Advance::Blocked;
            }
            let h = self.h.min(room).min(self.opts.h_max);
            if h < self.h_min() && h < room {
                return Advance::Blocked;
            }
            match self.trial(f, h) {
                Some((y_new, err)) if valid(&y_new) => {
                    if err <= 1.0 {
                        self.t = if h == room { t_limit } else { self.t + h };
                        self.y = y_new;
                        self.steps += 1;
                        let grow = if err == 0.0 {
                            5.0
                        } else {
                            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                        };
                        // A step clipped by t_limit keeps the nominal size.
                        let next = if h < self.h { self.h.max(h * grow) } else { h * grow };
                        self.h = next.min(self.opts.h_max);
                        return Advance::Step;
                    }
                    self.h = h * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                }
                _ => {
                    self.h = h * 0.25;
                }
            }
            if self.h < self.h_min() {
                return Advance::Blocked;
            }
        }
    }

    fn trial<F>(&self, f: &F, h: f64) -> Option<([f64; N], f64)>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let mut k = [[0.0; N]; 7];
        k[0] = f(self.t, &self.y);
        if !finite(&k[0]) {
            return None;
        }
        let mut y_new = self.y;
        for s in 1..7 {
            let mut ys = self.y;
            for (i, v) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += A[s][j] * k[j][i];
                }
                *v += h * acc;
            }
            if !finite(&ys) {
                return None;
            }
            k[s] = f(self.t + C[s] * h, &ys);
            if !finite(&k[s]) {
                return None;
            }
            if s == 6 {
                y_new = ys;
            }
        }
        let mut sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for s in 0..7 {
                e += E[s] * k[s][i];
            }
            let scale = self.opts.atol + self.opts.rtol * self.y[i].abs().max(y_new[i].abs());
            let r = h * e / scale;
            sq += r * r;
        }
        let err = (sq / N as f64).sqrt();
        if !err.is_finite() {
            return None;
        }
        Some((y_new, err))
    }
}

fn finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let mut s = Dopri::new(0.0, [1.0, 0.0], 0.01, Options::default());
        while s.t < 10.0 {
            assert_eq!(s.advance(&f, &|_| true, 10.0), Advance::Step);
        }
        assert!((s.t - 10.0).abs() < 1e-14);
        assert!((s.y[0] - 10f64.cos()).abs() < 1e-8);
        assert!((s.y[1] + 10f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn blocked_at_boundary() {
        // y' = -1 from y = 1 leaves the admissible set y >= 0 at t = 1.
        let f = |_t: f64, _y: &[f64; 1]| [-1.0];
        let valid = |y: &[f64; 1]| y[0] >= 0.0;
        let mut s = Dopri::new(0.0, [1.0], 0.3, Options::default());
        loop {
            if s.advance(&f, &valid, 5.0) == Advance::Blocked {
                break;
            }
        }
        assert!((s.t - 1.0).abs() < 1e-9, "stopped at {}", s.t);
    }
}
