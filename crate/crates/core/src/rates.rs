//! Growth and blow-up rates extracted from solver traces.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fit::line_fit;
use crate::pde::{blowup_window, Trace};

/// Fits with a larger RMS log-residual are reported as unreliable.
pub const UNRELIABLE_RMS: f64 = 0.1;
pub const MIN_POINTS: usize = 8;
/// Growth required across an automatically chosen fit window.
pub const GROWTH_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    SupNorm,
    Point(f64),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::SupNorm => write!(f, "sup"),
            Location::Point(x) => write!(f, "x={x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateLaw {
    /// `u ~ t^k`.
    Power,
    /// `u ~ e^(r t)`.
    Exponential,
    /// `u ~ (T - t)^(-gamma)`.
    BlowUpPower { t_blowup: f64 },
}

impl RateLaw {
    pub fn name(&self) -> &'static str {
        match self {
            RateLaw::Power => "power",
            RateLaw::Exponential => "exponential",
            RateLaw::BlowUpPower { .. } => "blowup_power",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitWindow {
    /// Latest window over which the value grew by [`GROWTH_FACTOR`].
    Auto,
    Range(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub law: RateLaw,
    pub fitted: f64,
    /// RMS of the log-residuals.
    pub residual: f64,
    pub window: (f64, f64),
    pub location: Location,
    pub points: usize,
}

impl RateFit {
    pub fn reliable(&self) -> bool {
        self.residual <= UNRELIABLE_RMS
    }
}

/// `(t, u)` at the requested location, from the probe series when it was
/// recorded and from the snapshots otherwise.
pub fn series(trace: &Trace, location: Location) -> Result<(Vec<f64>, Vec<f64>)> {
    match location {
        Location::SupNorm => Ok((trace.times.clone(), trace.sup_norms.clone())),
        Location::Point(x) => {
            if let Some(v) = trace.probe(x) {
                let (t, u) = trace
                    .times
                    .iter()
                    .zip(v)
                    .filter(|(_, u)| u.is_finite())
                    .map(|(&t, &u)| (t, u))
                    .unzip();
                return Ok((t, u));
            }
            Ok(trace
                .snapshots
                .iter()
                .filter_map(|s| s.sample(x).map(|u| (s.time, u)))
                .unzip())
        }
    }
}

/// Index range `[start, n)` of the latest window over which `u` grew by at
/// least `factor` and that holds at least [`MIN_POINTS`] points.
pub fn growth_window(u: &[f64], factor: f64) -> Option<(usize, usize)> {
    let n = u.len();
    if n < MIN_POINTS {
        return None;
    }
    let end = u[n - 1];
    (0..=n - MIN_POINTS)
        .rev()
        .find(|&s| u[s] > 0.0 && end >= factor * u[s])
        .map(|s| (s, n))
}

fn select(t: &[f64], u: &[f64], window: FitWindow, positive_time: bool) -> Result<(usize, usize)> {
    let range = match window {
        FitWindow::Auto => growth_window(u, GROWTH_FACTOR).ok_or_else(|| {
            Error::InsufficientData(format!(
                "no window with growth by {GROWTH_FACTOR} over {MIN_POINTS} points"
            ))
        })?,
        FitWindow::Range(a, b) => {
            let lo = t.partition_point(|&x| x < a);
            let hi = t.partition_point(|&x| x <= b);
            (lo, hi)
        }
    };
    let (mut lo, hi) = range;
    if positive_time {
        while lo < hi && t[lo] <= 0.0 {
            lo += 1;
        }
    }
    if hi < lo + MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "fit needs at least {MIN_POINTS} points, window has {}",
            hi.saturating_sub(lo)
        )));
    }
    if u[lo..hi].iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument(
            "values must be positive on the fit window".into(),
        ));
    }
    Ok((lo, hi))
}

fn rms_log(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let fit = line_fit(x, y)?;
    Ok((fit.slope, fit.rms))
}

/// Slope of `log u` against `log t`.
pub fn fit_power(trace: &Trace, location: Location, window: FitWindow) -> Result<RateFit> {
    let (t, u) = series(trace, location)?;
    let (lo, hi) = select(&t, &u, window, true)?;
    let x: Vec<f64> = t[lo..hi].iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = u[lo..hi].iter().map(|v| v.ln()).collect();
    let (fitted, residual) = rms_log(&x, &y)?;
    Ok(RateFit {
        law: RateLaw::Power,
        fitted,
        residual,
        window: (t[lo], t[hi - 1]),
        location,
        points: hi - lo,
    })
}

/// Slope of `log u` against `t`.
pub fn fit_exponential(trace: &Trace, location: Location, window: FitWindow) -> Result<RateFit> {
    let (t, u) = series(trace, location)?;
    let (lo, hi) = select(&t, &u, window, false)?;
    let y: Vec<f64> = u[lo..hi].iter().map(|v| v.ln()).collect();
    let (fitted, residual) = rms_log(&t[lo..hi], &y)?;
    Ok(RateFit {
        law: RateLaw::Exponential,
        fitted,
        residual,
        window: (t[lo], t[hi - 1]),
        location,
        points: hi - lo,
    })
}

/// Slope of `log sup u` against `-log(T - t)` on the blow-up window.
pub fn fit_blowup(trace: &Trace, t_blowup: f64) -> Result<RateFit> {
    let idx = blowup_window(trace);
    fit_blowup_on(trace, t_blowup, &idx)
}

pub fn fit_blowup_on(trace: &Trace, t_blowup: f64, idx: &[usize]) -> Result<RateFit> {
    if idx.len() < MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "blow-up fit needs {MIN_POINTS} points, window has {}",
            idx.len()
        )));
    }
    let t_hi = trace.times[*idx.last().unwrap()];
    if t_blowup <= t_hi {
        return Err(Error::InvalidArgument(format!(
            "blow-up time {t_blowup} lies inside the fit window ending at {t_hi}"
        )));
    }
    let x: Vec<f64> = idx.iter().map(|&i| -(t_blowup - trace.times[i]).ln()).collect();
    let y: Vec<f64> = idx.iter().map(|&i| trace.sup_norms[i].ln()).collect();
    let (fitted, residual) = rms_log(&x, &y)?;
    Ok(RateFit {
        law: RateLaw::BlowUpPower { t_blowup },
        fitted,
        residual,
        window: (trace.times[idx[0]], t_hi),
        location: Location::SupNorm,
        points: idx.len(),
    })
}

/// Times where the running maximum doubles and the normalised gaps
/// `z_j = (t_(j+1) - t_j) M(t_j)^(p-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublingSequence {
    pub times: Vec<f64>,
    pub maxima: Vec<f64>,
    pub z: Vec<f64>,
}

impl DoublingSequence {
    pub fn max_z(&self) -> f64 {
        self.z.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn doubling_sequence(trace: &Trace, p: f64) -> Result<DoublingSequence> {
    let t = &trace.times;
    let big_m = trace.running_max();
    if t.is_empty() {
        return Err(Error::InsufficientData("empty trace".into()));
    }
    let mut times = vec![t[0]];
    let mut maxima = vec![big_m[0]];
    let mut target = 2.0 * big_m[0];
    for i in 1..t.len() {
        while big_m[i] >= target {
            // Crossing of the piecewise-linear running max.
            let (m0, m1) = (big_m[i - 1], big_m[i]);
            let s = if m1 > m0 { (target - m0) / (m1 - m0) } else { 1.0 };
            times.push(t[i - 1] + s.clamp(0.0, 1.0) * (t[i] - t[i - 1]));
            maxima.push(target);
            target *= 2.0;
        }
    }
    if times.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "only {} doublings of the running maximum; run longer",
            times.len() - 1
        )));
    }
    let z = (0..times.len() - 1)
        .map(|j| (times[j + 1] - times[j]) * maxima[j].powf(p - 1.0))
        .collect();
    Ok(DoublingSequence { times, maxima, z })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SetShape {
    Interval(f64, f64),
    WholeWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    /// The marked interval stopped changing over the last snapshots.
    Settled,
    Tentative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowUpSetEstimate {
    pub interval: SetShape,
    pub threshold_schedule: String,
    pub confidence: Confidence,
    /// Marked interval at every snapshot used, in time order.
    pub history: Vec<(f64, Option<(f64, f64)>)>,
    /// Marked fraction of the monitoring window at the final snapshot.
    pub final_fraction: f64,
}

pub fn blowup_set(trace: &Trace) -> Result<BlowUpSetEstimate> {
    blowup_set_with(trace, 10.0)
}

/// Marks nodes of the monitoring window where `u > sup / divisor` on the
/// snapshots taken once the sup-norm is within a decade of its final value.
pub fn blowup_set_with(trace: &Trace, divisor: f64) -> Result<BlowUpSetEstimate> {
    let last_sup = trace
        .snapshots
        .last()
        .map(|s| s.sup().0)
        .ok_or_else(|| Error::InsufficientData("trace has no snapshots".into()))?;
    let snaps: Vec<_> = trace
        .snapshots
        .iter()
        .filter(|s| s.sup().0 >= last_sup / 10.0)
        .collect();
    if snaps.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "blow-up set needs 5 snapshots in the final decade, found {}",
            snaps.len()
        )));
    }
    let (wl, wr) = trace.window;
    let mut history = Vec::new();
    let mut fractions = Vec::new();
    for s in &snaps {
        let theta = s.sup().0 / divisor;
        let mut total = 0usize;
        let mut marked = 0usize;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, &u) in s.values.iter().enumerate() {
            let x = s.grid.x(i);
            if x < wl - 1e-12 || x > wr + 1e-12 {
                continue;
            }
            total += 1;
            if u > theta {
                marked += 1;
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        fractions.push(if total > 0 { marked as f64 / total as f64 } else { 0.0 });
        history.push((s.time, (marked > 0).then_some((lo, hi))));
    }
    let final_fraction = *fractions.last().unwrap();
    let growing = fractions.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let (_, last) = *history.last().unwrap();
    let interval = if final_fraction > 0.95 && growing {
        SetShape::WholeWindow
    } else {
        let (a, b) = last.ok_or_else(|| Error::InsufficientData("no node above threshold".into()))?;
        SetShape::Interval(a, b)
    };
    let k = history.len();
    let settled = k >= 3 && history[k - 3..].windows(2).all(|w| w[0].1 == w[1].1);
    Ok(BlowUpSetEstimate {
        interval,
        threshold_schedule: format!("sup(t_k)/{divisor} on {} snapshots", snaps.len()),
        confidence: if settled {
            Confidence::Settled
        } else {
            Confidence::Tentative
        },
        history,
        final_fraction,
    })
}

/// Check of the lower bound `u(x0, t) >= c (T - t)^(-1/(p-1))` at the
/// location of the maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct X0Check {
    pub x0: f64,
    /// `u(x0, t) (T - t)^(1/(p-1))` over the blow-up window.
    pub ratios: Vec<f64>,
    pub held: bool,
}

pub fn check_x0(trace: &Trace, t_blowup: f64, p: f64) -> Result<X0Check> {
    let idx = blowup_window(trace);
    let idx: Vec<usize> = idx.into_iter().filter(|&i| trace.times[i] < t_blowup).collect();
    if idx.is_empty() {
        return Err(Error::InsufficientData("empty blow-up window".into()));
    }
    let ratios: Vec<f64> = idx
        .iter()
        .map(|&i| trace.sup_norms[i] * (t_blowup - trace.times[i]).powf(1.0 / (p - 1.0)))
        .collect();
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(X0Check {
        x0: trace.sup_locations[*idx.last().unwrap()],
        ratios,
        held: min >= 0.1 * max,
    })
}

/// One row of the rates summary.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub m: f64,
    pub p: f64,
    pub support: String,
    pub location: Location,
    pub law: RateLaw,
    pub theoretical: f64,
    pub fitted: Option<RateFit>,
    /// Relative tolerance for the verdict.
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Unreliable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Unreliable => "UNRELIABLE",
        })
    }
}

impl RateRow {
    pub fn verdict(&self) -> Verdict {
        match &self.fitted {
            None => Verdict::Fail,
            Some(f) if !f.reliable() => Verdict::Unreliable,
            Some(f) => {
                if (f.fitted - self.theoretical).abs() <= self.tolerance * self.theoretical.abs() {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
        }
    }
}

/// Columns `m, p, support, location, law, theoretical_exponent, fitted,
/// residual, verdict`.
pub fn write_rates_csv(rows: &[RateRow], path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record([
        "m",
        "p",
        "support",
        "location",
        "law",
        "theoretical_exponent",
        "fitted",
        "residual",
        "verdict",
    ])?;
    for r in rows {
        let (fitted, residual) = match &r.fitted {
            Some(f) => (f.fitted.to_string(), f.residual.to_string()),
            None => ("NA".into(), "NA".into()),
        };
        w.write_record([
            r.m.to_string(),
            r.p.to_string(),
            r.support.clone(),
            r.location.to_string(),
            r.law.name().to_string(),
            r.theoretical.to_string(),
            fitted,
            residual,
            r.verdict().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64, t0: f64, t1: f64, n: usize) -> Trace {
        let t: Vec<f64> = (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect();
        let u: Vec<f64> = t.iter().map(|&s| f(s)).collect();
        Trace::from_sup_series(2.0, &t, &u)
    }

    #[test]
    fn power_and_exponential_examples() {
        let tr = synthetic(|t| t * t, 1.0, 10.0, 200);
        let f = fit_power(&tr, Location::SupNorm, FitWindow::Auto).unwrap();
        assert!((f.fitted - 2.0).abs() < 1e-6);
        let tr = synthetic(|t| (0.6 * t).exp(), 0.0, 10.0, 200);
        let f = fit_exponential(&tr, Location::SupNorm, FitWindow::Auto).unwrap();
        assert!((f.fitted - 0.6).abs() < 1e-6);
        let tr = synthetic(|t| t, 1.0, 2.0, 5);
        assert!(fit_power(&tr, Location::SupNorm, FitWindow::Range(1.0, 2.0)).is_err());
    }

    #[test]
    fn doubling_examples() {
        let tr = synthetic(|t| 1.0 / (1.0 - t), 0.0, 1.0 - 1e-6, 200_001);
        let d = doubling_sequence(&tr, 2.0).unwrap();
        for z in &d.z[..10] {
            assert!((z - 0.5).abs() < 1e-3, "{z}");
        }
        let tr = synthetic(f64::exp, 0.0, 8.0, 8001);
        let d = doubling_sequence(&tr, 2.0).unwrap();
        for (j, z) in d.z.iter().enumerate() {
            assert!((z - d.maxima[j] * 2f64.ln()).abs() < 1e-2 * z);
        }
        assert!(d.z.windows(2).all(|w| w[1] > w[0]));
    }
}
