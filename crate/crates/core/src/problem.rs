//! Problem description shared by every other module: exponents, reaction
//! support, initial data and the uniform grid they are sampled on.

use crate::error::{Error, Result};
use crate::pde::SolverTolerances;

/// Where the reaction term `a(x) u^p` is switched on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReactionSupport {
    /// `a = 1` on `x > 0`.
    HalfLine,
    /// `a = 1` on `(-L, L)`.
    Interval(f64),
    /// `a = 1` everywhere.
    Global,
    /// No reaction at all (pure porous-medium / fast-diffusion flow).
    None,
}

impl ReactionSupport {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ReactionSupport::Interval(l) if !(l > 0.0 && l.is_finite()) => {
                Err(Error::InvalidProblem(format!("interval support needs L > 0, got {l}")))
            }
            _ => Ok(()),
        }
    }

    /// Indicator of the support. The jump point of the half-line is assigned
    /// to the reaction-free side, so `a(0) = 0`.
    pub fn coefficient(&self, x: f64) -> f64 {
        let inside = match *self {
            ReactionSupport::HalfLine => x > 0.0,
            ReactionSupport::Interval(l) => x.abs() < l,
            ReactionSupport::Global => true,
            ReactionSupport::None => false,
        };
        if inside {
            1.0
        } else {
            0.0
        }
    }

    pub fn name(&self) -> String {
        match *self {
            ReactionSupport::HalfLine => "halfline".into(),
            ReactionSupport::Interval(l) => format!("interval({l})"),
            ReactionSupport::Global => "global".into(),
            ReactionSupport::None => "none".into(),
        }
    }
}

/// `a(x)` for the given support.
pub fn reaction_coefficient(x: f64, support: ReactionSupport) -> f64 {
    support.coefficient(x)
}

/// Initial datum families.
#[derive(Debug, Clone, PartialEq)]
pub enum DatumSpec {
    /// `height * cos^2(pi (x - center) / width)` on `|x - center| < width / 2`,
    /// plus an optional algebraic background `floor / (1 + x^2)` that keeps the
    /// datum strictly positive (needed for `p < 1` and for fast diffusion).
    CompactBump {
        center: f64,
        width: f64,
        height: f64,
        floor: f64,
    },
    /// `scale * (1 + x^2)^(-gamma / 2)`, i.e. `~ |x|^-gamma` in both directions.
    PowerTail { gamma: f64, scale: f64 },
    /// `scale * r^(-2/(1-m)) (log r)^(1/(1-m))` with `r = max(|x|, e^(1/2))`;
    /// the plateau sits at the maximum of the tail function, so the datum is
    /// continuous and positive. Only meaningful for `m < 1`.
    LogCorrectedTail { m: f64, scale: f64 },
    /// Constant datum.
    Uniform { height: f64 },
    /// The Barenblatt profile `B(x, t; d)` of the porous medium equation.
    Barenblatt { m: f64, t: f64, d: f64 },
    /// Samples `(x, u)` with increasing `x`, linearly interpolated and zero
    /// outside the sampled range.
    Custom { x: Vec<f64>, u: Vec<f64> },
}

impl DatumSpec {
    /// Checks the datum against the diffusion exponent it will be used with.
    pub fn validate(&self, m: f64) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidProblem(msg));
        match self {
            DatumSpec::CompactBump {
                width, height, floor, ..
            } => {
                if !(*width > 0.0) || *height < 0.0 || *floor < 0.0 {
                    return bad(format!(
                        "compact bump needs width > 0, height >= 0, floor >= 0 (got {width}, {height}, {floor})"
                    ));
                }
            }
            DatumSpec::PowerTail { gamma, scale } => {
                if !(*gamma > 1.0) || !(*scale > 0.0) {
                    return bad(format!(
                        "power tail needs gamma > 1 and scale > 0 (got {gamma}, {scale})"
                    ));
                }
            }
            DatumSpec::LogCorrectedTail { m: dm, scale } => {
                if !(*dm < 1.0 && *dm > 0.0) {
                    return bad(format!(
                        "log-corrected tail is only defined for 0 < m < 1, got m = {dm}"
                    ));
                }
                if (dm - m).abs() > 1e-12 {
                    return bad(format!("log-corrected tail built for m = {dm} used with m = {m}"));
                }
                if !(*scale > 0.0) {
                    return bad("log-corrected tail needs scale > 0".into());
                }
            }
            DatumSpec::Uniform { height } => {
                if !(*height >= 0.0) || !height.is_finite() {
                    return bad(format!("uniform datum needs a finite height >= 0, got {height}"));
                }
            }
            DatumSpec::Barenblatt { m: bm, t, d } => {
                if !(*bm > 1.0) || !(*t > 0.0) || !(*d > 0.0) {
                    return bad("Barenblatt datum needs m > 1, t > 0, D > 0".into());
                }
                if (bm - m).abs() > 1e-12 {
                    return bad(format!("Barenblatt datum built for m = {bm} used with m = {m}"));
                }
            }
            DatumSpec::Custom { x, u } => {
                if x.len() != u.len() || x.len() < 2 {
                    return bad("custom datum needs at least two (x, u) samples".into());
                }
                if x.windows(2).any(|w| !(w[1] > w[0])) {
                    return bad("custom datum abscissae must be increasing".into());
                }
                if u.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return bad("custom datum values must be finite and nonnegative".into());
                }
            }
        }
        Ok(())
    }

    /// Pointwise value of the datum.
    pub fn value(&self, x: f64) -> f64 {
        match self {
            DatumSpec::CompactBump {
                center,
                width,
                height,
                floor,
            } => {
                let s = (x - center) / width;
                let bump = if s.abs() < 0.5 {
                    let c = (std::f64::consts::PI * s).cos();
                    height * c * c
                } else {
                    0.0
                };
                bump + floor / (1.0 + x * x)
            }
            DatumSpec::PowerTail { gamma, scale } => scale * (1.0 + x * x).powf(-0.5 * gamma),
            DatumSpec::LogCorrectedTail { m, scale } => {
                let r = x.abs().max(0.5f64.exp());
                let a = 2.0 / (1.0 - m);
                let b = 1.0 / (1.0 - m);
                scale * r.powf(-a) * r.ln().powf(b)
            }
            DatumSpec::Uniform { height } => *height,
            DatumSpec::Barenblatt { m, t, d } => crate::odeshoot::barenblatt(x, *t, *d, *m),
            DatumSpec::Custom { x: xs, u } => {
                if x < xs[0] || x > xs[xs.len() - 1] {
                    return 0.0;
                }
                let j = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
                let (x0, x1) = (xs[j - 1], xs[j]);
                let w = (x - x0) / (x1 - x0);
                u[j - 1] * (1.0 - w) + u[j] * w
            }
        }
    }

    /// True when the datum vanishes identically outside a bounded set.
    pub fn is_compact(&self) -> bool {
        match self {
            DatumSpec::CompactBump { floor, .. } => *floor == 0.0,
            DatumSpec::Barenblatt { .. } | DatumSpec::Custom { .. } => true,
            _ => false,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DatumSpec::CompactBump { .. } => "bump",
            DatumSpec::PowerTail { .. } => "power-tail",
            DatumSpec::LogCorrectedTail { .. } => "log-tail",
            DatumSpec::Uniform { .. } => "uniform",
            DatumSpec::Barenblatt { .. } => "barenblatt",
            DatumSpec::Custom { .. } => "custom",
        }
    }
}

/// Uniform grid that always carries `x = 0` as a node.
///
/// Nodes are `x_i = (i - origin) * dx`, so the origin is exact by
/// construction rather than up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dx: f64,
    origin: usize,
    n: usize,
}

impl Grid {
    /// Grid on `[x_min, x_max]` with `n` nodes; `0` must fall on a node.
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 nodes, got {n}")));
        }
        if !(x_max > x_min) || !(x_min <= 0.0 && x_max >= 0.0) {
            return Err(Error::InvalidGrid(format!("domain [{x_min}, {x_max}] must contain 0")));
        }
        let dx = (x_max - x_min) / (n - 1) as f64;
        let k = -x_min / dx;
        let origin = k.round();
        if (k - origin).abs() > 1e-9 * k.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "x = 0 is not a node of [{x_min}, {x_max}] with {n} nodes"
            )));
        }
        Ok(Grid {
            dx,
            origin: origin as usize,
            n,
        })
    }

    /// Smallest grid of spacing `dx` covering `[x_min, x_max]`.
    pub fn with_spacing(x_min: f64, x_max: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {dx}")));
        }
        if !(x_min <= 0.0 && x_max >= 0.0 && x_max > x_min) {
            return Err(Error::InvalidGrid(format!("domain [{x_min}, {x_max}] must contain 0")));
        }
        let left = (-x_min / dx - 1e-9).ceil().max(0.0) as usize;
        let right = (x_max / dx - 1e-9).ceil().max(0.0) as usize;
        Self::from_counts(left, right, dx)
    }

    /// Grid with `left` nodes strictly left of 0 and `right` nodes strictly right.
    pub fn from_counts(left: usize, right: usize, dx: f64) -> Result<Self> {
        let n = left + right + 1;
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 nodes, got {n}")));
        }
        if !(dx > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {dx}")));
        }
        Ok(Grid { dx, origin: left, n })
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Index of the node at `x = 0`.
    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - self.origin as f64) * self.dx
    }

    pub fn x_min(&self) -> f64 {
        self.x(0)
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Number of nodes strictly left / right of the origin.
    pub fn counts(&self) -> (usize, usize) {
        (self.origin, self.n - 1 - self.origin)
    }
}

/// Sampled nonnegative solution at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "field has {} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "field values must be finite and nonnegative, found {v}"
            )));
        }
        Ok(Field { grid, values, time })
    }

    pub fn zeros(grid: Grid, time: f64) -> Self {
        let n = grid.len();
        Field {
            grid,
            values: vec![0.0; n],
            time,
        }
    }

    /// Discrete mass by the trapezoid rule.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.values, self.grid.dx())
    }

    /// `(max value, node position of the first maximum)`.
    pub fn sup(&self) -> (f64, f64) {
        let mut best = (f64::NEG_INFINITY, 0usize);
        for (i, &v) in self.values.iter().enumerate() {
            if v > best.0 {
                best = (v, i);
            }
        }
        (best.0, self.grid.x(best.1))
    }

    /// Linear interpolation; `None` outside the grid.
    pub fn sample(&self, x: f64) -> Option<f64> {
        let g = &self.grid;
        if x < g.x_min() - 1e-12 || x > g.x_max() + 1e-12 {
            return None;
        }
        let s = ((x - g.x_min()) / g.dx()).clamp(0.0, (g.len() - 1) as f64);
        let i = (s.floor() as usize).min(g.len() - 2);
        let w = s - i as f64;
        Some(self.values[i] * (1.0 - w) + self.values[i + 1] * w)
    }
}

/// Trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            dx * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// Samples `spec` on `grid`.
pub fn make_initial_datum(spec: &DatumSpec, grid: &Grid) -> Result<Field> {
    let values: Vec<f64> = (0..grid.len()).map(|i| spec.value(grid.x(i))).collect();
    Field::new(grid.clone(), values, 0.0)
}

/// Initial computational window and how it may change during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainPolicy {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    /// Double the domain on a side whose tail becomes significant.
    pub expand: bool,
    /// Node budget; beyond it the grid is coarsened by two when `coarsen`
    /// is set, otherwise the run is aborted.
    pub max_nodes: usize,
    pub coarsen: bool,
}

impl DomainPolicy {
    pub fn new(x_min: f64, x_max: f64, dx: f64) -> Self {
        DomainPolicy {
            x_min,
            x_max,
            dx,
            expand: true,
            max_nodes: 4000,
            coarsen: true,
        }
    }

    pub fn fixed(x_min: f64, x_max: f64, dx: f64) -> Self {
        DomainPolicy {
            expand: false,
            ..Self::new(x_min, x_max, dx)
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        // Even node counts on both sides keep the origin on the coarse grid
        // after halving.
        let g = Grid::with_spacing(self.x_min, self.x_max, self.dx)?;
        let (l, r) = g.counts();
        Grid::from_counts(l + l % 2, r + r % 2, self.dx)
    }
}

/// Complete description of one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub m: f64,
    pub p: f64,
    pub support: ReactionSupport,
    pub datum: DatumSpec,
    pub domain: DomainPolicy,
    pub tolerances: SolverTolerances,
    /// Points whose values are recorded with every trace row.
    pub probes: Vec<f64>,
}

impl ProblemSpec {
    pub fn new(m: f64, p: f64, support: ReactionSupport, datum: DatumSpec, domain: DomainPolicy) -> Self {
        ProblemSpec {
            m,
            p,
            support,
            datum,
            domain,
            tolerances: SolverTolerances::default(),
            probes: vec![-1.0, 0.0, 1.0],
        }
    }

    pub fn with_probes(mut self, probes: Vec<f64>) -> Self {
        self.probes = probes;
        self
    }

    pub fn with_tolerances(mut self, tolerances: SolverTolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn with_max_time(mut self, max_time: f64) -> Self {
        self.tolerances.max_time = max_time;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0 && self.m.is_finite()) || !(self.p > 0.0 && self.p.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "exponents must be positive, got m = {}, p = {}",
                self.m, self.p
            )));
        }
        self.support.validate()?;
        self.datum.validate(self.m)?;
        self.tolerances.validate()?;
        let grid = self.domain.grid()?;
        let u0 = make_initial_datum(&self.datum, &grid)?;
        for i in 0..grid.len() {
            let x = grid.x(i);
            let v = u0.values[i];
            if self.p < 1.0 && self.support.coefficient(x) > 0.0 && v <= 0.0 {
                return Err(Error::InvalidProblem(format!(
                    "p = {} < 1 needs a datum positive on the reaction support; u0({x}) = 0",
                    self.p
                )));
            }
            if self.m < 1.0 && v <= 0.0 {
                return Err(Error::InvalidProblem(format!(
                    "fast diffusion (m = {}) needs a strictly positive datum; u0({x}) = 0",
                    self.m
                )));
            }
        }
        if u0.values.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidProblem("datum vanishes identically".into()));
        }
        Ok(())
    }

    pub fn initial_field(&self) -> Result<Field> {
        make_initial_datum(&self.datum, &self.domain.grid()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficient_examples() {
        assert_eq!(reaction_coefficient(1.0, ReactionSupport::HalfLine), 1.0);
        assert_eq!(reaction_coefficient(-1.0, ReactionSupport::HalfLine), 0.0);
        assert_eq!(reaction_coefficient(0.0, ReactionSupport::HalfLine), 0.0);
        assert_eq!(reaction_coefficient(0.5, ReactionSupport::Interval(1.0)), 1.0);
        assert_eq!(reaction_coefficient(1.5, ReactionSupport::Interval(1.0)), 0.0);
        assert_eq!(reaction_coefficient(-7.0, ReactionSupport::Global), 1.0);
        assert_eq!(reaction_coefficient(7.0, ReactionSupport::None), 0.0);
        assert!(ReactionSupport::Interval(0.0).validate().is_err());
    }

    #[test]
    fn bump_is_compact() {
        let grid = Grid::new(-4.0, 4.0, 81).unwrap();
        let spec = DatumSpec::CompactBump {
            center: 0.0,
            width: 2.0,
            height: 1.0,
            floor: 0.0,
        };
        let f = make_initial_datum(&spec, &grid).unwrap();
        for i in 0..grid.len() {
            if grid.x(i).abs() > 1.0 {
                assert_eq!(f.values[i], 0.0);
            }
        }
        assert_eq!(f.values[grid.origin()], 1.0);
        assert_eq!(f.sup(), (1.0, 0.0));
    }

    #[test]
    fn power_tail_decay() {
        let spec = DatumSpec::PowerTail { gamma: 2.0, scale: 1.0 };
        // (1 + x^2)^-1 at x = 10 is 1/101
        assert_abs_diff_eq!(spec.value(10.0), 0.01, epsilon = 1e-4);
        let grid = Grid::new(-10.0, 10.0, 201).unwrap();
        let f = make_initial_datum(&spec, &grid).unwrap();
        assert_abs_diff_eq!(f.sample(10.0).unwrap(), 0.01, epsilon = 1e-4);
    }

    #[test]
    fn log_tail_value() {
        let spec = DatumSpec::LogCorrectedTail { m: 0.5, scale: 1.0 };
        let x = -(2.0f64).exp();
        assert_abs_diff_eq!(spec.value(x), 4.0 * (-8.0f64).exp(), epsilon = 1e-15);
        assert!(spec.validate(0.5).is_ok());
        assert!(spec.validate(0.6).is_err());
        assert!(DatumSpec::LogCorrectedTail { m: 1.5, scale: 1.0 }
            .validate(1.5)
            .is_err());
    }

    #[test]
    fn grid_contains_origin() {
        let g = Grid::new(-3.0, 5.0, 81).unwrap();
        assert_eq!(g.x(g.origin()), 0.0);
        assert!(Grid::new(-1.0, 1.05, 4).is_err());
        assert!(Grid::new(-1.0, 1.0, 2).is_err());
        let g = Grid::with_spacing(-1.03, 2.0, 0.1).unwrap();
        assert_eq!(g.x(g.origin()), 0.0);
        assert!(g.x_min() <= -1.03 && g.x_max() >= 2.0);
        let g = DomainPolicy::new(-3.3, 2.1, 0.1).grid().unwrap();
        let (l, r) = g.counts();
        assert!(l % 2 == 0 && r % 2 == 0);
    }

    #[test]
    fn trapezoid_mass() {
        let g = Grid::new(-1.0, 1.0, 3).unwrap();
        let f = Field::new(g, vec![1.0, 1.0, 1.0], 0.0).unwrap();
        assert_abs_diff_eq!(f.mass(), 2.0, epsilon = 1e-15);
        assert!(Field::new(Grid::new(-1.0, 1.0, 3).unwrap(), vec![1.0, -1.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn positivity_requirements() {
        let bump = DatumSpec::CompactBump {
            center: 0.0,
            width: 2.0,
            height: 1.0,
            floor: 0.0,
        };
        let dom = DomainPolicy::new(-5.0, 5.0, 0.1);
        let spec = ProblemSpec::new(1.0, 0.5, ReactionSupport::HalfLine, bump.clone(), dom.clone());
        assert!(spec.validate().is_err());
        let spec = ProblemSpec::new(1.0, 2.0, ReactionSupport::HalfLine, bump.clone(), dom.clone());
        assert!(spec.validate().is_ok());
        let spec = ProblemSpec::new(0.5, 2.0, ReactionSupport::HalfLine, bump, dom.clone());
        assert!(spec.validate().is_err());
        let floored = DatumSpec::CompactBump {
            center: 0.0,
            width: 2.0,
            height: 1.0,
            floor: 1e-3,
        };
        let spec = ProblemSpec::new(0.5, 0.5, ReactionSupport::HalfLine, floored, dom);
        assert!(spec.validate().is_ok());
    }
}
