//! Fixed problem instances shared by the benchmarks.

use halfline_core::{DatumSpec, DomainPolicy, ProblemSpec, ReactionSupport};

/// Compact bump on `[-10, 10]` at the given spacing, run to `t_max`.
pub fn bump_problem(m: f64, p: f64, dx: f64, t_max: f64) -> ProblemSpec {
    let datum = DatumSpec::CompactBump {
        center: 0.0,
        width: 2.0,
        height: 1.0,
        floor: 0.0,
    };
    ProblemSpec::new(
        m,
        p,
        ReactionSupport::HalfLine,
        datum,
        DomainPolicy::fixed(-10.0, 10.0, dx),
    )
    .with_max_time(t_max)
}
