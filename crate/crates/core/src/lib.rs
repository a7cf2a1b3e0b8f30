//! Numerical laboratory for the porous-medium / fast-diffusion equation with
//! a reaction term switched on only on part of the line,
//! `u_t = (u^m)_xx + a(x) u^p`.
//!
//! * [`problem`] holds the shared domain types (exponents, supports, data, grids).
//! * [`pde`] is the explicit solver with blow-up detection.
//! * [`odeshoot`] integrates the self-similar profile equations and solves
//!   the associated shooting problems.
//! * [`phaseplane`] studies the same profiles as orbits of a planar system.
//! * [`rates`] extracts growth and blow-up rates from solver traces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod integrate;
pub mod odeshoot;
pub mod pde;
pub mod phaseplane;
pub mod problem;
pub mod rates;

pub use error::{Error, Result};
pub use odeshoot::{
    barenblatt, flat_ode, integrate_profile, Classification, MatchResult, ProfileKind, ProfileOutcome, ProfileProblem,
};
pub use pde::{detect_regime, energy, estimate_blowup_time, run, step, Regime, SolverTolerances, Trace};
pub use phaseplane::{PhaseParams, Terminal, Trajectory};
pub use problem::{
    make_initial_datum, reaction_coefficient, DatumSpec, DomainPolicy, Field, Grid, ProblemSpec, ReactionSupport,
};
pub use rates::{BlowUpSetEstimate, Location, RateFit, RateLaw};
