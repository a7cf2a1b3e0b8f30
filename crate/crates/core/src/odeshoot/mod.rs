//! Self-similar profile equations, shooting, and closed-form solutions.

pub mod blowup;
pub mod closed;
pub mod io;
pub mod profile;
pub mod selfsim;
pub mod shooting;
pub mod subsolution;

pub use blowup::{blowup_outer_profile, rescale_outer, OuterProfile};
pub use closed::{
    barenblatt, barenblatt_front, barenblatt_k, flat_blowup_time, flat_ode, linear_profile, LinearProfile,
};
pub use io::{write_profile_csv, write_shooting_csv, ShootingRow};
pub use profile::{
    integrate_profile, integrate_profile_with, profile_residual, Classification, ProfileKind, ProfileOptions,
    ProfileOutcome, ProfileProblem, ProfileSample,
};
pub use selfsim::{selfsimilar_eval, SampledProfile, SelfSimilarMode};
pub use shooting::{
    alpha_of_gamma, find_alpha_star, find_lambda_minus, find_lambda_plus, find_mu0, gamma_star, mismatch,
    mismatch_scan, MatchResult, Mu0Result,
};
pub use subsolution::{build_subsolution_p_lt_1, FourPieceSubsolution};
