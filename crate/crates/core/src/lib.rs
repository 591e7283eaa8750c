//! General grey number arithmetic and fuzzy grey cognitive map inference.
//!
//! The crate provides:
//!
//! * [`grey`] — general grey numbers (kernel/greyness pairs), interval grey
//!   numbers, the background-domain conversion between the two and the
//!   metrics `d2`/`d` on grey numbers and grey vectors;
//! * [`activation`] — sigmoid and tanh activations on reals, intervals and
//!   grey numbers;
//! * [`engine`] — iterative inference for crisp, interval and grey cognitive
//!   maps, plus fixed-point / limit-cycle / chaos classification;
//! * [`analysis`] — Frobenius-norm sufficient conditions for kernel and
//!   greyness convergence, the comparison matrix `W*`, the greyness iteration
//!   matrix `M` and its gated contraction form `M̃`, and full per-run
//!   convergence reports;
//! * [`scenario`] — the built-in web-experience (sigmoid) and public-health
//!   (tanh) maps with their grey and multi-interval variants;
//! * [`model`] — the model type and its JSON file format.

pub mod activation;
pub mod analysis;
pub mod engine;
pub mod error;
pub mod grey;
pub mod matrix;
pub mod model;
pub mod scenario;

pub use activation::{Activation, ActivationKind};
pub use analysis::{
    frobenius, full_report, greyness_condition, has_unit_eigenvalue, kernel_condition, m_matrix,
    m_tilde, tanh_grey_fixed_point_residual, w_star, ConditionVerdict, ConvergenceReport,
    VerdictKind,
};
pub use engine::{
    classify, fcm_step, fgcm_step, fggcm_step, run, Behavior, BehaviorKind, Engine, Trajectory,
};
pub use error::{Error, Result};
pub use grey::{metric_d, metric_d2, Ggn, GreyDomain, Ign};
pub use matrix::Matrix;
pub use model::{load_model, save_model, GreyEntry, Model, ModelSpec};
pub use scenario::{builtin, inject_greyness, supported_engines, ScenarioId};
