//! Exact computations on finite joint probability distributions:
//! conditional min-entropy, smoothing, min-entropy splitting, statistical
//! distance, and randomness-extraction verification.
//!
//! Tables carry their mass either as arbitrary-precision rationals (exact
//! mode) or as doubles. Entropy values are reported in bits as `f64` either
//! way; exact mode keeps every intermediate guessing probability rational so
//! threshold comparisons are free of rounding.

mod bounds;
mod entropy;
mod lhl;
mod simplex;
mod split;
mod table;

pub use bounds::{eq3_bound, joint_guess_rate_log2, per_qubit_guess_bound};
pub use entropy::{
    conditional_guessing_probability, min_entropy_cond, smooth_guessing_probability,
    smooth_min_entropy_cond, MassScalar, SmoothingMethod,
};
pub use lhl::{lhl_verify, LhlReport};
pub use split::{exhaustive_split_search, min_entropy_split, SplitOutcome};
pub use table::{Axis, JointDistribution, Mass};

/// Comparison tolerance for double-mode computations.
pub const FLOAT_TOLERANCE: f64 = 1e-9;
/// Normalization tolerance for float tables.
pub const MASS_TOLERANCE: f64 = 1e-12;
