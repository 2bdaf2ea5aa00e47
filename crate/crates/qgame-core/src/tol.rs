//! Numeric tolerances shared by the whole pipeline.
//!
//! Tests and the certification machinery reference these by name; keeping
//! them in one place is what makes the acceptance thresholds auditable.

/// Max-abs entry deviation allowed in `U * U^dag - I` for operators built
/// by the strategy spaces and the entangler.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Looser unitarity gate applied to caller-supplied operators before a
/// density-matrix conjugation.
pub const CONJUGATION_UNITARITY_TOL: f64 = 1e-8;

/// Hermiticity / trace deviation allowed in a density matrix.
pub const DENSITY_TOL: f64 = 1e-10;

/// Diagonal entries of a density matrix may undershoot zero by at most
/// this much; such values are clamped to zero on read, anything more
/// negative is an error.
pub const PROB_CLAMP: f64 = 1e-12;

/// Raw diagonal probabilities must sum to one within this bound before
/// renormalization.
pub const NORM_TOL: f64 = 1e-9;
