//! Fixed numeric tolerances.
//!
//! Everything here is an absolute constant of the algorithm, not a knob:
//! run-time accuracy targets (total residual, per-stage analyticity) live in
//! [`crate::recursion::FactorConfig`] instead.

/// Hermitian symmetry check, relative to the largest sample norm.
pub const TAU_HERM: f64 = 1e-10;

/// Triangular factorization residual, relative.
pub const TAU_CHOL: f64 = 1e-10;

/// Eigenvalue tolerance below which a sample counts as indefinite, and the
/// size of the diagonal shift used to regularize near-singular samples.
pub const TAU_PSD: f64 = 1e-12;

/// Pointwise unitarity and determinant defect of a completion.
pub const TAU_UNIT: f64 = 1e-9;

/// Constancy of the pointwise Gram form, relative to its largest entry.
pub const TAU_GRAM: f64 = 1e-9;

/// Default cap on non-analytic energy, relative.
pub const TAU_ANALYTIC: f64 = 1e-8;

/// Default cap on the total reconstruction residual.
pub const TAU_TOTAL: f64 = 1e-6;

/// Modulus reproduction of a truncated outer factor, relative.
pub const TAU_OUTER: f64 = 1e-8;

/// Singular values below this times the largest count as zero.
pub const TAU_RANK: f64 = 1e-10;

/// Samples below this times the largest are floored before taking logs.
pub const EPS_FLOOR_REL: f64 = 1e-13;

/// Fraction of regularized samples beyond which a density is rejected as
/// singular on a set of positive measure rather than at isolated points.
pub const DEGENERATE_SAMPLE_FRACTION: f64 = 0.25;
