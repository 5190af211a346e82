//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A coefficient band does not fit on the requested grid.
    #[error("band [{lo}, {hi}] does not fit on a grid of {k} samples")]
    BandOverflow { lo: i64, hi: i64, k: usize },

    /// A sample of the density is not Hermitian within tolerance.
    #[error("density is not Hermitian at sample {sample} (defect {defect:.3e})")]
    NotHermitian { sample: usize, defect: f64 },

    /// A sample has an eigenvalue below the negative tolerance.
    #[error(
        "density is not positive semidefinite at sample {sample} (eigenvalue {eigenvalue:.3e})"
    )]
    NotPositiveSemidefinite { sample: usize, eigenvalue: f64 },

    /// The density is singular on a set of samples too large to factor.
    #[error("degenerate density: {0}")]
    DegenerateDensity(String),

    /// The completion system has fewer null directions than columns needed.
    #[error("completion system null space has dimension {found}, need {required}")]
    CompletionRankDeficiency { found: usize, required: usize },

    /// The pointwise Gram form of the null-space solutions varies over the
    /// circle; the assembled system does not have the constant-Gram property.
    #[error("Gram form is not constant over the circle (defect {defect:.3e}, tolerance {tolerance:.3e})")]
    GramNotConstant { defect: f64, tolerance: f64 },

    /// The value at the origin used to pin the completion is singular.
    #[error("cannot pin completion: product value at origin is singular")]
    PinSingular,

    /// A single stage left more non-analytic energy than allowed.
    #[error("stage {stage} residual {residual:.3e} exceeds tolerance at N = {n}")]
    StageResidual {
        stage: usize,
        n: usize,
        residual: f64,
    },

    /// Doubling the truncation order up to its cap never met the tolerance.
    #[error("refinement exhausted at stage {stage}: residual {residual:.3e} at N = {n}")]
    RefinementExhausted {
        stage: usize,
        n: usize,
        residual: f64,
    },

    /// The factor value at the origin is singular, so no canonical form exists.
    #[error("cannot normalize: factor value at origin is singular")]
    CannotNormalize,

    /// The Gram matrix of the comparison least-squares problem is singular.
    #[error("unitary equivalence undetermined: comparison Gram matrix is singular")]
    EquivalenceUndetermined,

    /// Mismatched dimensions or malformed input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
