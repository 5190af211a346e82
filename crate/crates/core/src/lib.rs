//! Canonical spectral factorization of matrix-valued densities on the unit circle.
//!
//! Given K samples of an r x r Hermitian positive definite matrix-function
//! `S(z)` on `|z| = 1`, this crate computes the canonical spectral factor:
//! the analytic matrix-function `chi` with `S = chi chi*` almost everywhere,
//! `det chi` outer, and `chi(0)` Hermitian positive definite.
//!
//! The construction runs in three phases:
//!
//! 1. pointwise lower Cholesky factorization of the samples ([`triangular`]),
//! 2. scalar outer factorization of each diagonal entry ([`outer`]), which
//!    turns the triangular field into a matrix with analytic outer diagonal,
//! 3. a recursion over leading principal blocks ([`recursion`]) that
//!    right-multiplies by polynomial unitary completions ([`completion`])
//!    until the whole matrix is analytic.
//!
//! [`verify`] provides independent residual checks, factor comparison up to a
//! constant unitary, and a seeded generator of densities with known factors.
//!
//! ```
//! use nalgebra::DMatrix;
//! use num_complex::Complex64;
//! use specfact_core::{factorize, FactorConfig, GridMatrixFunction, UnitCircleGrid};
//!
//! // sample S(z) = B(z) B(z)* for B(z) = [[1, 0], [0.5 z, 2]]
//! let grid = UnitCircleGrid::new(256)?;
//! let s = GridMatrixFunction::hermitian(
//!     grid.points()
//!         .map(|z| {
//!             let b = DMatrix::from_row_slice(2, 2, &[
//!                 Complex64::ONE, Complex64::ZERO,
//!                 0.5 * z, Complex64::new(2.0, 0.0),
//!             ]);
//!             &b * b.adjoint()
//!         })
//!         .collect(),
//! )?;
//!
//! // B is analytic with B(0) positive definite, so the canonical factor
//! // is B itself
//! let result = factorize(&s, &FactorConfig::default())?;
//! assert!(result.residual < 1e-10);
//! assert!((result.chi_plus.entry(1, 0).coeff(1) - Complex64::new(0.5, 0.0)).norm() < 1e-8);
//! # Ok::<(), specfact_core::Error>(())
//! ```

pub mod completion;
pub mod error;
pub mod fourier;
pub mod json;
pub mod linalg;
pub mod outer;
pub mod recursion;
pub mod tol;
pub mod triangular;
pub mod verify;

pub use error::{Error, Result};
pub use fourier::{FourierSeries, GridMatrixFunction, MatrixSeries, UnitCircleGrid};
pub use outer::OuterFactor;
pub use recursion::{factorize, FactorConfig, FactorizationResult};
