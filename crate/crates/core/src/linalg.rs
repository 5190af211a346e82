//! Small dense complex linear algebra helpers used across the pipeline.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Hermitian part `(a + a*) / 2`.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &CMat) -> f64 {
    h.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Lower Cholesky factor with nonnegative real diagonal, without pivoting.
///
/// Accepts positive semidefinite input: a pivot in `[-pivot_tol, 0]` is
/// clamped to zero and its column skipped. A pivot below `-pivot_tol` is an
/// error reported with the given sample index.
pub fn lower_cholesky_psd(h: &CMat, pivot_tol: f64, sample: usize) -> Result<CMat> {
    let n = h.nrows();
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d < -pivot_tol {
            return Err(Error::NotPositiveSemidefinite {
                sample,
                eigenvalue: d,
            });
        }
        let piv = d.max(0.0).sqrt();
        l[(j, j)] = Complex64::new(piv, 0.0);
        if piv == 0.0 {
            continue;
        }
        for i in (j + 1)..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / piv;
        }
    }
    Ok(l)
}

/// Singular-value gap around the extracted null block.
#[derive(Debug, Clone, Copy)]
pub struct NullspaceReport {
    /// Smallest singular value left outside the null block.
    pub smallest_kept: f64,
    /// Largest singular value inside the null block.
    pub largest_null: f64,
}

/// The `want` right singular vectors of the smallest singular values of `a`.
///
/// The matrix is zero-padded to square so the full right basis is available.
/// Errors if fewer than `want` singular values lie below
/// `TAU_RANK * sigma_max`.
pub fn svd_null_vectors(a: &CMat, want: usize) -> Result<(Vec<CVec>, NullspaceReport)> {
    let dim = a.nrows().max(a.ncols());
    let mut padded = CMat::zeros(dim, dim);
    padded.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let sigma = svd.singular_values;
    debug_assert!(sigma.iter().zip(sigma.iter().skip(1)).all(|(a, b)| a >= b));

    let sigma_max = sigma[0];
    let null_count = sigma
        .iter()
        .filter(|s| **s <= tol::TAU_RANK * sigma_max)
        .count();
    let null_count = if sigma_max == 0.0 { dim } else { null_count };
    if null_count < want {
        return Err(Error::CompletionRankDeficiency {
            found: null_count,
            required: want,
        });
    }

    let vectors = (dim - want..dim).map(|i| v_t.row(i).adjoint()).collect();
    let report = NullspaceReport {
        smallest_kept: if dim > want {
            sigma[dim - want - 1]
        } else {
            f64::INFINITY
        },
        largest_null: sigma[dim - want],
    };
    Ok((vectors, report))
}

/// Unitary polar factor Q of a nonsingular matrix `a = Q H`.
///
/// Q is unique (`a (a* a)^{-1/2}`) and independent of how the SVD resolves
/// degenerate singular values. Returns `None` when `a` is singular within
/// [`tol::TAU_RANK`].
pub fn polar_unitary(a: &CMat) -> Option<CMat> {
    let svd = a.clone().svd(true, true);
    let sigma = &svd.singular_values;
    if sigma[0] == 0.0 || sigma[sigma.len() - 1] <= tol::TAU_RANK * sigma[0] {
        return None;
    }
    Some(svd.u.expect("requested") * svd.v_t.expect("requested"))
}

/// Largest singular value.
pub fn operator_norm(a: &CMat) -> f64 {
    a.clone().svd(false, false).singular_values[0]
}

/// Solve `g x = b` for Hermitian positive definite `g`.
pub fn solve_hpd(g: &CMat, b: &CMat) -> Option<CMat> {
    nalgebra::linalg::Cholesky::new(g.clone()).map(|c| c.solve(b))
}

/// Max Frobenius distance from the identity of `u u*`, over a set of samples.
pub fn unitarity_defect(samples: &[CMat]) -> f64 {
    samples
        .iter()
        .map(|u| {
            let n = u.nrows();
            (u * u.adjoint() - CMat::identity(n, n)).norm()
        })
        .fold(0.0, f64::max)
}
