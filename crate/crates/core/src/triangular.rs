//! Pointwise lower-triangular factorization of the density and the diagonal
//! outer correction that yields the starting matrix of the recursion.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{GridMatrixFunction, MatrixSeries, UnitCircleGrid};
use crate::linalg::{self, CMat};
use crate::outer::{outer_factor, OuterFactor};
use crate::tol;

/// Per-sample lower-triangular Cholesky factors with nonnegative real
/// diagonal, `S(z_k) = A(z_k) A(z_k)*`.
#[derive(Debug, Clone)]
pub struct LowerTriangularField {
    samples: Vec<CMat>,
    regularized: usize,
}

impl LowerTriangularField {
    pub fn r(&self) -> usize {
        self.samples[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn grid(&self) -> UnitCircleGrid {
        UnitCircleGrid::new(self.samples.len()).expect("validated at construction")
    }

    pub fn sample(&self, k: usize) -> &CMat {
        &self.samples[k]
    }

    pub fn samples(&self) -> &[CMat] {
        &self.samples
    }

    /// Number of samples that needed a diagonal shift before factoring.
    pub fn regularized_samples(&self) -> usize {
        self.regularized
    }

    /// One diagonal entry as real samples.
    pub fn diagonal_samples(&self, j: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[(j, j)].re).collect()
    }
}

/// The starting matrix of the recursion: lower triangular with outer analytic
/// diagonal, `S(z_k) = M(z_k) M(z_k)*`.
#[derive(Debug, Clone)]
pub struct StartMatrix {
    series: MatrixSeries,
    samples: Vec<CMat>,
    diag_outer: Vec<OuterFactor>,
}

impl StartMatrix {
    pub fn r(&self) -> usize {
        self.samples[0].nrows()
    }

    /// Coefficients on the full resolvable band; diagonal entries are exactly
    /// the outer factor series, strictly upper entries are exactly zero.
    pub fn series(&self) -> &MatrixSeries {
        &self.series
    }

    /// Corrected grid samples (columns of the triangular field scaled by the
    /// unimodular ratios).
    pub fn samples(&self) -> &[CMat] {
        &self.samples
    }

    /// The outer factor of each diagonal entry.
    pub fn diag_outer(&self) -> &[OuterFactor] {
        &self.diag_outer
    }
}

/// Factor every sample as `A A*` with lower-triangular `A` and nonnegative
/// real diagonal, deterministically and without pivoting.
///
/// A sample whose smallest eigenvalue is below `-TAU_PSD * scale` is
/// rejected. One in `[-TAU_PSD * scale, EPS_FLOOR_REL * scale)` is shifted by
/// `TAU_PSD * trace / r` before factoring; the count of shifted samples is
/// kept so callers can tell isolated circle zeros from a density that is
/// singular everywhere.
pub fn pointwise_lower_cholesky(s: &GridMatrixFunction) -> Result<LowerTriangularField> {
    s.require_hermitian()?;
    let r = s.r();
    let scale = s.max_norm();
    if scale <= 0.0 {
        return Err(Error::DegenerateDensity(
            "density is identically zero".into(),
        ));
    }
    let floor = tol::EPS_FLOOR_REL * scale;
    let neg_tol = tol::TAU_PSD * scale;

    let mut samples = Vec::with_capacity(s.len());
    let mut regularized = 0usize;
    for k in 0..s.len() {
        let mut h = linalg::hermitian_part(s.sample(k));
        let min_eig = linalg::min_eigenvalue(&h);
        if min_eig < -neg_tol {
            return Err(Error::NotPositiveSemidefinite {
                sample: k,
                eigenvalue: min_eig,
            });
        }
        if min_eig < floor {
            let delta = tol::TAU_PSD * h.trace().re / r as f64;
            for j in 0..r {
                h[(j, j)] += Complex64::new(delta.max(0.0), 0.0);
            }
            regularized += 1;
        }
        samples.push(linalg::lower_cholesky_psd(&h, neg_tol, k)?);
    }
    Ok(LowerTriangularField {
        samples,
        regularized,
    })
}

/// Multiply each column of the triangular field by the unimodular ratio
/// `u_j = f_j / f_jj` of the diagonal's outer factor to its modulus, making
/// all diagonal entries outer analytic while leaving `A A*` unchanged.
///
/// Returns both the corrected samples and their coefficients on the band
/// `[-(K/2 - 1), K/2 - 1]`, with diagonal entries replaced by the exact
/// outer series truncated at `band_hi`.
pub fn diagonal_outer_correction(a: &LowerTriangularField, band_hi: i64) -> Result<StartMatrix> {
    let r = a.r();
    let grid = a.grid();
    let k = grid.len();

    let mut diag_outer = Vec::with_capacity(r);
    let mut samples: Vec<CMat> = a.samples().to_vec();
    for j in 0..r {
        let d = a.diagonal_samples(j);
        let of = outer_factor(&d, &grid, band_hi)?;
        let d_max = d.iter().copied().fold(0.0, f64::max);
        let floor = tol::EPS_FLOOR_REL * d_max;
        for (idx, sample) in samples.iter_mut().enumerate() {
            let u = if d[idx] > floor {
                of.samples()[idx] / d[idx]
            } else {
                Complex64::ONE
            };
            for i in (j + 1)..r {
                sample[(i, j)] *= u;
            }
            // the scaled diagonal is the outer realization itself
            sample[(j, j)] = if d[idx] > floor {
                of.samples()[idx]
            } else {
                sample[(j, j)]
            };
        }
        diag_outer.push(of);
    }

    let band = grid.max_band();
    let corrected = GridMatrixFunction::new(samples.clone())?;
    let mut coeffs: Vec<DMatrix<Complex64>> = MatrixSeries::from_grid(&corrected, -band, band)?
        .coeffs()
        .to_vec();
    // pin the diagonal to the exact outer coefficients so its negative
    // energy is identically zero
    for (j, of) in diag_outer.iter().enumerate() {
        for (idx, c) in coeffs.iter_mut().enumerate() {
            let n = -band + idx as i64;
            c[(j, j)] = of.coeffs().coeff(n);
        }
    }
    let series = MatrixSeries::new(-band, coeffs);

    if k != series.to_grid(&grid)?.len() {
        unreachable!("band fits grid by construction");
    }
    Ok(StartMatrix {
        series,
        samples,
        diag_outer,
    })
}
