//! Polynomial unitary completion: given the last row of an almost-identity
//! matrix-function (tails plus an outer entry) build the degree-N polynomial
//! matrix, unitary on the circle with determinant one, whose
//! right-multiplication makes the row analytic.
//!
//! Columns of the completion are polynomial solutions of a homogeneous
//! linear system. The system is chosen so that the pointwise sesquilinear
//! pairing of any two solutions is constant over the circle; a constant Gram
//! matrix is what turns a null-space basis into a pointwise-unitary matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, GridMatrixFunction, MatrixSeries, UnitCircleGrid};
use crate::linalg::{self, CMat, CVec, NullspaceReport};
use crate::tol;

/// The data of the row to complete: `m - 1` principal-part tails on
/// `[-N, -1]` and the outer analytic diagonal entry.
#[derive(Debug, Clone)]
pub struct LastRowData {
    m: usize,
    tails: Vec<FourierSeries>,
    f_plus: FourierSeries,
    n: usize,
}

impl LastRowData {
    /// Validates the bands and that `f_plus` is analytic with a real
    /// positive value at the origin (which is what makes the determinant
    /// pinning exact).
    pub fn new(tails: Vec<FourierSeries>, f_plus: FourierSeries, n: usize) -> Result<Self> {
        let m = tails.len() + 1;
        if m < 2 {
            return Err(Error::InvalidInput(
                "completion needs at least one tail".into(),
            ));
        }
        for (j, t) in tails.iter().enumerate() {
            let misplaced = t
                .iter()
                .find(|(idx, c)| (*idx < -(n as i64) || *idx > -1) && c.norm() != 0.0);
            if let Some((idx, _)) = misplaced {
                return Err(Error::InvalidInput(format!(
                    "tail {j} has a nonzero coefficient at index {idx}, outside [-{n}, -1]"
                )));
            }
        }
        if f_plus.lo() != 0 {
            return Err(Error::InvalidInput(format!(
                "outer entry must be analytic with lo = 0, got lo = {}",
                f_plus.lo()
            )));
        }
        let v0 = f_plus.coeff(0);
        if v0.re <= 0.0 || v0.im.abs() > 1e-9 * v0.norm() {
            return Err(Error::InvalidInput(format!(
                "outer entry value at origin must be real positive, got {v0}"
            )));
        }
        Ok(Self {
            m,
            tails,
            f_plus,
            n,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tails(&self) -> &[FourierSeries] {
        &self.tails
    }

    pub fn f_plus(&self) -> &FourierSeries {
        &self.f_plus
    }

    /// Boundary realization of the full row matrix: identity except the last
    /// row `(tail_1, .., tail_{m-1}, f_plus)`.
    pub fn realize(&self, grid: &UnitCircleGrid) -> Result<Vec<CMat>> {
        let m = self.m;
        let mut samples = vec![CMat::identity(m, m); grid.len()];
        for (j, t) in self.tails.iter().enumerate() {
            for (k, v) in t.to_samples(grid)?.into_iter().enumerate() {
                samples[k][(m - 1, j)] = v;
            }
        }
        for (k, v) in self.f_plus.to_samples(grid)?.into_iter().enumerate() {
            samples[k][(m - 1, m - 1)] = v;
        }
        Ok(samples)
    }
}

/// The band `[-N, -1]` of a series plus the l2 energy of everything dropped
/// below `-N`.
#[derive(Debug, Clone)]
pub struct TruncatedTail {
    pub series: FourierSeries,
    pub dropped_energy: f64,
}

/// Keep coefficients `-N .. -1`; report the energy of coefficients below
/// `-N`. The analytic part does not enter the completion system and is
/// rejoined by the caller.
pub fn truncate_tail(phi: &FourierSeries, n: usize) -> TruncatedTail {
    let n = n as i64;
    let dropped_energy = phi
        .iter()
        .filter(|(idx, _)| *idx < -n)
        .map(|(_, c)| c.norm_sqr())
        .sum::<f64>()
        .max(0.0)
        .sqrt();
    let series = if n == 0 {
        FourierSeries::zeros(-1, -1)
    } else {
        phi.slice_band(-n, -1)
    };
    TruncatedTail {
        series,
        dropped_energy,
    }
}

/// The assembled homogeneous system whose null space holds the completion
/// columns.
///
/// Unknown layout: the coefficient vectors (degrees `0..=N`) of the first
/// `m - 1` column entries, then the conjugated coefficient vector of the
/// last entry, concatenated into `m (N + 1)` complex unknowns. Rows demand
/// the vanishing of Fourier coefficients `-N .. -1` of the row-times-column
/// products; there are `m N` of them.
#[derive(Debug, Clone)]
pub struct CompletionSystem {
    m: usize,
    n: usize,
    matrix: CMat,
}

impl CompletionSystem {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Flat JSON dump of the system matrix for debugging.
    pub fn to_debug_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "rows": self.rows(),
            "cols": self.cols(),
            "re": self.matrix.iter().map(|c| c.re).collect::<Vec<_>>(),
            "im": self.matrix.iter().map(|c| c.im).collect::<Vec<_>>(),
        })
    }
}

/// Build the system for the given row data.
///
/// With column unknowns `x_1 .. x_m` (polynomials of degree at most N) the
/// conditions are, for each negative index `v = -N .. -1`:
///
/// * analyticity of the completed row:
///   `c_v( sum_j tail_j x_j + f conj(x_m) ) = 0`,
/// * pairing closure, one block per tail, stored conjugated so the system
///   stays complex-linear:
///   `conj c_v( f conj(x_j) - tail_j x_m ) = 0`.
///
/// Together they make `f B(x, y)` analytic for any two solutions, where
/// `B(x, y)` is the pointwise pairing; since `B` has a finite band and `f`
/// is outer, `B` is analytic, and its Hermitian symmetry forces it constant.
/// Coefficients of `f` beyond index `2 N` cannot enter; the series is cut
/// there.
pub fn assemble_system(data: &LastRowData) -> CompletionSystem {
    let m = data.m();
    let n = data.n();
    let ni = n as i64;
    let cols = m * (n + 1);
    let rows = m * n;
    let mut matrix = CMat::zeros(rows, cols);

    let f = data.f_plus().slice_band(0, (2 * n).max(1) as i64);
    let w_block = (m - 1) * (n + 1);

    for (row, v) in (-ni..0).enumerate() {
        // analyticity of the completed row
        for (j, tail) in data.tails().iter().enumerate() {
            for d in 0..=n {
                matrix[(row, j * (n + 1) + d)] = tail.coeff(v - d as i64);
            }
        }
        for d in 0..=n {
            matrix[(row, w_block + d)] = f.coeff(v + d as i64);
        }
    }
    for (j, tail) in data.tails().iter().enumerate() {
        let base = n + j * n;
        for (row, v) in (-ni..0).enumerate() {
            for d in 0..=n {
                matrix[(base + row, j * (n + 1) + d)] = f.coeff(v + d as i64).conj();
                matrix[(base + row, w_block + d)] -= tail.coeff(v - d as i64).conj();
            }
        }
    }
    CompletionSystem { m, n, matrix }
}

/// `m` mutually orthonormal vectors spanning the null space of the system,
/// taken from the right singular vectors of the smallest singular values.
pub fn solve_nullspace(sys: &CompletionSystem) -> Result<(Vec<CVec>, NullspaceReport)> {
    linalg::svd_null_vectors(sys.matrix(), sys.m())
}

/// A polynomial matrix-function of degree at most N, unitary on the circle
/// with determinant one.
///
/// Rows `1 .. m-1` store the analytic polynomial entries directly; the last
/// row stores the analytic polynomials whose boundary conjugates are the
/// realized entries.
#[derive(Debug, Clone)]
pub struct UnitaryPolyMatrix {
    m: usize,
    coeffs: Vec<CMat>,
}

impl UnitaryPolyMatrix {
    pub fn identity(m: usize) -> Self {
        Self {
            m,
            coeffs: vec![CMat::identity(m, m)],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Polynomial degree bound N (coefficient matrices `0..=N`).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Stored coefficient matrices; the last row is the analytic
    /// representative of the conjugated boundary row.
    pub fn stored_coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// The stored analytic polynomial of entry (i, j); for `i = m - 1` the
    /// realized boundary entry is its conjugate.
    pub fn stored_entry(&self, i: usize, j: usize) -> FourierSeries {
        FourierSeries::new(0, self.coeffs.iter().map(|c| c[(i, j)]).collect())
    }

    /// Boundary realization on the grid, conjugating the last row.
    pub fn realize(&self, grid: &UnitCircleGrid) -> Result<Vec<CMat>> {
        let m = self.m;
        let mut samples = vec![CMat::zeros(m, m); grid.len()];
        for i in 0..m {
            for j in 0..m {
                let vals = self.stored_entry(i, j).to_samples(grid)?;
                for (k, v) in vals.into_iter().enumerate() {
                    samples[k][(i, j)] = if i == m - 1 { v.conj() } else { v };
                }
            }
        }
        Ok(samples)
    }

    /// The realized function as a Laurent series on `[-N, N]`: rows above
    /// the last hold powers `0..=N`, the last row holds powers `-N..=0` with
    /// conjugated coefficients.
    pub fn realized_series(&self) -> MatrixSeries {
        let m = self.m;
        let ni = self.degree() as i64;
        let mut out = vec![CMat::zeros(m, m); (2 * ni + 1) as usize];
        for (d, c) in self.coeffs.iter().enumerate() {
            let d = d as i64;
            for i in 0..m - 1 {
                for j in 0..m {
                    out[(d + ni) as usize][(i, j)] = c[(i, j)];
                }
            }
            for j in 0..m {
                out[(ni - d) as usize][(m - 1, j)] = c[(m - 1, j)].conj();
            }
        }
        MatrixSeries::new(-ni, out)
    }

    /// Right-multiply the realized function by a constant matrix. Stored
    /// rows above the last transform by `w`; the stored last row transforms
    /// by `conj(w)` so that its boundary conjugate transforms by `w`.
    pub fn right_mul_const(&mut self, w: &CMat) {
        let m = self.m;
        let w_conj = w.map(|c| c.conj());
        for c in &mut self.coeffs {
            let top = c.view((0, 0), (m - 1, m)).into_owned() * w;
            c.view_mut((0, 0), (m - 1, m)).copy_from(&top);
            let last = c.view((m - 1, 0), (1, m)).into_owned() * &w_conj;
            c.view_mut((m - 1, 0), (1, m)).copy_from(&last);
        }
    }
}

/// Diagnostics of one completion.
#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub unitary: UnitaryPolyMatrix,
    /// Largest per-entry standard deviation of the pointwise Gram form,
    /// relative to its largest mean entry.
    pub gram_defect: f64,
    /// Singular-value gap around the extracted null block.
    pub nullspace: NullspaceReport,
    /// Non-analytic energy of the completed row matrix, relative to its
    /// total energy.
    pub residual: f64,
}

/// Build the completion matrix from null-space solutions: form the pointwise
/// Gram of the realized columns, assert it is constant over the circle,
/// average it, and apply the inverse Cholesky transpose; then scale the last
/// column so the determinant is one.
pub fn orthonormalize_constant_gram(
    solutions: &[CVec],
    data: &LastRowData,
    grid: &UnitCircleGrid,
) -> Result<(UnitaryPolyMatrix, f64)> {
    let m = data.m();
    let n = data.n();
    assert_eq!(solutions.len(), m, "need exactly m null-space solutions");

    let mut u = from_solutions(solutions, m, n);
    let realized = u.realize(grid)?;

    // pointwise Gram of the columns
    let k = grid.len();
    let mut mean = CMat::zeros(m, m);
    for e in &realized {
        mean += e.adjoint() * e;
    }
    mean /= Complex64::new(k as f64, 0.0);
    let mut var = DMatrix::<f64>::zeros(m, m);
    for e in &realized {
        let g = e.adjoint() * e;
        for i in 0..m {
            for j in 0..m {
                var[(i, j)] += (g[(i, j)] - mean[(i, j)]).norm_sqr();
            }
        }
    }
    let gram_scale = mean.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let defect = var
        .iter()
        .map(|v| (v / k as f64).sqrt())
        .fold(0.0, f64::max);
    let tolerance = tol::TAU_GRAM * gram_scale;
    if defect > tolerance {
        return Err(Error::GramNotConstant { defect, tolerance });
    }

    let gram = linalg::hermitian_part(&mean);
    let chol = nalgebra::linalg::Cholesky::new(gram).ok_or(Error::CompletionRankDeficiency {
        found: 0,
        required: m,
    })?;
    let l = chol.l();
    let l_inv =
        l.solve_lower_triangular(&CMat::identity(m, m))
            .ok_or(Error::CompletionRankDeficiency {
                found: 0,
                required: m,
            })?;
    u.right_mul_const(&l_inv.adjoint());

    // determinant fix: the determinant of the orthonormalized matrix is a
    // unimodular constant; absorb it into the last column
    let realized = u.realize(grid)?;
    let det_mean: Complex64 =
        realized.iter().map(|e| e.determinant()).sum::<Complex64>() / k as f64;
    let mut fix = CMat::identity(m, m);
    fix[(m - 1, m - 1)] = det_mean.conj();
    u.right_mul_const(&fix);

    Ok((
        u,
        if gram_scale > 0.0 {
            defect / gram_scale
        } else {
            0.0
        },
    ))
}

fn from_solutions(solutions: &[CVec], m: usize, n: usize) -> UnitaryPolyMatrix {
    let mut coeffs = vec![CMat::zeros(m, m); n + 1];
    for (col, v) in solutions.iter().enumerate() {
        for i in 0..m - 1 {
            for d in 0..=n {
                coeffs[d][(i, col)] = v[i * (n + 1) + d];
            }
        }
        // the unknown block of the last entry is already conjugated, which
        // is exactly the stored analytic representative
        for d in 0..=n {
            coeffs[d][(m - 1, col)] = v[(m - 1) * (n + 1) + d].conj();
        }
    }
    UnitaryPolyMatrix { m, coeffs }
}

/// Right-multiply by the constant unitary with determinant one that makes
/// the value at the origin of the completed product Hermitian positive
/// definite: `w = q*` for the polar factor `f0 = q h`.
///
/// This pins down the arbitrary constant-unitary freedom of the null-space
/// basis, so the completion is a deterministic function of its data.
pub fn pin_positive_definite(mut u: UnitaryPolyMatrix, f0: &CMat) -> Result<UnitaryPolyMatrix> {
    let q = linalg::polar_unitary(f0).ok_or(Error::PinSingular)?;
    u.right_mul_const(&q.adjoint());
    Ok(u)
}

/// Assemble, solve, orthonormalize, and pin, end to end.
pub fn complete(data: &LastRowData, grid: &UnitCircleGrid) -> Result<CompletionResult> {
    let sys = assemble_system(data);
    let (solutions, nullspace) = solve_nullspace(&sys)?;
    let (u, gram_defect) = orthonormalize_constant_gram(&solutions, data, grid)?;

    let f_samples = data.realize(grid)?;
    let u_samples = u.realize(grid)?;
    let k = grid.len();
    let f0 = f_samples
        .iter()
        .zip(&u_samples)
        .map(|(f, e)| f * e)
        .sum::<CMat>()
        / Complex64::new(k as f64, 0.0);
    let u = pin_positive_definite(u, &f0)?;

    let u_samples = u.realize(grid)?;
    let product: Vec<CMat> = f_samples
        .iter()
        .zip(&u_samples)
        .map(|(f, e)| f * e)
        .collect();
    let product_fn = GridMatrixFunction::new(product)?;
    let band = grid.max_band();
    let series = MatrixSeries::from_grid(&product_fn, -band, band)?;
    let total = series.energy().max(f64::MIN_POSITIVE);
    let residual = series.negative_energy() / total;

    Ok(CompletionResult {
        unitary: u,
        gram_defect,
        nullspace,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(k: usize) -> UnitCircleGrid {
        UnitCircleGrid::new(k).unwrap()
    }

    fn one() -> FourierSeries {
        FourierSeries::constant(Complex64::ONE)
    }

    #[test]
    fn truncate_keeps_principal_band() {
        let phi = FourierSeries::new(-2, vec![c(3.0, 0.0), c(1.0, 0.0), c(5.0, 0.0), c(1.0, 0.0)]);
        let t = truncate_tail(&phi, 2);
        assert_eq!(t.series.lo(), -2);
        assert_eq!(t.series.hi(), -1);
        assert_eq!(t.series.coeff(-2), c(3.0, 0.0));
        assert_eq!(t.series.coeff(-1), c(1.0, 0.0));
        assert_eq!(t.dropped_energy, 0.0);
    }

    #[test]
    fn truncate_of_analytic_series_is_zero() {
        let phi = FourierSeries::new(0, vec![c(5.0, 0.0), c(1.0, 0.0)]);
        let t = truncate_tail(&phi, 3);
        assert_eq!(t.series.negative_energy(), 0.0);
        assert_eq!(t.series.energy(), 0.0);
        assert_eq!(t.dropped_energy, 0.0);
    }

    #[test]
    fn truncate_reports_dropped_energy() {
        let phi = FourierSeries::monomial(-3, Complex64::ONE);
        let t = truncate_tail(&phi, 2);
        assert_eq!(t.series.energy(), 0.0);
        assert!((t.dropped_energy - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_system_shape_and_rank() {
        // m = 2, N = 1, one tail c z^-1: two equations, four unknowns,
        // null space of dimension two (rank oracle: the two rows are
        // linearly independent whenever the outer entry is nonzero).
        let phi = FourierSeries::monomial(-1, c(0.4, 0.2));
        let data = LastRowData::new(vec![phi], one(), 1).unwrap();
        let sys = assemble_system(&data);
        assert_eq!(sys.rows(), 2);
        assert_eq!(sys.cols(), 4);
        let svd = sys.matrix().clone().svd(false, false);
        let rank = svd.singular_values.iter().filter(|s| **s > 1e-12).count();
        assert_eq!(rank, 2);
        let (sols, report) = solve_nullspace(&sys).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(report.largest_null < 1e-12 * report.smallest_kept);
    }

    #[test]
    fn zero_tails_admit_constant_solutions() {
        // with zero tails the canonical constant vectors solve the system
        let n = 3;
        let f_plus = FourierSeries::new(0, vec![c(1.0, 0.0), c(0.3, 0.1), c(0.1, -0.2)]);
        for m in 2..=4usize {
            let tails = vec![FourierSeries::zeros(-(n as i64), -1); m - 1];
            let data = LastRowData::new(tails, f_plus.clone(), n).unwrap();
            let sys = assemble_system(&data);
            assert_eq!(sys.rows(), m * n);
            assert_eq!(sys.cols(), m * (n + 1));
            for col_block in 0..m {
                let mut e = CVec::zeros(m * (n + 1));
                e[col_block * (n + 1)] = Complex64::ONE;
                assert!((sys.matrix() * e).norm() < 1e-14, "m={m} block={col_block}");
            }
        }
    }

    #[test]
    fn degree_zero_system_is_empty() {
        let data = LastRowData::new(vec![FourierSeries::zeros(-1, -1)], one(), 0).unwrap();
        let sys = assemble_system(&data);
        assert_eq!(sys.rows(), 0);
        assert_eq!(sys.cols(), 2);
        let (sols, _) = solve_nullspace(&sys).unwrap();
        assert_eq!(sols.len(), 2);
    }

    #[test]
    fn nullspace_dimension_for_random_tails() {
        // random band-limited tails, m = 3, N = 4: the singular-value gap
        // shows a null space of dimension exactly 3
        let n = 4usize;
        let mk_tail = |seed: f64| {
            FourierSeries::new(
                -(n as i64),
                (0..n)
                    .map(|i| {
                        c(
                            0.3 * ((i as f64) + seed).sin(),
                            0.2 * ((i as f64) - seed).cos(),
                        )
                    })
                    .collect(),
            )
        };
        let f_plus = FourierSeries::new(0, vec![c(1.2, 0.0), c(0.2, 0.1), c(0.05, -0.1)]);
        let data = LastRowData::new(vec![mk_tail(0.3), mk_tail(1.7)], f_plus, n).unwrap();
        let sys = assemble_system(&data);
        let svd = sys.matrix().clone().svd(false, false);
        let smax = svd.singular_values[0];
        let rank = svd
            .singular_values
            .iter()
            .filter(|s| **s > 1e-10 * smax)
            .count();
        // full row rank, so the null space has dimension exactly m
        assert_eq!(rank, sys.rows());
        assert_eq!(sys.cols() - rank, data.m());
        let (_, report) = solve_nullspace(&sys).unwrap();
        assert!(report.largest_null <= 1e-10 * report.smallest_kept.max(1.0));
    }

    #[test]
    fn standard_basis_solutions_give_identity() {
        let n = 2;
        let tails = vec![FourierSeries::zeros(-(n as i64), -1)];
        let data = LastRowData::new(tails, one(), n).unwrap();
        let g = grid(32);
        let mut sols = Vec::new();
        for block in 0..2 {
            let mut e = CVec::zeros(2 * (n + 1));
            e[block * (n + 1)] = Complex64::ONE;
            sols.push(e);
        }
        let (u, defect) = orthonormalize_constant_gram(&sols, &data, &g).unwrap();
        assert!(defect < 1e-14);
        for e in u.realize(&g).unwrap() {
            assert!((e - CMat::identity(2, 2)).norm() < 1e-13);
        }
    }

    #[test]
    fn scaling_solutions_does_not_change_result() {
        let phi = FourierSeries::monomial(-1, c(0.3, 0.0));
        let data = LastRowData::new(vec![phi], one(), 1).unwrap();
        let g = grid(64);
        let sys = assemble_system(&data);
        let (sols, _) = solve_nullspace(&sys).unwrap();
        let scaled: Vec<CVec> = sols.iter().map(|v| v * Complex64::new(2.0, 0.0)).collect();
        let (u1, _) = orthonormalize_constant_gram(&sols, &data, &g).unwrap();
        let (u2, _) = orthonormalize_constant_gram(&scaled, &data, &g).unwrap();
        // the Gram normalization absorbs the scaling; any residual column
        // phase is removed by the pin, so compare after pinning with the
        // same origin value
        let f = data.realize(&g).unwrap();
        let pin = |u: UnitaryPolyMatrix| {
            let e = u.realize(&g).unwrap();
            let f0 = f.iter().zip(&e).map(|(a, b)| a * b).sum::<CMat>() / c(64.0, 0.0);
            pin_positive_definite(u, &f0).unwrap()
        };
        let u1 = pin(u1);
        let u2 = pin(u2);
        for (a, b) in u1.stored_coeffs().iter().zip(u2.stored_coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn worked_two_by_two_completion() {
        // m = 2, N = 1, tail 0.3 z^-1, outer entry 1: the classical
        // normalized completion [[1, cbar z], [-c z^-1, 1]] / sqrt(1 + |c|^2)
        let cc = c(0.3, 0.0);
        let phi = FourierSeries::monomial(-1, cc);
        let data = LastRowData::new(vec![phi], one(), 1).unwrap();
        let g = grid(64);
        let out = complete(&data, &g).unwrap();
        assert!(out.residual < 1e-12, "residual {}", out.residual);
        assert!(out.gram_defect < 1e-12);

        let realized = out.unitary.realize(&g).unwrap();
        assert!(linalg::unitarity_defect(&realized) < 1e-10);
        for e in &realized {
            assert!((e.determinant() - Complex64::ONE).norm() < 1e-10);
        }
        let norm = 1.0 / (1.0 + cc.norm_sqr()).sqrt();
        for (k, z) in g.points().enumerate() {
            let want = CMat::from_row_slice(
                2,
                2,
                &[
                    c(norm, 0.0),
                    cc.conj() * z * norm,
                    -cc / z * norm,
                    c(norm, 0.0),
                ],
            );
            assert!((&realized[k] - want).norm() < 1e-10, "sample {k}");
        }
    }

    #[test]
    fn completion_makes_row_analytic() {
        // m = 3, N = 3, modest random tails
        let n = 3usize;
        let tails = vec![
            FourierSeries::new(-3, vec![c(0.05, 0.02), c(-0.08, 0.01), c(0.1, -0.04)]),
            FourierSeries::new(-3, vec![c(0.02, -0.06), c(0.07, 0.03), c(-0.05, 0.05)]),
        ];
        let f_plus = FourierSeries::new(
            0,
            vec![c(1.0, 0.0), c(0.25, 0.1), c(-0.1, 0.05), c(0.02, 0.0)],
        );
        let data = LastRowData::new(tails, f_plus, n).unwrap();
        let g = grid(128);
        let out = complete(&data, &g).unwrap();
        assert!(out.residual < 1e-11, "residual {}", out.residual);
        assert_eq!(out.unitary.degree(), n);
        let realized = out.unitary.realize(&g).unwrap();
        assert!(linalg::unitarity_defect(&realized) < tol::TAU_UNIT);
        for e in &realized {
            assert!((e.determinant() - Complex64::ONE).norm() < tol::TAU_UNIT);
        }
    }

    #[test]
    fn zero_tails_complete_to_identity() {
        let n = 2;
        let f_plus = FourierSeries::new(0, vec![c(2.0, 0.0), c(0.4, 0.2)]);
        let data = LastRowData::new(vec![FourierSeries::zeros(-2, -1); 2], f_plus, n).unwrap();
        let g = grid(64);
        let out = complete(&data, &g).unwrap();
        for e in out.unitary.realize(&g).unwrap() {
            assert!((e - CMat::identity(3, 3)).norm() < 1e-10);
        }
    }

    #[test]
    fn pin_examples() {
        // HPD input: no change
        let h = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)]);
        let u = UnitaryPolyMatrix::identity(2);
        let pinned = pin_positive_definite(u.clone(), &h).unwrap();
        for (a, b) in pinned.stored_coeffs().iter().zip(u.stored_coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
        // negated HPD: w = -I, determinant one in dimension two
        let pinned = pin_positive_definite(UnitaryPolyMatrix::identity(2), &(-&h)).unwrap();
        let w = &pinned.stored_coeffs()[0];
        assert!((w + CMat::identity(2, 2)).norm() < 1e-12);
        // rotation times HPD: w is the transposed rotation
        let th = 0.9f64;
        let rot = CMat::from_row_slice(
            2,
            2,
            &[
                c(th.cos(), 0.0),
                c(-th.sin(), 0.0),
                c(th.sin(), 0.0),
                c(th.cos(), 0.0),
            ],
        );
        let pinned = pin_positive_definite(UnitaryPolyMatrix::identity(2), &(&rot * &h)).unwrap();
        // stored last row transforms conjugated; realized value is rot^T
        let g = grid(4);
        let realized = pinned.realize(&g).unwrap();
        assert!((&realized[0] - rot.transpose()).norm() < 1e-12);
        // singular input is rejected
        let sing =
            CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            pin_positive_definite(UnitaryPolyMatrix::identity(2), &sing),
            Err(Error::PinSingular)
        ));
    }

    #[test]
    fn invalid_row_data_is_rejected() {
        // tail band out of range
        let bad_tail = FourierSeries::monomial(-3, Complex64::ONE);
        assert!(LastRowData::new(vec![bad_tail], one(), 2).is_err());
        // outer entry with nonpositive origin value
        let bad_f = FourierSeries::new(0, vec![c(-1.0, 0.0)]);
        assert!(LastRowData::new(vec![FourierSeries::zeros(-1, -1)], bad_f, 1).is_err());
        // outer entry not starting at zero
        let shifted = FourierSeries::monomial(1, Complex64::ONE);
        assert!(LastRowData::new(vec![FourierSeries::zeros(-1, -1)], shifted, 1).is_err());
    }
}
