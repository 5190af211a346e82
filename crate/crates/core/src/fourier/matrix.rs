use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{FourierSeries, GridMatrixFunction, UnitCircleGrid};
use crate::error::{Error, Result};

/// An r x r matrix-function stored as Laurent coefficient matrices
/// `C_lo .. C_hi`, all entries sharing the common band.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeries {
    lo: i64,
    coeffs: Vec<DMatrix<Complex64>>,
}

impl MatrixSeries {
    pub fn new(lo: i64, coeffs: Vec<DMatrix<Complex64>>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a matrix series stores at least one coefficient"
        );
        let r = coeffs[0].nrows();
        assert!(r > 0, "dimension must be positive");
        for c in &coeffs {
            assert_eq!(
                (c.nrows(), c.ncols()),
                (r, r),
                "coefficients must be square and uniform"
            );
        }
        Self { lo, coeffs }
    }

    pub fn constant(matrix: DMatrix<Complex64>) -> Self {
        Self::new(0, vec![matrix])
    }

    pub fn identity(r: usize) -> Self {
        Self::constant(DMatrix::identity(r, r))
    }

    pub fn zeros(r: usize, lo: i64, hi: i64) -> Self {
        assert!(hi >= lo);
        Self::new(lo, vec![DMatrix::zeros(r, r); (hi - lo + 1) as usize])
    }

    /// Assemble from per-entry series (row-major), padding all entries to the
    /// union band.
    pub fn from_entries(r: usize, entries: &[FourierSeries]) -> Result<Self> {
        if entries.len() != r * r {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for an {r}x{r} series, got {}",
                r * r,
                entries.len()
            )));
        }
        let lo = entries.iter().map(|e| e.lo()).min().expect("nonempty");
        let hi = entries.iter().map(|e| e.hi()).max().expect("nonempty");
        let mut coeffs = vec![DMatrix::zeros(r, r); (hi - lo + 1) as usize];
        for i in 0..r {
            for j in 0..r {
                for (n, c) in entries[i * r + j].iter() {
                    coeffs[(n - lo) as usize][(i, j)] = c;
                }
            }
        }
        Ok(Self::new(lo, coeffs))
    }

    pub fn r(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn is_analytic_band(&self) -> bool {
        self.lo >= 0
    }

    /// Coefficient matrix `C_n`; zeros outside the stored band.
    pub fn coeff(&self, n: i64) -> DMatrix<Complex64> {
        if n < self.lo || n > self.hi() {
            DMatrix::zeros(self.r(), self.r())
        } else {
            self.coeffs[(n - self.lo) as usize].clone()
        }
    }

    pub fn coeffs(&self) -> &[DMatrix<Complex64>] {
        &self.coeffs
    }

    /// Value at the origin of an analytic series: the index-0 coefficient.
    pub fn value_at_zero(&self) -> DMatrix<Complex64> {
        self.coeff(0)
    }

    /// One scalar entry as a series on the common band.
    pub fn entry(&self, i: usize, j: usize) -> FourierSeries {
        FourierSeries::new(self.lo, self.coeffs.iter().map(|c| c[(i, j)]).collect())
    }

    /// Upper-left m x m submatrix on the same band.
    pub fn submatrix(&self, m: usize) -> Self {
        assert!(m >= 1 && m <= self.r());
        Self::new(
            self.lo,
            self.coeffs
                .iter()
                .map(|c| c.view((0, 0), (m, m)).into_owned())
                .collect(),
        )
    }

    /// sqrt of the summed squared moduli of all coefficients at negative
    /// indices, over all entries.
    pub fn negative_energy(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| self.lo + (*i as i64) < 0)
            .map(|(_, m)| m.norm_squared())
            .sum::<f64>()
            .max(0.0)
            .sqrt()
    }

    /// l2 norm of all stored coefficients over all entries.
    pub fn energy(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Transform grid samples of every entry to coefficients on `[lo, hi]`.
    pub fn from_grid(f: &GridMatrixFunction, lo: i64, hi: i64) -> Result<Self> {
        let k = f.len();
        if hi < lo || (hi - lo + 1) as usize > k {
            return Err(Error::BandOverflow { lo, hi, k });
        }
        let r = f.r();
        let mut coeffs = vec![DMatrix::zeros(r, r); (hi - lo + 1) as usize];
        for i in 0..r {
            for j in 0..r {
                let entry = FourierSeries::from_samples(&f.entry_samples(i, j), lo, hi)?;
                for (n, c) in entry.iter() {
                    coeffs[(n - lo) as usize][(i, j)] = c;
                }
            }
        }
        Ok(Self::new(lo, coeffs))
    }

    /// Evaluate every entry on the grid.
    pub fn to_grid(&self, grid: &UnitCircleGrid) -> Result<GridMatrixFunction> {
        let k = grid.len();
        if self.coeffs.len() > k {
            return Err(Error::BandOverflow {
                lo: self.lo,
                hi: self.hi(),
                k,
            });
        }
        let r = self.r();
        let mut samples = vec![DMatrix::zeros(r, r); k];
        for i in 0..r {
            for j in 0..r {
                let vals = self.entry(i, j).to_samples(grid)?;
                for (s, v) in samples.iter_mut().zip(vals) {
                    s[(i, j)] = v;
                }
            }
        }
        GridMatrixFunction::new(samples)
    }

    /// Evaluate at an arbitrary complex point.
    pub fn eval(&self, z: Complex64) -> DMatrix<Complex64> {
        let r = self.r();
        let mut acc = DMatrix::<Complex64>::zeros(r, r);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        if self.lo != 0 {
            acc *= z.powi(self.lo as i32);
        }
        acc
    }

    /// Right-multiply every coefficient by a constant matrix.
    pub fn right_mul_const(&self, w: &DMatrix<Complex64>) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|c| c * w).collect())
    }

    /// Left-multiply every coefficient by a constant matrix.
    pub fn left_mul_const(&self, w: &DMatrix<Complex64>) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|c| w * c).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Restriction to `[lo, hi]`, zero-filled outside the stored band.
    pub fn slice_band(&self, lo: i64, hi: i64) -> Self {
        assert!(hi >= lo);
        Self::new(lo, (lo..=hi).map(|n| self.coeff(n)).collect())
    }

    /// The analytic part: coefficients at indices >= 0.
    pub fn analytic_part(&self) -> Self {
        let hi = self.hi().max(0);
        self.slice_band(0, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn value_at_zero_is_index_zero_coefficient() {
        let c0 =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(4.0, 0.0)]);
        let c1 = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0); 4]);
        let m = MatrixSeries::new(0, vec![c0.clone(), c1]);
        assert_eq!(m.value_at_zero(), c0);
    }

    #[test]
    fn from_entries_pads_to_common_band() {
        let entries = vec![
            FourierSeries::constant(c(1.0, 0.0)),
            FourierSeries::monomial(1, c(2.0, 0.0)),
            FourierSeries::monomial(-1, c(3.0, 0.0)),
            FourierSeries::constant(c(4.0, 0.0)),
        ];
        let m = MatrixSeries::from_entries(2, &entries).unwrap();
        assert_eq!(m.lo(), -1);
        assert_eq!(m.hi(), 1);
        assert_eq!(m.entry(0, 1).coeff(1), c(2.0, 0.0));
        assert_eq!(m.entry(1, 0).coeff(-1), c(3.0, 0.0));
        assert_eq!(m.entry(1, 1).coeff(0), c(4.0, 0.0));
        assert_eq!(m.entry(0, 0).coeff(1), Complex64::ZERO);
    }

    #[test]
    fn grid_round_trip_recovers_coefficients() {
        let grid = UnitCircleGrid::new(16).unwrap();
        let c0 =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.5), c(0.0, 0.0), c(2.0, -1.0), c(0.5, 0.0)]);
        let c1 = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.25, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(-0.5, 0.25)],
        );
        let m = MatrixSeries::new(-1, vec![c0, c1]);
        let f = m.to_grid(&grid).unwrap();
        let back = MatrixSeries::from_grid(&f, -1, 0).unwrap();
        for n in -1..=0 {
            assert!((m.coeff(n) - back.coeff(n)).norm() < 1e-13);
        }
    }

    #[test]
    fn submatrix_takes_upper_left_block() {
        let c0 = DMatrix::from_fn(3, 3, |i, j| c((3 * i + j) as f64, 0.0));
        let m = MatrixSeries::new(0, vec![c0]);
        let sub = m.submatrix(2);
        assert_eq!(sub.r(), 2);
        assert_eq!(sub.coeff(0)[(1, 1)], c(4.0, 0.0));
    }

    #[test]
    fn negative_energy_counts_negative_indices_only() {
        let z = DMatrix::from_element(1, 1, c(3.0, 0.0));
        let p = DMatrix::from_element(1, 1, c(4.0, 0.0));
        let m = MatrixSeries::new(-1, vec![z, p]);
        assert!((m.negative_energy() - 3.0).abs() < 1e-15);
    }
}
