use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{MatrixSeries, UnitCircleGrid};
use crate::error::{Error, Result};
use crate::tol;

/// K samples of an r x r matrix-function on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMatrixFunction {
    r: usize,
    samples: Vec<DMatrix<Complex64>>,
    hermitian: bool,
}

impl GridMatrixFunction {
    /// Wrap raw samples. The sample count must be a valid grid size and every
    /// sample must be a finite r x r matrix.
    pub fn new(samples: Vec<DMatrix<Complex64>>) -> Result<Self> {
        UnitCircleGrid::new(samples.len())?;
        let r = samples[0].nrows();
        for (k, s) in samples.iter().enumerate() {
            if s.nrows() != r || s.ncols() != r {
                return Err(Error::InvalidInput(format!(
                    "sample {k} is {}x{}, expected {r}x{r}",
                    s.nrows(),
                    s.ncols()
                )));
            }
            if s.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "sample {k} has non-finite entries"
                )));
            }
        }
        Ok(Self {
            r,
            samples,
            hermitian: false,
        })
    }

    pub fn from_fn(
        grid: &UnitCircleGrid,
        f: impl Fn(Complex64) -> DMatrix<Complex64>,
    ) -> Result<Self> {
        Self::new(grid.points().map(f).collect())
    }

    /// Wrap samples and assert Hermitian symmetry within [`tol::TAU_HERM`]
    /// relative to the largest sample norm.
    pub fn hermitian(samples: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let mut f = Self::new(samples)?;
        f.require_hermitian()?;
        f.hermitian = true;
        Ok(f)
    }

    /// True if the Hermitian assertion was made at construction.
    pub fn is_hermitian_asserted(&self) -> bool {
        self.hermitian
    }

    pub fn r(&self) -> usize {
        self.r
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

    pub fn sample(&self, k: usize) -> &DMatrix<Complex64> {
        &self.samples[k]
    }

    pub fn samples(&self) -> &[DMatrix<Complex64>] {
        &self.samples
    }

    /// Largest Frobenius norm over the samples.
    pub fn max_norm(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// Check every sample is Hermitian within tolerance; reports the worst
    /// offending sample index otherwise.
    pub fn require_hermitian(&self) -> Result<()> {
        let scale = self.max_norm().max(f64::MIN_POSITIVE);
        let mut worst = (0usize, 0.0f64);
        for (k, s) in self.samples.iter().enumerate() {
            let defect = (s - s.adjoint()).norm() / scale;
            if defect > worst.1 {
                worst = (k, defect);
            }
        }
        if worst.1 > tol::TAU_HERM {
            return Err(Error::NotHermitian {
                sample: worst.0,
                defect: worst.1,
            });
        }
        Ok(())
    }

    /// One scalar entry as a sample stream.
    pub fn entry_samples(&self, i: usize, j: usize) -> Vec<Complex64> {
        self.samples.iter().map(|s| s[(i, j)]).collect()
    }

    /// Fourier coefficients of every entry on the band `[lo, hi]`.
    pub fn to_series(&self, lo: i64, hi: i64) -> Result<MatrixSeries> {
        MatrixSeries::from_grid(self, lo, hi)
    }
}
