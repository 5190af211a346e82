use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform sampling grid `z_k = exp(2 pi i k / K)` on the unit circle.
///
/// K is a power of two so transforms stay exact and fast.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitCircleGrid {
    k: usize,
}

impl UnitCircleGrid {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 || !k.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "grid size {k} must be a power of two, at least 2"
            )));
        }
        Ok(Self { k })
    }

    /// Number of samples K.
    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Angle of sample `idx`.
    pub fn angle(&self, idx: usize) -> f64 {
        TAU * idx as f64 / self.k as f64
    }

    /// The point `z_idx` on the circle.
    pub fn point(&self, idx: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(idx))
    }

    /// All K points in order.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.k).map(|i| self.point(i))
    }

    /// Largest index representable without aliasing, `K/2 - 1`.
    pub fn max_band(&self) -> i64 {
        (self.k / 2 - 1) as i64
    }
}
