use num_complex::Complex64;

use super::{samples_to_spectrum, spectrum_to_samples, wrap_index, UnitCircleGrid};
use crate::error::{Error, Result};

/// A finite band of Laurent coefficients `c_lo .. c_hi` of a function on the
/// unit circle.
///
/// A series with `lo >= 0` is analytic on its stored band; one with
/// `lo >= -N` models a function whose coefficients vanish below `-N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    lo: i64,
    coeffs: Vec<Complex64>,
}

impl FourierSeries {
    /// Band `lo .. lo + coeffs.len() - 1`. Panics on an empty coefficient list.
    pub fn new(lo: i64, coeffs: Vec<Complex64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series stores at least one coefficient"
        );
        Self { lo, coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    /// The single term `c z^n`.
    pub fn monomial(n: i64, c: Complex64) -> Self {
        Self::new(n, vec![c])
    }

    /// All-zero series on the given band.
    pub fn zeros(lo: i64, hi: i64) -> Self {
        assert!(hi >= lo);
        Self::new(lo, vec![Complex64::ZERO; (hi - lo + 1) as usize])
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficient `c_n`; zero outside the stored band.
    pub fn coeff(&self, n: i64) -> Complex64 {
        if n < self.lo || n > self.hi() {
            Complex64::ZERO
        } else {
            self.coeffs[(n - self.lo) as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `(index, coefficient)` pairs over the stored band.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.lo + i as i64, c))
    }

    /// True when the stored band starts at a nonnegative index.
    pub fn is_analytic_band(&self) -> bool {
        self.lo >= 0
    }

    /// Discrete Fourier coefficients of `samples` on the band `[lo, hi]`.
    ///
    /// Exact for trigonometric polynomials whose band fits the grid.
    pub fn from_samples(samples: &[Complex64], lo: i64, hi: i64) -> Result<Self> {
        let k = samples.len();
        if hi < lo || (hi - lo + 1) as usize > k {
            return Err(Error::BandOverflow { lo, hi, k });
        }
        let spectrum = samples_to_spectrum(samples);
        let coeffs = (lo..=hi).map(|n| spectrum[wrap_index(n, k)]).collect();
        Ok(Self::new(lo, coeffs))
    }

    /// Evaluate on the grid: `f(z_k) = sum_n c_n z_k^n`.
    pub fn to_samples(&self, grid: &UnitCircleGrid) -> Result<Vec<Complex64>> {
        let k = grid.len();
        if self.coeffs.len() > k {
            return Err(Error::BandOverflow {
                lo: self.lo,
                hi: self.hi(),
                k,
            });
        }
        let mut spectrum = vec![Complex64::ZERO; k];
        for (n, c) in self.iter() {
            spectrum[wrap_index(n, k)] += c;
        }
        Ok(spectrum_to_samples(spectrum))
    }

    /// Exact coefficient convolution; band `[a.lo + b.lo, a.hi + b.hi]`.
    pub fn multiply(&self, other: &Self) -> Self {
        let lo = self.lo + other.lo;
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![Complex64::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(lo, out)
    }

    /// The boundary conjugate `f(z) -> conj(f(z))`: coefficient `n` of the
    /// result is the conjugate of coefficient `-n` of the input.
    pub fn conjugate(&self) -> Self {
        let hi = self.hi();
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        Self::new(-hi, coeffs)
    }

    /// l2 norm of the coefficients at negative indices; zero iff the series
    /// is analytic on its stored band.
    pub fn negative_energy(&self) -> f64 {
        self.iter()
            .filter(|(n, _)| *n < 0)
            .map(|(_, c)| c.norm_sqr())
            .sum::<f64>()
            .max(0.0)
            .sqrt()
    }

    /// l2 norm of all stored coefficients.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut out = Self::zeros(lo, hi);
        for (n, c) in self.iter() {
            out.coeffs[(n - lo) as usize] += c;
        }
        for (n, c) in other.iter() {
            out.coeffs[(n - lo) as usize] += c;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Restriction to `[lo, hi]`, zero-filled where the input has no data.
    pub fn slice_band(&self, lo: i64, hi: i64) -> Self {
        assert!(hi >= lo);
        Self::new(lo, (lo..=hi).map(|n| self.coeff(n)).collect())
    }

    /// Same coefficients on a widened band.
    pub fn pad_to(&self, lo: i64, hi: i64) -> Self {
        assert!(lo <= self.lo && hi >= self.hi());
        self.slice_band(lo, hi)
    }

    /// Evaluate at an arbitrary complex point (Horner over the band).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        if self.lo == 0 {
            acc
        } else {
            acc * z.powi(self.lo as i32)
        }
    }
}
