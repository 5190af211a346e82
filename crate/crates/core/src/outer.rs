//! Scalar outer factorization: the analytic function with prescribed
//! nonnegative boundary modulus and positive value at the origin.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, UnitCircleGrid};
use crate::tol;

/// An outer analytic function built from its boundary modulus.
///
/// `samples` is the exact grid realization `exp(g(z_k))` of the analytic
/// completion of the log-modulus; its modulus reproduces the input samples to
/// machine precision. `coeffs` is the series truncated to the requested band,
/// which is where the usual truncation error lives.
#[derive(Debug, Clone)]
pub struct OuterFactor {
    coeffs: FourierSeries,
    samples: Vec<Complex64>,
    value_at_zero: Complex64,
}

impl OuterFactor {
    /// Truncated analytic coefficients, `lo = 0`.
    pub fn coeffs(&self) -> &FourierSeries {
        &self.coeffs
    }

    /// Exact boundary realization on the construction grid.
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// The constant coefficient; real positive up to roundoff.
    pub fn value_at_zero(&self) -> Complex64 {
        self.value_at_zero
    }
}

/// Construct the outer function with boundary modulus `modulus`, truncated to
/// degree `band_hi`.
///
/// The log-modulus is transformed, its Fourier series is completed to the
/// analytic function `g = l_0 + 2 sum_{n>=1} l_n z^n`, and the factor is
/// `exp(g)` realized on the grid and re-transformed. On the grid
/// `Re g(z_k) = log modulus[k]` exactly, so `|f(z_k)| = modulus[k]` to
/// machine precision. Samples below `EPS_FLOOR_REL * max` are floored before
/// the log; an all-zero modulus is rejected.
pub fn outer_factor(modulus: &[f64], grid: &UnitCircleGrid, band_hi: i64) -> Result<OuterFactor> {
    let k = grid.len();
    if modulus.len() != k {
        return Err(Error::InvalidInput(format!(
            "modulus has {} samples, grid has {k}",
            modulus.len()
        )));
    }
    if band_hi < 0 || band_hi > grid.max_band() {
        return Err(Error::BandOverflow {
            lo: 0,
            hi: band_hi,
            k,
        });
    }
    if let Some(bad) = modulus.iter().position(|m| !m.is_finite() || *m < 0.0) {
        return Err(Error::InvalidInput(format!(
            "modulus sample {bad} is {}, expected finite and nonnegative",
            modulus[bad]
        )));
    }
    let max = modulus.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::DegenerateDensity(
            "modulus is identically zero".into(),
        ));
    }

    let floor = tol::EPS_FLOOR_REL * max;
    let log_samples: Vec<Complex64> = modulus
        .iter()
        .map(|&m| Complex64::new(m.max(floor).ln(), 0.0))
        .collect();
    let log_coeffs = crate::fourier::samples_to_spectrum(&log_samples);

    // Analytic completion: keep the mean, double the positive half-spectrum,
    // keep the shared K/2 term. The real part on the grid is unchanged.
    let mut completed = vec![Complex64::ZERO; k];
    completed[0] = log_coeffs[0];
    for (n, c) in completed.iter_mut().enumerate().take(k / 2).skip(1) {
        *c = 2.0 * log_coeffs[n];
    }
    completed[k / 2] = log_coeffs[k / 2];
    let g = crate::fourier::spectrum_to_samples(completed);

    let samples: Vec<Complex64> = g.iter().map(|v| v.exp()).collect();
    let coeffs = FourierSeries::from_samples(&samples, 0, band_hi)?;
    let value_at_zero = coeffs.coeff(0);
    Ok(OuterFactor {
        coeffs,
        samples,
        value_at_zero,
    })
}

/// Distance of an analytic series from being outer:
/// `| log|f(0)| - mean_k log|f(z_k)| |`.
///
/// Returns `f64::INFINITY` when `f(0) = 0` (a zero at the origin is never
/// outer). By the discrete Jensen identity the defect of an outer polynomial
/// decays super-exponentially in the grid size.
pub fn outer_defect(f: &FourierSeries, grid: &UnitCircleGrid) -> f64 {
    let at_zero = if f.lo() > 0 {
        Complex64::ZERO
    } else {
        f.coeff(0)
    };
    let samples = match f.to_samples(grid) {
        Ok(s) => s,
        Err(_) => return f64::INFINITY,
    };
    outer_defect_samples(at_zero, &samples)
}

/// The same defect from an origin value and boundary samples directly,
/// avoiding any series truncation.
pub fn outer_defect_samples(at_zero: Complex64, boundary: &[Complex64]) -> f64 {
    if at_zero.norm() == 0.0 {
        return f64::INFINITY;
    }
    let mean_log: f64 = boundary.iter().map(|s| s.norm().ln()).sum::<f64>() / boundary.len() as f64;
    let defect = (at_zero.norm().ln() - mean_log).abs();
    if defect.is_nan() {
        f64::INFINITY
    } else {
        defect
    }
}
