//! Functions on the unit circle as grid samples and Laurent coefficient bands.
//!
//! Two dual representations are used throughout: K uniform samples
//! `f(z_k)`, `z_k = exp(2 pi i k / K)`, and a finite band of Laurent
//! coefficients `c_lo .. c_hi`. Transforms between them are exact FFTs for
//! band-limited data; bands are always explicit and operations that would
//! alias return [`Error::BandOverflow`](crate::Error::BandOverflow).

mod grid;
mod grid_fn;
mod matrix;
mod series;

pub use grid::UnitCircleGrid;
pub use grid_fn::GridMatrixFunction;
pub use matrix::MatrixSeries;
pub use series::FourierSeries;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Forward transform: samples to the length-K array of Fourier coefficients,
/// `c_n = (1/K) sum_k f(z_k) z_k^{-n}` stored at index `n mod K`.
pub(crate) fn samples_to_spectrum(samples: &[Complex64]) -> Vec<Complex64> {
    let k = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(k).process(&mut buf);
    let scale = 1.0 / k as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Inverse transform: coefficient array (index `n mod K`) to samples.
pub(crate) fn spectrum_to_samples(mut spectrum: Vec<Complex64>) -> Vec<Complex64> {
    let k = spectrum.len();
    FftPlanner::new().plan_fft_inverse(k).process(&mut spectrum);
    spectrum
}

/// Index of coefficient `n` in a length-`k` spectrum.
pub(crate) fn wrap_index(n: i64, k: usize) -> usize {
    n.rem_euclid(k as i64) as usize
}
