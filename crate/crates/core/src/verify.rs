//! Independent checks of the factorization contracts, factor comparison up
//! to a constant unitary, and seeded generation of densities with known
//! factors.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{GridMatrixFunction, MatrixSeries, UnitCircleGrid};
use crate::linalg::{self, CMat};
use crate::outer::outer_defect_samples;
use crate::recursion::FactorizationResult;
use crate::tol;

/// Relative reconstruction residual
/// `max_k |S(z_k) - chi(z_k) chi(z_k)*|_F / max_k |S(z_k)|_F`.
pub fn residual(s: &GridMatrixFunction, chi: &MatrixSeries) -> Result<f64> {
    if chi.r() != s.r() {
        return Err(Error::InvalidInput(format!(
            "factor dimension {} does not match density dimension {}",
            chi.r(),
            s.r()
        )));
    }
    let grid = s.grid();
    let chi_grid = chi.to_grid(&grid)?;
    let scale = s.max_norm().max(f64::MIN_POSITIVE);
    let worst = s
        .samples()
        .iter()
        .zip(chi_grid.samples())
        .map(|(sk, xk)| (sk - xk * xk.adjoint()).norm())
        .fold(0.0, f64::max);
    Ok(worst / scale)
}

/// The constant matrix relating two factors, with its defects.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// Least-squares minimizer of `|chi1 - chi2 u|` over constant matrices.
    pub u: CMat,
    /// `|u u* - I|_F`; near zero when both inputs factor the same density.
    pub unitarity_defect: f64,
    /// Relative L2 distance between `chi1` and `chi2 u` over the grid.
    pub match_defect: f64,
}

/// Find the constant matrix `u` minimizing `|chi1 - chi2 u|` in L2 of the
/// grid and report how unitary it is and how well it matches.
///
/// When both inputs are spectral factors of the same density the minimizer
/// is the constant unitary relating them; the report states defects and
/// never asserts.
pub fn unitary_equivalence(
    chi1: &MatrixSeries,
    chi2: &MatrixSeries,
    grid: &UnitCircleGrid,
) -> Result<EquivalenceReport> {
    if chi1.r() != chi2.r() {
        return Err(Error::InvalidInput(format!(
            "factor dimensions {} and {} do not match",
            chi1.r(),
            chi2.r()
        )));
    }
    let k = grid.len();
    let a = chi1.to_grid(grid)?;
    let b = chi2.to_grid(grid)?;
    let r = chi1.r();
    let mut gram = CMat::zeros(r, r);
    let mut cross = CMat::zeros(r, r);
    for (ak, bk) in a.samples().iter().zip(b.samples()) {
        gram += bk.adjoint() * bk;
        cross += bk.adjoint() * ak;
    }
    gram /= Complex64::new(k as f64, 0.0);
    cross /= Complex64::new(k as f64, 0.0);
    let u = linalg::solve_hpd(&linalg::hermitian_part(&gram), &cross)
        .ok_or(Error::EquivalenceUndetermined)?;

    let unitarity_defect = (&u * u.adjoint() - CMat::identity(r, r)).norm();
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (ak, bk) in a.samples().iter().zip(b.samples()) {
        num += (ak - bk * &u).norm_squared();
        den += ak.norm_squared();
    }
    let match_defect = (num / den.max(f64::MIN_POSITIVE)).sqrt();
    Ok(EquivalenceReport {
        u,
        unitarity_defect,
        match_defect,
    })
}

/// A seeded test density with its known analytic factor.
///
/// The factor is `c (I + margin P)` with `P` a random analytic polynomial
/// normalized to unit sup operator norm on the circle and a Hermitian
/// constant term, so for `margin < 1` the determinant is zero-free on the
/// closed disk (hence outer) and the value at the origin is Hermitian
/// positive definite. The density is its boundary product.
pub fn generate_test_density(
    r: usize,
    degree: usize,
    seed: u64,
    margin: f64,
    grid: &UnitCircleGrid,
) -> Result<(GridMatrixFunction, MatrixSeries)> {
    if r == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if !(0.0..1.0).contains(&margin) {
        return Err(Error::InvalidInput(format!(
            "margin {margin} must lie in [0, 1)"
        )));
    }
    if degree as i64 > grid.max_band() {
        return Err(Error::BandOverflow {
            lo: 0,
            hi: degree as i64,
            k: grid.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c_scale = rng.random_range(0.5..2.0);

    let mut p_coeffs: Vec<CMat> = (0..=degree)
        .map(|_| {
            CMat::from_fn(r, r, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            })
        })
        .collect();
    p_coeffs[0] = linalg::hermitian_part(&p_coeffs[0]);
    let p = MatrixSeries::new(0, p_coeffs);

    // normalize to unit sup operator norm over the grid; the maximum
    // principle then bounds it on the whole closed disk
    let p_grid = p.to_grid(grid)?;
    let sup = p_grid
        .samples()
        .iter()
        .map(linalg::operator_norm)
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let p = p.scale(Complex64::new(1.0 / sup, 0.0));

    let mut chi = p.scale(Complex64::new(margin, 0.0));
    let mut c0 = chi.coeff(0);
    c0 += CMat::identity(r, r);
    let mut coeffs = chi.coeffs().to_vec();
    coeffs[0] = c0;
    chi = MatrixSeries::new(0, coeffs).scale(Complex64::new(c_scale, 0.0));

    let chi_grid = chi.to_grid(grid)?;
    let samples: Vec<CMat> = chi_grid.samples().iter().map(|x| x * x.adjoint()).collect();
    let s = GridMatrixFunction::hermitian(samples)?;
    Ok((s, chi))
}

/// One stage line of the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct StageJson {
    pub m: usize,
    pub n: usize,
    pub residual: f64,
}

/// Aggregated verification report.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub residual: f64,
    #[serde(rename = "negEnergy")]
    pub neg_energy: f64,
    /// Outer defect of the factor determinant; serialized as null when the
    /// determinant vanishes at the origin (never outer).
    #[serde(rename = "outerDefect")]
    pub outer_defect: f64,
    #[serde(rename = "canonicalPin")]
    pub canonical_pin: bool,
    /// Mean of `|log det S(z_k)|`, the integrability diagnostic.
    #[serde(rename = "logDetDiag")]
    pub log_det_diag: f64,
    /// True when some determinant samples were floored before the log.
    #[serde(rename = "logDetFloored")]
    pub log_det_floored: bool,
    pub stages: Vec<StageJson>,
}

/// Evaluate every contract of a factorization result against a density.
pub fn full_report(
    s: &GridMatrixFunction,
    result: &FactorizationResult,
) -> Result<VerificationReport> {
    report_for_factor(s, &result.chi_plus, &result.stages)
}

/// The same report for a bare factor (as loaded from a file), with the
/// defects recomputed from scratch.
pub fn report_for_factor(
    s: &GridMatrixFunction,
    chi: &MatrixSeries,
    stages: &[crate::recursion::StageRecord],
) -> Result<VerificationReport> {
    let grid = s.grid();
    let resid = residual(s, chi)?;
    let neg = chi.negative_energy() / chi.energy().max(f64::MIN_POSITIVE);

    let chi_grid = chi.to_grid(&grid)?;
    let det_samples: Vec<Complex64> = chi_grid.samples().iter().map(|m| m.determinant()).collect();
    let outer = outer_defect_samples(chi.value_at_zero().determinant(), &det_samples);

    let v0 = chi.value_at_zero();
    let hermitian = (&v0 - v0.adjoint()).norm() <= tol::TAU_HERM * v0.norm().max(1.0);
    let canonical_pin = hermitian && linalg::min_eigenvalue(&linalg::hermitian_part(&v0)) > 0.0;

    let dets: Vec<f64> = s.samples().iter().map(|m| m.determinant().norm()).collect();
    let det_max = dets.iter().copied().fold(0.0, f64::max);
    let floor = tol::EPS_FLOOR_REL * det_max.max(f64::MIN_POSITIVE);
    let log_det_floored = dets.iter().any(|d| *d < floor);
    let log_det_diag = if det_max <= 0.0 {
        f64::INFINITY
    } else {
        dets.iter().map(|d| d.max(floor).ln().abs()).sum::<f64>() / dets.len() as f64
    };

    Ok(VerificationReport {
        residual: resid,
        neg_energy: neg,
        outer_defect: outer,
        canonical_pin,
        log_det_diag,
        log_det_floored,
        stages: stages
            .iter()
            .map(|r| StageJson {
                m: r.m,
                n: r.n,
                residual: r.residual,
            })
            .collect(),
    })
}
