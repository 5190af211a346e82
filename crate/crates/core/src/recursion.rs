//! The factorization pipeline: triangular start, one polynomial unitary
//! completion per leading principal block, canonical normalization.

use std::path::PathBuf;

use num_complex::Complex64;

use crate::completion::{assemble_system, complete, truncate_tail, LastRowData, UnitaryPolyMatrix};
use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, GridMatrixFunction, MatrixSeries, UnitCircleGrid};
use crate::linalg::{self, CMat};
use crate::outer::{outer_defect_samples, outer_factor};
use crate::tol;
use crate::triangular::{diagonal_outer_correction, pointwise_lower_cholesky};

/// Run-time accuracy targets and truncation policy.
#[derive(Debug, Clone)]
pub struct FactorConfig {
    /// Cap on the total reconstruction residual reported to callers.
    pub tol_total: f64,
    /// Per-stage cap on relative non-analytic energy; drives N refinement.
    pub tol_analytic: f64,
    /// Starting truncation order; measured from the tails when `None`.
    pub n0: Option<usize>,
    /// Cap on the truncation order; `K / 4` when `None`.
    pub n_max: Option<usize>,
    /// Right-multiply the factor into canonical form (value at origin
    /// Hermitian positive definite).
    pub canonicalize: bool,
    /// Debug: write each stage's completion system matrix as JSON into this
    /// directory.
    pub dump_systems: Option<PathBuf>,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            tol_total: tol::TAU_TOTAL,
            tol_analytic: tol::TAU_ANALYTIC,
            n0: None,
            n_max: None,
            canonicalize: true,
            dump_systems: None,
        }
    }
}

/// What one stage did.
#[derive(Debug, Clone)]
pub struct StageRecord {
    /// Block dimension completed.
    pub m: usize,
    /// Truncation order that met the tolerance.
    pub n: usize,
    /// Relative non-analytic energy of the completed block.
    pub residual: f64,
    /// Tail energy dropped below `-N` by the truncation.
    pub truncation_energy: f64,
    /// Gram constancy defect of the completion, relative.
    pub gram_defect: f64,
    /// Non-analytic energy of the completed row matrix itself.
    pub completion_residual: f64,
}

/// The current matrix of the recursion together with the stage cursor.
#[derive(Debug, Clone)]
pub struct StageState {
    m: usize,
    n: usize,
    samples: Vec<CMat>,
    diag_outer: Vec<FourierSeries>,
    tol_analytic: f64,
    records: Vec<StageRecord>,
    dump_dir: Option<PathBuf>,
}

impl StageState {
    /// Stage about to run (the dimension of the block to complete).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Current truncation order.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    /// Grid realization of the current matrix.
    pub fn samples(&self) -> &[CMat] {
        &self.samples
    }

    pub fn records(&self) -> &[StageRecord] {
        &self.records
    }

    fn r(&self) -> usize {
        self.samples[0].nrows()
    }
}

/// Embed an m x m completion into dimension r as `diag(U, I_{r-m})`,
/// realized as a Laurent series on `[-N, N]`.
pub fn embed_block(u: &UnitaryPolyMatrix, r: usize) -> MatrixSeries {
    let m = u.m();
    assert!(m <= r, "block dimension exceeds target dimension");
    let inner = u.realized_series();
    if m == r {
        return inner;
    }
    let mut coeffs: Vec<CMat> = inner
        .coeffs()
        .iter()
        .map(|c| {
            let mut big = CMat::zeros(r, r);
            big.view_mut((0, 0), (m, m)).copy_from(c);
            big
        })
        .collect();
    let zero_idx = (-inner.lo()) as usize;
    for j in m..r {
        coeffs[zero_idx][(j, j)] = Complex64::ONE;
    }
    MatrixSeries::new(inner.lo(), coeffs)
}

/// Principal parts (full resolvable band) of the first `m - 1` entries of
/// row `m` of the current matrix.
fn row_principal_parts(
    samples: &[CMat],
    m: usize,
    grid: &UnitCircleGrid,
) -> Result<Vec<FourierSeries>> {
    let band = grid.max_band();
    (0..m - 1)
        .map(|j| {
            let stream: Vec<Complex64> = samples.iter().map(|s| s[(m - 1, j)]).collect();
            FourierSeries::from_samples(&stream, -band, -1)
        })
        .collect()
}

/// Relative non-analytic energy of the upper-left m x m block.
fn block_negative_energy(samples: &[CMat], m: usize, grid: &UnitCircleGrid) -> Result<f64> {
    let band = grid.max_band();
    let block: Vec<CMat> = samples
        .iter()
        .map(|s| s.view((0, 0), (m, m)).into_owned())
        .collect();
    let series = MatrixSeries::from_grid(&GridMatrixFunction::new(block)?, -band, band)?;
    Ok(series.negative_energy() / series.energy().max(f64::MIN_POSITIVE))
}

/// Execute one stage at the state's truncation order: complete the last row
/// of the leading m x m block and right-multiply the first m columns by the
/// completion.
///
/// Fails with [`Error::StageResidual`] when the completed block keeps more
/// relative non-analytic energy than the state's tolerance; the driver
/// reacts by doubling N.
pub fn run_stage(state: &StageState, grid: &UnitCircleGrid) -> Result<StageState> {
    let m = state.m;
    let r = state.r();
    let n = state.n;

    let full_tails = row_principal_parts(&state.samples, m, grid)?;
    let mut truncation_energy = 0.0f64;
    let tails: Vec<FourierSeries> = full_tails
        .iter()
        .map(|t| {
            let tt = truncate_tail(t, n);
            truncation_energy = truncation_energy.hypot(tt.dropped_energy);
            tt.series
        })
        .collect();
    let f_plus = state.diag_outer[m - 1].clone();
    let data = LastRowData::new(tails, f_plus, n)?;
    if let Some(dir) = &state.dump_dir {
        let path = dir.join(format!("system_m{m}_n{n}.json"));
        let text = assemble_system(&data).to_debug_json().to_string();
        std::fs::write(&path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    let out = complete(&data, grid)?;

    let u_samples = out.unitary.realize(grid)?;
    let samples: Vec<CMat> = state
        .samples
        .iter()
        .zip(&u_samples)
        .map(|(s, u)| {
            let mut next = s.clone();
            let mixed = s.view((0, 0), (r, m)).into_owned() * u;
            next.view_mut((0, 0), (r, m)).copy_from(&mixed);
            next
        })
        .collect();

    let residual = block_negative_energy(&samples, m, grid)?;
    if residual > state.tol_analytic {
        return Err(Error::StageResidual {
            stage: m,
            n,
            residual,
        });
    }

    let mut records = state.records.clone();
    records.push(StageRecord {
        m,
        n,
        residual,
        truncation_energy,
        gram_defect: out.gram_defect,
        completion_residual: out.residual,
    });
    Ok(StageState {
        m: m + 1,
        n,
        samples,
        diag_outer: state.diag_outer.clone(),
        tol_analytic: state.tol_analytic,
        records,
        dump_dir: state.dump_dir.clone(),
    })
}

/// Smallest order L such that the tail energy below `-L` is at most
/// `cutoff` times the whole tail energy.
fn measured_tail_order(tails: &[FourierSeries], cutoff: f64) -> usize {
    let mut order = 0usize;
    for t in tails {
        let total: f64 = t
            .iter()
            .filter(|(n, _)| *n < 0)
            .map(|(_, c)| c.norm_sqr())
            .sum();
        if total <= 0.0 {
            continue;
        }
        let mut below = total;
        let mut l = 0usize;
        // grow l until everything below -l is negligible
        let mut indexed: Vec<(i64, f64)> = t
            .iter()
            .filter(|(n, _)| *n < 0)
            .map(|(n, c)| (n, c.norm_sqr()))
            .collect();
        indexed.sort_by_key(|(n, _)| -n);
        for (idx, e) in indexed {
            if below <= cutoff * total {
                break;
            }
            l = (-idx) as usize;
            below -= e;
        }
        order = order.max(l);
    }
    order
}

/// The result of a factorization: the analytic factor plus the measured
/// defects of every contract it is supposed to satisfy.
#[derive(Debug, Clone)]
pub struct FactorizationResult {
    /// The spectral factor, analytic band `[0, K/2 - 1]`.
    pub chi_plus: MatrixSeries,
    /// Relative reconstruction residual `max_k |S - chi chi*| / max_k |S|`.
    pub residual: f64,
    /// Relative non-analytic energy left before the analytic truncation.
    pub neg_energy: f64,
    /// Outer defect of `det chi`.
    pub outer_defect: f64,
    /// Per-stage orders and residuals.
    pub stages: Vec<StageRecord>,
    /// `chi(0)`, Hermitian positive definite for the canonical factor.
    pub value_at_zero: CMat,
    /// Samples that needed a diagonal shift in the triangular stage.
    pub regularized_samples: usize,
}

/// Right-multiply an analytic factor by the constant unitary that makes its
/// value at the origin Hermitian positive definite.
///
/// Uniqueness of spectral factorization up to a constant unitary makes this
/// a well-defined normal form; the operation is idempotent and two factors
/// of the same density normalize to the same result.
pub fn canonical_normalize(chi: &MatrixSeries) -> Result<MatrixSeries> {
    let q = linalg::polar_unitary(&chi.value_at_zero()).ok_or(Error::CannotNormalize)?;
    Ok(chi.right_mul_const(&q.adjoint()))
}

/// Compute the canonical spectral factor of a Hermitian positive definite
/// density sampled on the circle.
pub fn factorize(s: &GridMatrixFunction, config: &FactorConfig) -> Result<FactorizationResult> {
    s.require_hermitian()?;
    let grid = s.grid();
    let k = grid.len();
    let band = grid.max_band();
    let r = s.r();

    if r == 1 {
        return factorize_scalar(s, config);
    }

    let chol = pointwise_lower_cholesky(s)?;
    if (chol.regularized_samples() as f64) > tol::DEGENERATE_SAMPLE_FRACTION * k as f64 {
        return Err(Error::DegenerateDensity(format!(
            "density is singular at {} of {k} samples; the logarithm of its \
             determinant is not integrable",
            chol.regularized_samples()
        )));
    }
    let start = diagonal_outer_correction(&chol, band)?;

    let n_max = config.n_max.unwrap_or(k / 4).max(1);
    let mut state = StageState {
        m: 2,
        n: 1,
        samples: start.samples().to_vec(),
        diag_outer: start
            .diag_outer()
            .iter()
            .map(|o| o.coeffs().clone())
            .collect(),
        tol_analytic: config.tol_analytic,
        records: Vec::new(),
        dump_dir: config.dump_systems.clone(),
    };

    for m in 2..=r {
        debug_assert_eq!(state.m(), m);
        let tails = row_principal_parts(state.samples(), m, &grid)?;
        let measured = measured_tail_order(&tails, 1e-12);
        let mut n = config.n0.unwrap_or_else(|| measured.max(4)).clamp(1, n_max);
        loop {
            match run_stage(&state.clone().with_n(n), &grid) {
                Ok(next) => {
                    state = next;
                    break;
                }
                Err(Error::StageResidual { residual, .. }) if n < n_max => {
                    n = (2 * n).min(n_max);
                    let _ = residual;
                }
                Err(Error::StageResidual { stage, n, residual }) => {
                    return Err(Error::RefinementExhausted { stage, n, residual });
                }
                Err(e) => return Err(e),
            }
        }
    }

    let full = MatrixSeries::from_grid(
        &GridMatrixFunction::new(state.samples().to_vec())?,
        -band,
        band,
    )?;
    let neg_energy = full.negative_energy() / full.energy().max(f64::MIN_POSITIVE);
    let chi_raw = full.analytic_part();
    let chi = if config.canonicalize {
        canonical_normalize(&chi_raw)?
    } else {
        chi_raw
    };

    finish(
        s,
        chi,
        neg_energy,
        state.records,
        chol.regularized_samples(),
    )
}

fn factorize_scalar(s: &GridMatrixFunction, config: &FactorConfig) -> Result<FactorizationResult> {
    let grid = s.grid();
    let scale = s.max_norm();
    if scale <= 0.0 {
        return Err(Error::DegenerateDensity(
            "density is identically zero".into(),
        ));
    }
    let mut modulus = Vec::with_capacity(s.len());
    for kk in 0..s.len() {
        let v = s.sample(kk)[(0, 0)].re;
        if v < -tol::TAU_PSD * scale {
            return Err(Error::NotPositiveSemidefinite {
                sample: kk,
                eigenvalue: v,
            });
        }
        modulus.push(v.max(0.0).sqrt());
    }
    let of = outer_factor(&modulus, &grid, grid.max_band())?;
    let chi_raw = MatrixSeries::new(
        0,
        of.coeffs()
            .coeffs()
            .iter()
            .map(|c| CMat::from_element(1, 1, *c))
            .collect(),
    );
    let chi = if config.canonicalize {
        canonical_normalize(&chi_raw)?
    } else {
        chi_raw
    };
    finish(s, chi, 0.0, Vec::new(), 0)
}

fn finish(
    s: &GridMatrixFunction,
    chi: MatrixSeries,
    neg_energy: f64,
    stages: Vec<StageRecord>,
    regularized_samples: usize,
) -> Result<FactorizationResult> {
    let grid = s.grid();
    let residual = crate::verify::residual(s, &chi)?;
    let chi_grid = chi.to_grid(&grid)?;
    let det_samples: Vec<Complex64> = chi_grid.samples().iter().map(|m| m.determinant()).collect();
    let outer_defect = outer_defect_samples(chi.value_at_zero().determinant(), &det_samples);
    Ok(FactorizationResult {
        value_at_zero: chi.value_at_zero(),
        chi_plus: chi,
        residual,
        neg_energy,
        outer_defect,
        stages,
        regularized_samples,
    })
}
