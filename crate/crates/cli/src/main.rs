//! Command-line spectral factorization.
//!
//! Exit codes: 0 success, 1 input error, 2 non-convergence, 3 verification
//! failure, 4 comparison failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use specfact_core::error::Error;
use specfact_core::fourier::{GridMatrixFunction, MatrixSeries, UnitCircleGrid};
use specfact_core::json::{
    parse_density, parse_factor, DensityJson, FactorJson, GridMatrixJson, MatrixSeriesJson,
};
use specfact_core::recursion::{factorize, FactorConfig};
use specfact_core::verify::{
    full_report, generate_test_density, report_for_factor, residual, unitary_equivalence,
};

#[derive(Parser)]
#[command(
    name = "specfact",
    version,
    about = "Canonical spectral factorization of positive definite matrix densities on the unit circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the canonical spectral factor of a density file.
    Factorize {
        /// Density JSON: a grid function {r, K, samples} or a matrix series
        /// {r, lo, entries} (sampled onto the grid first).
        input: PathBuf,
        /// Grid size used when the input is given as coefficients.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Reconstruction residual required for exit code 0.
        #[arg(long = "tol-total", default_value_t = 1e-6)]
        tol_total: f64,
        /// Per-stage relative non-analytic energy target.
        #[arg(long = "tol-analytic", default_value_t = 1e-8)]
        tol_analytic: f64,
        /// Starting truncation order (measured from the tails by default).
        #[arg(long)]
        n0: Option<usize>,
        /// Truncation order cap (K/4 by default).
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        /// Factor output path; defaults to <input>.factor.json. The report
        /// goes to the same path with extension .report.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-frequency residual and |det chi| CSV curves.
        #[arg(long = "emit-plots")]
        emit_plots: bool,
        /// Debug: dump each stage's completion system matrix as JSON into
        /// this directory.
        #[arg(long = "dump-systems", hide = true)]
        dump_systems: Option<PathBuf>,
    },
    /// Check a factor file against a density file and write a report.
    Verify {
        density: PathBuf,
        factor: PathBuf,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long = "tol-total", default_value_t = 1e-6)]
        tol_total: f64,
        #[arg(long = "tol-analytic", default_value_t = 1e-8)]
        tol_analytic: f64,
        /// Cap on the outer defect of det chi.
        #[arg(long = "tol-outer", default_value_t = 1e-6)]
        tol_outer: f64,
        /// Report output path; stdout by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded test density with a known factor.
    Generate {
        /// Density output path.
        density_out: PathBuf,
        /// Ground-truth factor output path.
        factor_out: PathBuf,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.4)]
        margin: f64,
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
    /// Relate two factor files by a constant matrix and report the defects.
    Compare {
        factor1: PathBuf,
        factor2: PathBuf,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Defect bound required for exit code 0.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Input-shaped errors exit 1; failures of the algorithm to converge exit 2.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::RefinementExhausted { .. }
        | Error::StageResidual { .. }
        | Error::GramNotConstant { .. }
        | Error::CompletionRankDeficiency { .. }
        | Error::PinSingular
        | Error::CannotNormalize => 2,
        _ => 1,
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Factorize {
            input,
            grid,
            tol_total,
            tol_analytic,
            n0,
            n_max,
            out,
            emit_plots,
            dump_systems,
        } => {
            let density = load_density(&input, grid)?;
            let config = FactorConfig {
                tol_total,
                tol_analytic,
                n0,
                n_max,
                canonicalize: true,
                dump_systems,
            };
            let result = factorize(&density, &config)?;
            let report = full_report(&density, &result)?;

            let out = out.unwrap_or_else(|| with_suffix(&input, ".factor.json"));
            write_text(&out, &to_json_pretty(&FactorJson::from(&result))?)?;
            let report_path = with_suffix(&out, ".report.json");
            write_text(&report_path, &to_json_pretty(&report)?)?;
            eprintln!(
                "factor written to {}, report to {}",
                out.display(),
                report_path.display()
            );

            if emit_plots {
                emit_plot_csvs(&out, &density, &result.chi_plus)?;
            }

            if result.residual <= tol_total && result.neg_energy <= tol_analytic {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "tolerances not met: residual {:.3e} (cap {tol_total:.1e}), negative \
                     energy {:.3e} (cap {tol_analytic:.1e})",
                    result.residual, result.neg_energy
                );
                Ok(ExitCode::from(2))
            }
        }

        Command::Verify {
            density,
            factor,
            grid,
            tol_total,
            tol_analytic,
            tol_outer,
            out,
        } => {
            let s = load_density(&density, grid)?;
            let chi = parse_factor(&read_text(&factor)?)?;
            let report = report_for_factor(&s, &chi, &[])?;
            let text = to_json_pretty(&report)?;
            match out {
                Some(path) => write_text(&path, &text)?,
                None => print_stdout(&text),
            }
            let ok = report.residual <= tol_total
                && report.neg_energy <= tol_analytic
                && report.outer_defect <= tol_outer;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }

        Command::Generate {
            density_out,
            factor_out,
            r,
            degree,
            seed,
            margin,
            grid,
        } => {
            let grid = UnitCircleGrid::new(grid)?;
            let (s, chi0) = generate_test_density(r, degree, seed, margin, &grid)?;
            write_text(&density_out, &to_json_pretty(&GridMatrixJson::from(&s))?)?;
            write_text(
                &factor_out,
                &to_json_pretty(&MatrixSeriesJson::from(&chi0))?,
            )?;
            let self_residual = residual(&s, &chi0)?;
            let chi_grid = chi0.to_grid(&grid)?;
            let dets: Vec<Complex64> = chi_grid.samples().iter().map(|m| m.determinant()).collect();
            let outer = specfact_core::outer::outer_defect_samples(
                chi0.value_at_zero().determinant(),
                &dets,
            );
            eprintln!("self-check: residual {self_residual:.3e}, det outer defect {outer:.3e}");
            Ok(ExitCode::SUCCESS)
        }

        Command::Compare {
            factor1,
            factor2,
            grid,
            tol,
            out,
        } => {
            let chi1 = parse_factor(&read_text(&factor1)?)?;
            let chi2 = parse_factor(&read_text(&factor2)?)?;
            let grid = UnitCircleGrid::new(grid)?;
            let rep = unitary_equivalence(&chi1, &chi2, &grid)?;
            let r = rep.u.nrows();
            let text = to_json_pretty(&serde_json::json!({
                "unitarityDefect": rep.unitarity_defect,
                "matchDefect": rep.match_defect,
                "u": {
                    "r": r,
                    "re": rep.u.iter().map(|c| c.re).collect::<Vec<_>>(),
                    "im": rep.u.iter().map(|c| c.im).collect::<Vec<_>>(),
                },
            }))?;
            match out {
                Some(path) => write_text(&path, &text)?,
                None => print_stdout(&text),
            }
            let ok = rep.unitarity_defect <= tol && rep.match_defect <= tol;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            })
        }
    }
}

fn load_density(path: &Path, grid_size: usize) -> Result<GridMatrixFunction, Error> {
    match parse_density(&read_text(path)?)? {
        DensityJson::Grid(g) => GridMatrixFunction::try_from(&g),
        DensityJson::Series(series_json) => {
            let series = MatrixSeries::try_from(&series_json)?;
            let grid = UnitCircleGrid::new(grid_size)?;
            let half = (grid_size / 2) as i64;
            if series.lo() < -(half - 1) || series.hi() > half {
                return Err(Error::InvalidInput(format!(
                    "coefficient band [{}, {}] exceeds K/2 = {half}; rerun with --grid {} or larger",
                    series.lo(),
                    series.hi(),
                    (2 * series.lo().abs().max(series.hi().abs()) as usize).next_power_of_two()
                )));
            }
            series.to_grid(&grid)
        }
    }
}

/// Print without panicking when the pipe closes early (e.g. piped to head).
fn print_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn to_json_pretty<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(suffix);
    path.with_file_name(name)
}

/// Per-frequency curves as CSV `frequency,value` rows: the pointwise
/// reconstruction residual and |det chi|.
fn emit_plot_csvs(
    factor_path: &Path,
    s: &GridMatrixFunction,
    chi: &MatrixSeries,
) -> Result<(), Error> {
    let grid = s.grid();
    let chi_grid = chi.to_grid(&grid)?;
    let mut resid_csv = String::from("frequency,residual\n");
    let mut det_csv = String::from("frequency,abs_det\n");
    for k in 0..grid.len() {
        let t = grid.angle(k);
        let xk = chi_grid.sample(k);
        let diff = (s.sample(k) - xk * xk.adjoint()).norm();
        resid_csv.push_str(&format!("{t},{diff}\n"));
        det_csv.push_str(&format!("{t},{}\n", xk.determinant().norm()));
    }
    write_text(&with_suffix(factor_path, ".residual.csv"), &resid_csv)?;
    write_text(&with_suffix(factor_path, ".detabs.csv"), &det_csv)?;
    Ok(())
}
