//! Stable JSON schemas for series, grid functions, and factorization
//! results.
//!
//! Layouts:
//! * series: `{"lo": int, "re": [..], "im": [..]}`
//! * matrix series: `{"r": int, "lo": int, "entries": [series ..]}` with
//!   entries row-major, all sharing the common band
//! * grid function: `{"r": int, "K": int, "samples": [..]}` with samples
//!   flattened sample-major, entries row-major, re/im interleaved
//! * factor file: `{"factor": matrix-series, "diagnostics": {..}}`
//!
//! Field order is the declaration order below and is stable.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, GridMatrixFunction, MatrixSeries};
use crate::recursion::FactorizationResult;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub lo: i64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&FourierSeries> for SeriesJson {
    fn from(s: &FourierSeries) -> Self {
        Self {
            lo: s.lo(),
            re: s.coeffs().iter().map(|c| c.re).collect(),
            im: s.coeffs().iter().map(|c| c.im).collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for FourierSeries {
    type Error = Error;

    fn try_from(j: &SeriesJson) -> Result<Self> {
        if j.re.is_empty() || j.re.len() != j.im.len() {
            return Err(Error::InvalidInput(format!(
                "series field re/im must be nonempty and equal length, got {} and {}",
                j.re.len(),
                j.im.len()
            )));
        }
        Ok(FourierSeries::new(
            j.lo,
            j.re.iter()
                .zip(&j.im)
                .map(|(&re, &im)| Complex64::new(re, im))
                .collect(),
        ))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixSeriesJson {
    pub r: usize,
    pub lo: i64,
    pub entries: Vec<SeriesJson>,
}

impl From<&MatrixSeries> for MatrixSeriesJson {
    fn from(m: &MatrixSeries) -> Self {
        let r = m.r();
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                entries.push(SeriesJson::from(&m.entry(i, j)));
            }
        }
        Self {
            r,
            lo: m.lo(),
            entries,
        }
    }
}

impl TryFrom<&MatrixSeriesJson> for MatrixSeries {
    type Error = Error;

    fn try_from(j: &MatrixSeriesJson) -> Result<Self> {
        if j.r == 0 {
            return Err(Error::InvalidInput(
                "matrix series field r must be positive".into(),
            ));
        }
        let entries: Vec<FourierSeries> = j
            .entries
            .iter()
            .map(FourierSeries::try_from)
            .collect::<Result<_>>()?;
        MatrixSeries::from_entries(j.r, &entries)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridMatrixJson {
    pub r: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub samples: Vec<f64>,
}

impl From<&GridMatrixFunction> for GridMatrixJson {
    fn from(f: &GridMatrixFunction) -> Self {
        let r = f.r();
        let mut samples = Vec::with_capacity(f.len() * r * r * 2);
        for s in f.samples() {
            for i in 0..r {
                for j in 0..r {
                    samples.push(s[(i, j)].re);
                    samples.push(s[(i, j)].im);
                }
            }
        }
        Self {
            r,
            k: f.len(),
            samples,
        }
    }
}

impl TryFrom<&GridMatrixJson> for GridMatrixFunction {
    type Error = Error;

    fn try_from(j: &GridMatrixJson) -> Result<Self> {
        if j.r == 0 {
            return Err(Error::InvalidInput(
                "grid function field r must be positive".into(),
            ));
        }
        let want = j.k * j.r * j.r * 2;
        if j.samples.len() != want {
            return Err(Error::InvalidInput(format!(
                "grid function field samples has length {}, expected {want} (K r r 2)",
                j.samples.len()
            )));
        }
        let r = j.r;
        let mut out = Vec::with_capacity(j.k);
        for k in 0..j.k {
            let base = k * r * r * 2;
            out.push(DMatrix::from_fn(r, r, |i, jj| {
                let at = base + (i * r + jj) * 2;
                Complex64::new(j.samples[at], j.samples[at + 1])
            }));
        }
        GridMatrixFunction::new(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageRecordJson {
    pub m: usize,
    pub n: usize,
    pub residual: f64,
    #[serde(rename = "truncationEnergy")]
    pub truncation_energy: f64,
    #[serde(rename = "gramDefect")]
    pub gram_defect: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsJson {
    pub residual: f64,
    #[serde(rename = "negEnergy")]
    pub neg_energy: f64,
    /// Serialized as null when infinite (determinant vanishing at the
    /// origin).
    #[serde(rename = "outerDefect")]
    pub outer_defect: Option<f64>,
    #[serde(rename = "regularizedSamples")]
    pub regularized_samples: usize,
    pub stages: Vec<StageRecordJson>,
}

/// The factor file: the series payload plus its diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorJson {
    pub factor: MatrixSeriesJson,
    pub diagnostics: DiagnosticsJson,
}

impl From<&FactorizationResult> for FactorJson {
    fn from(res: &FactorizationResult) -> Self {
        Self {
            factor: MatrixSeriesJson::from(&res.chi_plus),
            diagnostics: DiagnosticsJson {
                residual: res.residual,
                neg_energy: res.neg_energy,
                outer_defect: res.outer_defect.is_finite().then_some(res.outer_defect),
                regularized_samples: res.regularized_samples,
                stages: res
                    .stages
                    .iter()
                    .map(|s| StageRecordJson {
                        m: s.m,
                        n: s.n,
                        residual: s.residual,
                        truncation_energy: s.truncation_energy,
                        gram_defect: s.gram_defect,
                    })
                    .collect(),
            },
        }
    }
}

/// Parse a density file holding either a grid function or a matrix series.
pub enum DensityJson {
    Grid(GridMatrixJson),
    Series(MatrixSeriesJson),
}

pub fn parse_density(text: &str) -> Result<DensityJson> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidInput("expected a JSON object".into()))?;
    if obj.contains_key("K") || obj.contains_key("samples") {
        let parsed: GridMatrixJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(format!("bad grid function: {e}")))?;
        Ok(DensityJson::Grid(parsed))
    } else if obj.contains_key("entries") {
        let parsed: MatrixSeriesJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(format!("bad matrix series: {e}")))?;
        Ok(DensityJson::Series(parsed))
    } else {
        Err(Error::InvalidInput(
            "expected field \"K\"/\"samples\" (grid function) or \"entries\" (matrix series)"
                .into(),
        ))
    }
}

/// Parse a factor file: either a bare matrix series or a factor file with a
/// `factor` field.
pub fn parse_factor(text: &str) -> Result<MatrixSeries> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidInput("expected a JSON object".into()))?;
    let series_value = if obj.contains_key("factor") {
        &value["factor"]
    } else {
        &value
    };
    let parsed: MatrixSeriesJson = serde_json::from_value(series_value.clone())
        .map_err(|e| Error::InvalidInput(format!("bad factor: {e}")))?;
    MatrixSeries::try_from(&parsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::UnitCircleGrid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn series_round_trip() {
        let s = FourierSeries::new(-2, vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let j = SeriesJson::from(&s);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.starts_with("{\"lo\":"));
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(FourierSeries::try_from(&back).unwrap(), s);
    }

    #[test]
    fn matrix_series_round_trip() {
        let grid = UnitCircleGrid::new(16).unwrap();
        let (_, chi) = crate::verify::generate_test_density(2, 3, 1, 0.3, &grid).unwrap();
        let j = MatrixSeriesJson::from(&chi);
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixSeriesJson = serde_json::from_str(&text).unwrap();
        let chi2 = MatrixSeries::try_from(&back).unwrap();
        for n in chi.lo()..=chi.hi() {
            assert!((chi.coeff(n) - chi2.coeff(n)).norm() < 1e-15);
        }
    }

    #[test]
    fn grid_function_round_trip() {
        let grid = UnitCircleGrid::new(8).unwrap();
        let (s, _) = crate::verify::generate_test_density(2, 2, 2, 0.3, &grid).unwrap();
        let j = GridMatrixJson::from(&s);
        let back = GridMatrixFunction::try_from(&j).unwrap();
        for (a, b) in s.samples().iter().zip(back.samples()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn density_parser_distinguishes_layouts() {
        let grid_text = r#"{"r": 1, "K": 2, "samples": [1.0, 0.0, 1.0, 0.0]}"#;
        assert!(matches!(
            parse_density(grid_text).unwrap(),
            DensityJson::Grid(_)
        ));
        let series_text = r#"{"r": 1, "lo": 0, "entries": [{"lo": 0, "re": [1.0], "im": [0.0]}]}"#;
        assert!(matches!(
            parse_density(series_text).unwrap(),
            DensityJson::Series(_)
        ));
        assert!(parse_density("{}").is_err());
        assert!(parse_density("[1, 2]").is_err());
    }

    #[test]
    fn bad_sample_length_is_named() {
        let text = r#"{"r": 2, "K": 2, "samples": [1.0, 0.0]}"#;
        match parse_density(text) {
            Ok(DensityJson::Grid(g)) => match GridMatrixFunction::try_from(&g) {
                Err(Error::InvalidInput(msg)) => assert!(msg.contains("samples")),
                other => panic!("expected invalid input, got {other:?}"),
            },
            other => panic!("expected grid parse, got {:?}", other.is_ok()),
        }
    }
}
