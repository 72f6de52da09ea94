use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentName, OutputFormat};
use crate::error::{Error, Result};
use crate::stats::{chi2_sf, GofResult, MomentTest, Verdict, ZTest};

/// Rounds to 12 significant digits; non-finite values become `None`.
pub fn round_sig(x: f64) -> Option<f64> {
    if !x.is_finite() {
        return None;
    }
    format!("{x:.11e}").parse().ok()
}

/// A theoretical value with a description of the closed form it comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub name: String,
    pub value: Option<f64>,
    pub provenance: String,
}

impl Reference {
    pub fn new(name: impl Into<String>, value: f64, provenance: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value: round_sig(value),
            provenance: provenance.into(),
        }
    }
}

/// An empirical summary statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub value: Option<f64>,
}

impl Summary {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value: round_sig(value) }
    }
}

/// One verdict of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub test: String,
    pub theoretical: Option<f64>,
    pub empirical: Option<f64>,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub verdict: Verdict,
}

impl TestRecord {
    pub fn new(
        test: impl Into<String>,
        theoretical: Option<f64>,
        empirical: Option<f64>,
        statistic: Option<f64>,
        p_value: Option<f64>,
        verdict: Verdict,
    ) -> Self {
        Self {
            test: test.into(),
            theoretical: theoretical.and_then(round_sig),
            empirical: empirical.and_then(round_sig),
            statistic: statistic.and_then(round_sig),
            p_value: p_value.and_then(round_sig),
            verdict,
        }
    }

    pub fn from_gof(test: impl Into<String>, r: &GofResult) -> Self {
        Self::new(test, None, None, Some(r.statistic), Some(r.p_value), r.verdict)
    }

    /// Two-sided normal p-value `P(χ²_1 > z^2)` alongside the z-score.
    pub fn from_z(test: impl Into<String>, t: &ZTest) -> Self {
        Self::new(
            test,
            Some(t.reference),
            Some(t.estimate),
            Some(t.z),
            chi2_sf(t.z * t.z, 1).ok(),
            t.verdict,
        )
    }

    /// Records for the mean and the variance.
    pub fn from_moments(prefix: &str, t: &MomentTest) -> [Self; 2] {
        let one = |suffix: &str, th: f64, emp: f64, z: f64| {
            Self::new(
                format!("{prefix}_{suffix}"),
                Some(th),
                Some(emp),
                Some(z),
                chi2_sf(z * z, 1).ok(),
                Verdict::from_pass(z.abs() <= t.z_max),
            )
        };
        [
            one("mean", t.theoretical_mean, t.empirical_mean, t.z_scores[0]),
            one("var", t.theoretical_var, t.empirical_var, t.z_scores[1]),
        ]
    }

    /// Pass iff `value < threshold`.
    pub fn below(test: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(test, Some(threshold), Some(value), Some(value), None, Verdict::from_pass(value < threshold))
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}

/// Everything one run produced; field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentName,
    pub version: String,
    pub seed: u64,
    /// Seed of the attempt reported here; differs from `seed` after a retry.
    pub effective_seed: u64,
    pub retried: bool,
    pub config: ExperimentConfig,
    pub references: Vec<Reference>,
    pub summaries: Vec<Summary>,
    pub tests: Vec<TestRecord>,
    pub passed: bool,
    pub wall_clock_seconds: Option<f64>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    test: &'a str,
    theoretical: Option<f64>,
    empirical: Option<f64>,
    statistic: Option<f64>,
    p_value: Option<f64>,
    verdict: Verdict,
}

const CSV_HEADER: [&str; 7] = ["experiment", "test", "theoretical", "empirical", "statistic", "p_value", "verdict"];

/// Serializes a report: pretty JSON with fields in declaration order, or CSV
/// with one row per test.
pub fn emit_report(report: &ExperimentReport, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| Error::Serialization(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            let ser = |e: csv::Error| Error::Serialization(e.to_string());
            w.write_record(CSV_HEADER).map_err(ser)?;
            for t in &report.tests {
                w.serialize(CsvRow {
                    experiment: report.experiment.as_str(),
                    test: &t.test,
                    theoretical: t.theoretical,
                    empirical: t.empirical,
                    statistic: t.statistic,
                    p_value: t.p_value,
                    verdict: t.verdict,
                })
                .map_err(ser)?;
            }
            w.into_inner().map_err(|e| Error::Serialization(e.to_string()))
        }
    }
}

/// Parses a JSON report.
pub fn parse_report(bytes: &[u8]) -> Result<ExperimentReport> {
    serde_json::from_slice(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

pub fn write_report(report: &ExperimentReport, format: OutputFormat, path: &Path) -> Result<()> {
    std::fs::write(path, emit_report(report, format)?)?;
    Ok(())
}
