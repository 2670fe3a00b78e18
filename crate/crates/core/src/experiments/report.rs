//! Report files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{Proportion, StatReport, SupportHistogram, TolerancePolicy};
use crate::error::{Error, Result};
use crate::sampling::GENERATOR;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::InvalidConfig(format!(
                "unknown report format {s:?}; expected csv or json"
            ))),
        }
    }
}

/// Identifies the build and random generator that produced a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub generator: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            generator: GENERATOR.to_string(),
        }
    }
}

/// A histogram with its evaluation and enough metadata to rerun it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub tool: ToolInfo,
    /// `census` or `tournament-exact`.
    pub experiment: String,
    pub tolerance: TolerancePolicy,
    pub histogram: SupportHistogram,
    pub stats: StatReport,
}

impl CensusReport {
    pub fn new(
        experiment: &str,
        tolerance: TolerancePolicy,
        histogram: SupportHistogram,
        stats: StatReport,
    ) -> Self {
        CensusReport {
            tool: ToolInfo::default(),
            experiment: experiment.to_string(),
            tolerance,
            histogram,
            stats,
        }
    }

    /// One row per nonempty support.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitmask,cardinality,count,frequency,expected,z\n");
        for b in &self.stats.bins {
            let z = b.z.map_or_else(String::new, |z| format!("{z:.4}"));
            writeln!(
                out,
                "{},{},{},{:.8},{:.8},{z}",
                b.support.bits(),
                b.cardinality,
                b.count,
                b.frequency.to_f64(),
                b.expected.to_f64()
            )
            .expect("write to string");
        }
        out
    }
}

/// The result of a run that is not a support census, with tool metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport<T> {
    pub tool: ToolInfo,
    pub experiment: String,
    pub result: T,
}

impl<T> ExperimentReport<T> {
    pub fn new(experiment: &str, result: T) -> Self {
        ExperimentReport {
            tool: ToolInfo::default(),
            experiment: experiment.to_string(),
            result,
        }
    }
}

/// One row per named proportion.
pub fn proportions_csv(rows: &[(&str, &Proportion)]) -> String {
    let mut out = String::from("quantity,hits,total,frequency,expected,z,ci_lo,ci_hi\n");
    for (name, p) in rows {
        let z = p.z.map_or_else(String::new, |z| format!("{z:.4}"));
        writeln!(
            out,
            "{name},{},{},{:.8},{:.8},{z},{:.8},{:.8}",
            p.hits,
            p.total,
            p.frequency.to_f64(),
            p.expected.to_f64(),
            p.ci.lo,
            p.ci.hi
        )
        .expect("write to string");
    }
    out
}

pub fn write_report(report: &CensusReport, path: &Path, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Csv => fs::write(path, report.to_csv()).map_err(|e| Error::io(path, e)),
        ReportFormat::Json => write_json(report, path),
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads a report written with [`ReportFormat::Json`].
pub fn read_report(path: &Path) -> Result<CensusReport> {
    read_json(path)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
