use meandim::table::ConvergenceTable;
use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, SCHEMA_VERSION};
use crate::error::CliError;

/// A target compared with what was achieved.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub target: Option<f64>,
    pub achieved: f64,
    /// `|achieved − target|`.
    pub deviation: Option<f64>,
    pub exact: bool,
    /// Whether a stated condition holds, when the verdict carries one.
    pub holds: Option<bool>,
}

impl Verdict {
    pub fn new(name: impl Into<String>, target: Option<f64>, achieved: f64, exact: bool) -> Verdict {
        Verdict { name: name.into(), target, achieved, deviation: target.map(|t| (achieved - t).abs()), exact, holds: None }
    }

    pub fn with_holds(mut self, holds: bool) -> Verdict {
        self.holds = Some(holds);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
}

/// Wall time; the only part of a report that may differ between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub metadata: Metadata,
    pub tables: Vec<ConvergenceTable>,
    pub verdicts: Vec<Verdict>,
    pub details: Value,
    pub timing: Timing,
}

impl Report {
    pub fn metadata(command: &str, config_hash: String, seed: u64) -> Metadata {
        Metadata {
            tool: "meandim".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema: SCHEMA_VERSION,
            command: command.into(),
            config_hash,
            seed,
        }
    }
}

pub const CSV_HEADER: [&str; 6] = ["estimator", "N", "M", "value", "exact_flag", "target"];

fn number(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

fn to_csv(report: &Report) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Computation(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(err)?;
    for t in &report.tables {
        let target = t.target.map(number).unwrap_or_default();
        for r in &t.rows {
            let rec = [t.estimator.clone(), r.n.to_string(), r.m.to_string(), number(r.value), r.exact.to_string(), target.clone()];
            w.write_record(&rec).map_err(err)?;
        }
        for r in &t.extrapolated {
            let rec = [t.estimator.clone(), "inf".into(), r.m.to_string(), number(r.value), "true".into(), target.clone()];
            w.write_record(&rec).map_err(err)?;
        }
    }
    for v in &report.verdicts {
        let target = v.target.map(number).unwrap_or_default();
        let rec = [format!("verdict:{}", v.name), String::new(), String::new(), number(v.achieved), v.exact.to_string(), target];
        w.write_record(&rec).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Computation(format!("csv: {e}")))
}

/// Report bytes in the requested format.
pub fn emit(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| CliError::Computation(format!("json: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => to_csv(report),
    }
}
