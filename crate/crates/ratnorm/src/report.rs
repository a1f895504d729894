//! Serializable result rows and the run report.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use ratnorm_core::bernstein::{BernsteinEstimate, LimitReport, SweepRow};
use ratnorm_core::kernel::{KernelEval, KernelMethod};
use ratnorm_core::norms::{NormMethod, NormResult};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRow {
    pub n: usize,
    pub r: f64,
    pub space: String,
    pub kind: Option<&'static str>,
    pub value: Option<f64>,
    pub normalized: Option<f64>,
    pub error_estimate: Option<f64>,
    pub error: Option<String>,
}

impl From<&BernsteinEstimate> for EstimateRow {
    fn from(e: &BernsteinEstimate) -> Self {
        EstimateRow {
            n: e.n,
            r: e.r,
            space: e.space.label(),
            kind: Some(e.kind.as_str()),
            value: Some(e.value),
            normalized: Some(e.normalized),
            error_estimate: Some(e.error_estimate),
            error: None,
        }
    }
}

impl EstimateRow {
    pub fn from_sweep(row: &SweepRow, space: &str) -> Self {
        match &row.outcome {
            Ok(e) => e.into(),
            Err(err) => EstimateRow {
                n: row.n,
                r: row.r,
                space: space.to_owned(),
                kind: None,
                value: None,
                normalized: None,
                error_estimate: None,
                error: Some(err.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelRow {
    pub function: &'static str,
    pub t: Option<f64>,
    pub r: f64,
    pub value: f64,
    pub method: &'static str,
    pub error_estimate: Option<f64>,
}

pub fn kernel_method(m: KernelMethod) -> &'static str {
    match m {
        KernelMethod::Series => "series",
        KernelMethod::Quadrature => "quadrature",
        KernelMethod::Identity => "identity",
    }
}

impl KernelRow {
    pub fn from_eval(function: &'static str, e: &KernelEval) -> Self {
        KernelRow {
            function,
            t: Some(e.t),
            r: e.r,
            value: e.value,
            method: kernel_method(e.method),
            error_estimate: Some(e.error_estimate),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow {
    pub space: String,
    pub method: &'static str,
    pub value: f64,
    pub error_estimate: f64,
    pub angular_points: Option<usize>,
    pub terms: usize,
}

impl NormRow {
    pub fn new(space: String, r: &NormResult) -> Self {
        NormRow {
            space,
            method: match r.method {
                NormMethod::Quadrature => "quadrature",
                NormMethod::Series => "series",
            },
            value: r.value,
            error_estimate: r.error_estimate,
            angular_points: r.grid.map(|g| g.angular_points),
            terms: r.terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRowOut {
    pub n: usize,
    pub value: f64,
    pub per_n: f64,
    pub error: f64,
}

pub fn limit_rows(report: &LimitReport) -> Vec<LimitRowOut> {
    report
        .rows
        .iter()
        .map(|row| LimitRowOut {
            n: row.n,
            value: row.value,
            per_n: row.per_n,
            error: row.error,
        })
        .collect()
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub wall_time_seconds: f64,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    pub wall_time_seconds: f64,
}

/// Rows as CSV with a header line.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(writer.into_inner().map_err(|e| e.into_error())?)
}

/// Writes `bytes` to stdout and, when given, to `out`.
pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    if let Some(path) = out {
        std::fs::write(path, bytes)?;
    }
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(bytes)?;
    stdout.flush()?;
    Ok(())
}
