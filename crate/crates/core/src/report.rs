//! Aggregation of per-input metrics into mean ± std tables.
//!
//! Columns always follow `input_id, cl, dl, tl, rho, ssim, acc, iou_r,
//! iou_rl`; a report carries whichever subset it was built with. Absent
//! values are skipped when aggregating, never imputed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::connectivity::ConnectivityReport;
use crate::metrics::{AbsenceReason, Measurement, VisionReport};

/// Tolerance used when checking `cl + dl == tl`.
pub const CONSISTENCY_TOLERANCE: f64 = 0.01;

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("cannot aggregate an empty sequence")]
    EmptySequence,
    #[error("unknown output format {0:?} (expected csv, md or json)")]
    UnknownFormat(String),
    #[error("unknown std mode {0:?} (expected sample or population)")]
    UnknownStdMode(String),
    #[error("{context}: cl + dl = {sum} but tl = {tl}")]
    Inconsistent { context: String, sum: f64, tl: f64 },
    #[error("row {input_id:?} has a value for {metric}, which is not a report column")]
    UnexpectedMetric { input_id: String, metric: Metric },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Cl,
    Dl,
    Tl,
    Rho,
    Ssim,
    Acc,
    IouR,
    IouRl,
}

impl Metric {
    pub const CONNECTIVITY: [Metric; 3] = [Metric::Cl, Metric::Dl, Metric::Tl];
    pub const VISION: [Metric; 5] = [
        Metric::Rho,
        Metric::Ssim,
        Metric::Acc,
        Metric::IouR,
        Metric::IouRl,
    ];
    pub const ALL: [Metric; 8] = [
        Metric::Cl,
        Metric::Dl,
        Metric::Tl,
        Metric::Rho,
        Metric::Ssim,
        Metric::Acc,
        Metric::IouR,
        Metric::IouRl,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Self::Cl => "cl",
            Self::Dl => "dl",
            Self::Tl => "tl",
            Self::Rho => "rho",
            Self::Ssim => "ssim",
            Self::Acc => "acc",
            Self::IouR => "iou_r",
            Self::IouRl => "iou_rl",
        }
    }

    pub fn is_count(self) -> bool {
        matches!(self, Self::Cl | Self::Dl | Self::Tl)
    }

    /// Decimal places for mean ± std cells.
    fn precision(self) -> usize {
        if self.is_count() {
            2
        } else {
            3
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.column())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StdMode {
    /// Divisor `n - 1`; zero for a single sample.
    #[default]
    Sample,
    /// Divisor `n`.
    Population,
}

impl FromStr for StdMode {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sample" => Ok(Self::Sample),
            "population" => Ok(Self::Population),
            other => Err(ReportError::UnknownStdMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

pub fn aggregate(values: &[f64]) -> Result<MeanStd, ReportError> {
    aggregate_with(values, StdMode::Sample)
}

/// Mean and standard deviation. Values are summed in sorted order so the
/// result does not depend on input order.
pub fn aggregate_with(values: &[f64], mode: StdMode) -> Result<MeanStd, ReportError> {
    if values.is_empty() {
        return Err(ReportError::EmptySequence);
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / n as f64;

    let mut sq_dev: Vec<f64> = sorted.iter().map(|v| (v - mean) * (v - mean)).collect();
    sq_dev.sort_by(f64::total_cmp);
    let ss: f64 = sq_dev.iter().sum();
    let std = match (mode, n) {
        (_, 1) => 0.0,
        (StdMode::Sample, _) => (ss / (n - 1) as f64).sqrt(),
        (StdMode::Population, _) => (ss / n as f64).sqrt(),
    };
    Ok(MeanStd { mean, std, n })
}

/// Checks `cl + dl == tl` within `tol`, e.g. for published mean triples.
pub fn check_connectivity_triple(cl: f64, dl: f64, tl: f64, tol: f64) -> Result<(), ReportError> {
    let sum = cl + dl;
    if (sum - tl).abs() <= tol {
        Ok(())
    } else {
        Err(ReportError::Inconsistent {
            context: "triple".into(),
            sum,
            tl,
        })
    }
}

/// Raw metric values for one input (a mask or a mask pair).
#[derive(Debug, Clone, PartialEq)]
pub struct InputRow {
    pub input_id: String,
    pub values: BTreeMap<Metric, Measurement>,
}

impl InputRow {
    pub fn new(input_id: impl Into<String>) -> Self {
        Self {
            input_id: input_id.into(),
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, metric: Metric, value: Measurement) -> Self {
        self.values.insert(metric, value);
        self
    }

    pub fn with_connectivity(self, report: &ConnectivityReport) -> Self {
        self.with(Metric::Cl, Measurement::Value(report.cl as f64))
            .with(Metric::Dl, Measurement::Value(report.dl as f64))
            .with(Metric::Tl, Measurement::Value(report.tl as f64))
    }

    pub fn with_vision(self, report: &VisionReport) -> Self {
        self.with(Metric::Rho, report.rho)
            .with(Metric::Ssim, report.ssim)
            .with(Metric::Acc, report.acc)
            .with(Metric::IouR, report.iou_r)
            .with(Metric::IouRl, report.iou_rl)
    }

    /// Marks every listed metric absent, e.g. when an input failed to load.
    pub fn failed(input_id: impl Into<String>, metrics: &[Metric], reason: AbsenceReason) -> Self {
        metrics.iter().fold(Self::new(input_id), |row, &m| {
            row.with(m, Measurement::Absent(reason))
        })
    }

    pub fn get(&self, metric: Metric) -> Option<Measurement> {
        self.values.get(&metric).copied()
    }

    fn check_consistency(&self) -> Result<(), ReportError> {
        let value = |m| self.get(m).and_then(Measurement::value);
        if let (Some(cl), Some(dl), Some(tl)) = (value(Metric::Cl), value(Metric::Dl), value(Metric::Tl)) {
            check_connectivity_triple(cl, dl, tl, CONSISTENCY_TOLERANCE).map_err(|_| {
                ReportError::Inconsistent {
                    context: format!("row {:?}", self.input_id),
                    sum: cl + dl,
                    tl,
                }
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub method: String,
    pub columns: Vec<Metric>,
    pub std_mode: StdMode,
    pub rows: Vec<InputRow>,
    /// `None` when no input produced a value for the metric.
    pub aggregates: BTreeMap<Metric, Option<MeanStd>>,
}

impl AggregateReport {
    pub fn new(
        method: impl Into<String>,
        columns: &[Metric],
        rows: Vec<InputRow>,
        std_mode: StdMode,
    ) -> Result<Self, ReportError> {
        let mut columns = columns.to_vec();
        columns.sort();
        columns.dedup();
        for row in &rows {
            if let Some(&metric) = row.values.keys().find(|m| !columns.contains(m)) {
                return Err(ReportError::UnexpectedMetric {
                    input_id: row.input_id.clone(),
                    metric,
                });
            }
        }
        let aggregates = columns
            .iter()
            .map(|&metric| {
                let values: Vec<f64> = rows
                    .iter()
                    .filter_map(|row| row.get(metric).and_then(Measurement::value))
                    .collect();
                (metric, aggregate_with(&values, std_mode).ok())
            })
            .collect();
        Ok(Self {
            method: method.into(),
            columns,
            std_mode,
            rows,
            aggregates,
        })
    }

    pub fn aggregate(&self, metric: Metric) -> Option<MeanStd> {
        self.aggregates.get(&metric).copied().flatten()
    }

    /// Row-level and aggregate `cl + dl == tl` checks.
    pub fn validate(&self) -> Result<(), ReportError> {
        for row in &self.rows {
            row.check_consistency()?;
        }
        if let (Some(cl), Some(dl), Some(tl)) = (
            self.aggregate(Metric::Cl),
            self.aggregate(Metric::Dl),
            self.aggregate(Metric::Tl),
        ) {
            check_connectivity_triple(cl.mean, dl.mean, tl.mean, CONSISTENCY_TOLERANCE).map_err(
                |_| ReportError::Inconsistent {
                    context: "aggregate means".into(),
                    sum: cl.mean + dl.mean,
                    tl: tl.mean,
                },
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "md" | "markdown" => Ok(Self::Markdown),
            "json" => Ok(Self::Json),
            _ => Err(ReportError::UnknownFormat(s.to_string())),
        }
    }
}

pub fn render_table(report: &AggregateReport, format: OutputFormat) -> Result<String, ReportError> {
    report.validate()?;
    Ok(match format {
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Markdown => render_markdown(report),
        OutputFormat::Json => render_json(report),
    })
}

fn absent(reason: AbsenceReason) -> String {
    format!("n/a({})", reason.code())
}

fn missing_cell(m: Option<Measurement>) -> String {
    match m {
        Some(Measurement::Absent(reason)) => absent(reason),
        _ => "n/a(missing)".into(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(report: &AggregateReport) -> String {
    let mut out = String::from("input_id");
    for m in &report.columns {
        let _ = write!(out, ",{}", m.column());
    }
    out.push('\n');

    for row in &report.rows {
        out.push_str(&csv_field(&row.input_id));
        for &m in &report.columns {
            let cell = match row.get(m) {
                Some(Measurement::Value(v)) => v.to_string(),
                other => missing_cell(other),
            };
            let _ = write!(out, ",{cell}");
        }
        out.push('\n');
    }

    type Stat = (&'static str, fn(&MeanStd) -> String);
    let stats: [Stat; 3] = [
        ("mean", |s| s.mean.to_string()),
        ("std", |s| s.std.to_string()),
        ("n", |s| s.n.to_string()),
    ];
    for (label, cell) in stats {
        let _ = write!(out, "aggregate:{label}");
        for &m in &report.columns {
            match report.aggregate(m) {
                Some(s) => {
                    let _ = write!(out, ",{}", cell(&s));
                }
                None if label == "n" => out.push_str(",0"),
                None => out.push_str(",n/a(no-values)"),
            }
        }
        out.push('\n');
    }
    out
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

fn render_markdown(report: &AggregateReport) -> String {
    let mut out = String::from("| input_id |");
    for m in &report.columns {
        let _ = write!(out, " {} |", m.column());
    }
    out.push_str("\n|---|");
    for _ in &report.columns {
        out.push_str("---|");
    }
    out.push('\n');

    for row in &report.rows {
        let _ = write!(out, "| {} |", md_escape(&row.input_id));
        for &m in &report.columns {
            let cell = match row.get(m) {
                Some(Measurement::Value(v)) if m.is_count() => format!("{v:.0}"),
                Some(Measurement::Value(v)) => format!("{v:.3}"),
                other => missing_cell(other),
            };
            let _ = write!(out, " {cell} |");
        }
        out.push('\n');
    }

    let _ = write!(out, "| **{}** |", md_escape(&report.method));
    for &m in &report.columns {
        let cell = match report.aggregate(m) {
            Some(s) => format!("{:.p$}±{:.p$}", s.mean, s.std, p = m.precision()),
            None => "n/a(no-values)".into(),
        };
        let _ = write!(out, " {cell} |");
    }
    out.push('\n');
    out
}

#[derive(Serialize)]
struct JsonRow<'a> {
    input_id: &'a str,
    #[serde(flatten)]
    values: BTreeMap<&'static str, Measurement>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    method: &'a str,
    std_mode: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<JsonRow<'a>>,
    aggregates: BTreeMap<&'static str, Option<MeanStd>>,
}

fn render_json(report: &AggregateReport) -> String {
    let doc = JsonReport {
        method: &report.method,
        std_mode: match report.std_mode {
            StdMode::Sample => "sample",
            StdMode::Population => "population",
        },
        columns: report.columns.iter().map(|m| m.column()).collect(),
        rows: report
            .rows
            .iter()
            .map(|row| JsonRow {
                input_id: &row.input_id,
                values: row.values.iter().map(|(m, v)| (m.column(), *v)).collect(),
            })
            .collect(),
        aggregates: report
            .aggregates
            .iter()
            .map(|(m, s)| (m.column(), *s))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}
