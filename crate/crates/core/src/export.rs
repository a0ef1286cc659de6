//! CSV and JSON output for search reports.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::search::{SearchRecord, SearchReport};

pub const CSV_HEADER: [&str; 8] = [
    "a",
    "b",
    "c",
    "unit_N",
    "theta_half_steps",
    "classification",
    "certified",
    "theta_decimal",
];

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

fn csv_row(r: &SearchRecord) -> [String; 8] {
    let t = &r.triplet;
    [
        t.a().to_string(),
        t.b().to_string(),
        t.c().to_string(),
        t.unit_n().to_string(),
        r.half_steps.map(|j| j.to_string()).unwrap_or_default(),
        r.classification.to_string(),
        r.certified.to_string(),
        r.theta_estimate.clone(),
    ]
}

/// One row per solution, in report order. An empty report yields only the header.
pub fn write_csv<W: Write>(report: &SearchReport, out: W) -> Result<(), ExportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &report.solutions {
        w.write_record(csv_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(report: &SearchReport, mut out: W) -> Result<(), ExportError> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_json(s: &str) -> Result<SearchReport, ExportError> {
    Ok(serde_json::from_str(s)?)
}

pub fn write_report<W: Write>(report: &SearchReport, format: Format, out: W) -> Result<(), ExportError> {
    match format {
        Format::Csv => write_csv(report, out),
        Format::Json => write_json(report, out),
    }
}

pub fn export_to_path(report: &SearchReport, format: Format, path: &Path) -> Result<(), ExportError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_report(report, format, &mut out)?;
    out.flush()?;
    Ok(())
}
