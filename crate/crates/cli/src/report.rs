use std::fs::File;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

pub const JSON_VERSION: &str = "zerodyn-report v1";
pub const CSV_HEADER: &str = "# zerodyn-csv v1";

/// One command's output: a JSON result plus a flat table for CSV.
pub struct Report {
    pub command: &'static str,
    pub result: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &'static str, result: impl Serialize) -> Report {
        Report {
            command,
            result: serde_json::to_value(result).expect("reports serialize"),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn table(mut self, columns: Vec<&'static str>, rows: Vec<Vec<String>>) -> Report {
        self.columns = columns;
        self.rows = rows;
        self
    }
}

pub fn emit(cfg: &RunConfig, report: &Report) -> io::Result<()> {
    let mut out: Box<dyn Write> = match &cfg.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match cfg.format {
        Format::Json => {
            let doc = json!({
                "format": JSON_VERSION,
                "command": report.command,
                "config": cfg,
                "result": report.result,
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            writeln!(
                out,
                "# command={} precision={} tol={} m_max={} d_cap={}",
                report.command, cfg.precision, cfg.tol, cfg.m_max, cfg.d_cap
            )?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&report.columns)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    out.flush()
}
