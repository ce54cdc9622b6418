use std::collections::BTreeMap;
use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Flat table for `--format csv`.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Everything a command produced, before rendering.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub inputs: BTreeMap<&'static str, String>,
    pub result: Value,
    pub text: String,
    pub table: Table,
    /// A verification inside the command did not hold.
    pub failed: bool,
}

/// The JSON envelope. Big integers inside `result` are decimal strings.
#[derive(Debug, Serialize)]
pub struct OutputRecord<'a> {
    pub command: &'a str,
    pub inputs: &'a BTreeMap<&'static str, String>,
    pub result: &'a Value,
    pub elapsed_ns: u64,
}

pub fn render(
    report: &Report,
    elapsed_ns: u64,
    format: Format,
    out: &mut impl Write,
) -> io::Result<()> {
    match format {
        Format::Text => {
            out.write_all(report.text.as_bytes())?;
            if !report.text.ends_with('\n') {
                writeln!(out)?;
            }
        }
        Format::Json => {
            let record = OutputRecord {
                command: report.command,
                inputs: &report.inputs,
                result: &report.result,
                elapsed_ns,
            };
            serde_json::to_writer_pretty(&mut *out, &record)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&report.table.header)?;
            for row in &report.table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
