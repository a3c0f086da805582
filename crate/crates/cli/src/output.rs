use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use lll::numeric::RealInterval;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

/// A command's output in all three renderings.
pub struct Doc {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub plain: String,
}

impl Doc {
    pub fn new<T: Serialize>(
        json: &T,
        header: &[&str],
        rows: Vec<Vec<String>>,
        plain: String,
    ) -> Result<Doc, CliError> {
        Ok(Doc {
            json: serde_json::to_value(json).map_err(lll::Error::from)?,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            plain,
        })
    }
}

pub struct Sink {
    pub format: Format,
    pub path: Option<PathBuf>,
}

impl Sink {
    pub fn emit(&self, doc: &Doc) -> Result<(), CliError> {
        let mut out: Box<dyn Write> = match &self.path {
            Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        };
        match self.format {
            Format::Plain => out.write_all(doc.plain.as_bytes())?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &doc.json).map_err(lll::Error::from)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&doc.header).map_err(csv_err)?;
                for r in &doc.rows {
                    w.write_record(r).map_err(csv_err)?;
                }
                w.flush()?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(io::Error::other(e))
}

/// `[lo, hi]` with enough digits to show the enclosure.
pub fn interval(iv: &RealInterval) -> String {
    if iv.lo_f64() == iv.hi_f64() {
        format!("{:e}", iv.lo_f64())
    } else {
        format!("[{:e}, {:e}]", iv.lo_f64(), iv.hi_f64())
    }
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
