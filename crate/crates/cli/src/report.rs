//! JSON and CSV rendering. Infinite quantities are written as
//! `{"infinite": true, "reason": ...}`, never as a number.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use stable_ergo_core::criteria::{ErgodicityReport, RateBounds};
use stable_ergo_core::sigma::CriterionValue;

use crate::error::{CliError, Result};
use crate::SCHEMA_VERSION;

pub fn infinite(reason: &str) -> Value {
    json!({ "infinite": true, "reason": reason })
}

/// A float, with non-finite values made explicit.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!({ "nan": true })
    } else {
        infinite(if x > 0.0 { "+inf" } else { "-inf" })
    }
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn criterion(v: &Option<CriterionValue>) -> Value {
    match v {
        None => json!({ "unknown": true, "reason": "tail exponent undetermined" }),
        Some(CriterionValue::Infinite { reason }) => infinite(reason),
        Some(CriterionValue::Finite { value, abs_error, argsup }) => {
            let mut m = Map::new();
            m.insert("value".into(), num(*value));
            m.insert("abs_error".into(), num(*abs_error));
            if let Some(a) = argsup {
                m.insert("argsup".into(), if a.is_finite() { num(*a) } else { infinite("supremum approached as x -> inf") });
            }
            Value::Object(m)
        }
    }
}

pub fn ergodicity(r: &ErgodicityReport) -> Value {
    json!({
        "alpha": r.alpha,
        "ergodic": r.ergodic.as_str(),
        "exponentially_ergodic": r.exponentially_ergodic.as_str(),
        "strongly_ergodic": r.strongly_ergodic.as_str(),
        "mu_total": criterion(&r.mu_total),
        "delta": criterion(&r.delta),
        "delta_plus": criterion(&r.delta_plus),
        "delta_minus": criterion(&r.delta_minus),
        "i_integral": criterion(&r.i_integral),
    })
}

pub fn bounds(b: &RateBounds) -> Value {
    json!({
        "lambda1_lower": opt(b.lambda1_lower),
        "lambda0_lower": opt(b.lambda0_lower),
        "lambda0_upper": opt(b.lambda0_upper),
        "lambda0_halfline_lower": opt(b.lambda0_halfline_lower),
        "kappa_lower": opt(b.kappa_lower),
    })
}

/// A CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: Vec<&'static str>) -> Self {
        Table { name: name.into(), header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush().map_err(|e| CliError::io("<csv>", e))?;
        Ok(())
    }
}

/// CSV cell for a float.
pub fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// What a command produced: a JSON body, tables, and the exit status it asks for.
#[derive(Debug, Clone)]
pub struct Document {
    pub command: String,
    pub body: Value,
    pub tables: Vec<Table>,
    /// Human-readable verdict lines.
    pub notes: Vec<String>,
    pub exit: crate::ExitCode,
}

impl Document {
    pub fn new(command: &str, body: Value) -> Self {
        Document { command: command.into(), body, tables: Vec::new(), notes: Vec::new(), exit: crate::ExitCode::Ok }
    }

    pub fn json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("command".into(), json!(self.command));
        if let Value::Object(b) = &self.body {
            m.extend(b.clone());
        } else {
            m.insert("result".into(), self.body.clone());
        }
        if !self.notes.is_empty() {
            m.insert("notes".into(), json!(self.notes));
        }
        Value::Object(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Prints the document to `stdout` and, with an output directory, writes the
/// JSON report, every table, and a manifest echoing `config`.
pub fn emit<W: Write>(doc: &Document, format: Format, out_dir: Option<&Path>, config: &Value, mut stdout: W) -> Result<()> {
    let io = |e| CliError::io("<stdout>", e);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut stdout, &doc.json())?;
            writeln!(stdout).map_err(io)?;
        }
        Format::Csv => match doc.tables.first() {
            Some(t) => {
                t.write(&mut stdout)?;
                for n in &doc.notes {
                    eprintln!("{n}");
                }
            }
            None => {
                serde_json::to_writer_pretty(&mut stdout, &doc.json())?;
                writeln!(stdout).map_err(io)?;
            }
        },
    }
    let Some(dir) = out_dir else { return Ok(()) };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut outputs: Vec<PathBuf> = Vec::new();
    let report = dir.join(format!("{}.json", doc.command.replace(' ', "_")));
    write_file(&report, serde_json::to_string_pretty(&doc.json())?.as_bytes())?;
    outputs.push(report);
    for t in &doc.tables {
        let path = dir.join(format!("{}.csv", t.name));
        let mut buf = Vec::new();
        t.write(&mut buf)?;
        write_file(&path, &buf)?;
        outputs.push(path);
    }
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": doc.command,
        "config": config,
        "outputs": outputs.iter().map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned())).collect::<Vec<_>>(),
        "exit_code": doc.exit as i32,
    });
    write_file(&dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?.as_bytes())
}
