use std::io::Write;

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Run metadata stamped on every output: which model, which seed, which
/// build.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Meta {
    pub model_hash: Option<String>,
    pub seed: Option<u64>,
}

impl Meta {
    fn json(&self) -> Value {
        let mut m = Map::new();
        m.insert(
            "model_hash".into(),
            self.model_hash.clone().map_or(Value::Null, Value::String),
        );
        m.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        m.insert("version".into(), Value::String(VERSION.into()));
        Value::Object(m)
    }

    fn comment(&self) -> String {
        format!(
            "# model_hash={} seed={} version={}",
            self.model_hash.as_deref().unwrap_or("none"),
            self.seed.map_or("none".to_string(), |s| s.to_string()),
            VERSION
        )
    }
}

/// A command result in both renderings.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub meta: Meta,
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(meta: Meta, json: Value, header: &[&str]) -> Self {
        Report {
            meta,
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut doc = match &self.json {
                    Value::Object(m) => m.clone(),
                    other => {
                        let mut m = Map::new();
                        m.insert("result".into(), other.clone());
                        m
                    }
                };
                doc.insert("meta".into(), self.meta.json());
                let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut out = Vec::new();
                writeln!(out, "{}", self.meta.comment()).expect("in-memory write");
                {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(&self.header).map_err(csv_error)?;
                    for row in &self.rows {
                        w.write_record(row).map_err(csv_error)?;
                    }
                    w.flush().map_err(|e| Error::Compute(e.to_string()))?;
                }
                Ok(String::from_utf8(out).expect("csv output is utf-8"))
            }
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Compute(format!("csv output: {e}"))
}

/// 17 significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn complex_json(z: Complex64) -> Value {
    serde_json::json!({ "re": z.re, "im": z.im })
}

pub fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
