use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A result plus the provenance needed to reproduce it.
pub struct Report {
    pub result: Value,
    pub seed: Option<u64>,
    /// Optional table for CSV output; otherwise top-level fields become rows.
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Report {
    pub fn new(result: impl serde::Serialize) -> Result<Self> {
        Ok(Self { result: serde_json::to_value(result)?, seed: None, table: None })
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header.iter().map(|s| s.to_string()).collect(), rows));
        self
    }

    fn to_json(&self, command: &str) -> Value {
        let mut out = Map::new();
        out.insert(
            "provenance".into(),
            json!({
                "command": command,
                "seed": self.seed,
                "version": env!("CARGO_PKG_VERSION"),
            }),
        );
        match &self.result {
            Value::Object(fields) => out.extend(fields.clone()),
            other => {
                out.insert("result".into(), other.clone());
            }
        }
        Value::Object(out)
    }

    fn to_csv(&self, command: &str) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some((header, rows)) => {
                w.write_record(header)?;
                for r in rows {
                    w.write_record(r)?;
                }
            }
            None => {
                w.write_record(["field", "value"])?;
                w.write_record(["command", command])?;
                if let Some(seed) = self.seed {
                    w.write_record(["seed", &seed.to_string()])?;
                }
                if let Value::Object(fields) = &self.result {
                    for (k, v) in fields {
                        let cell = match v {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        w.write_record([k.as_str(), &cell])?;
                    }
                }
            }
        }
        Ok(w.into_inner()?)
    }

    pub fn emit(&self, command: &str, format: Format, output: Option<&Path>) -> Result<()> {
        let bytes = match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json(command))?;
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => self.to_csv(command)?,
        };
        match output {
            Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(&bytes)?,
        }
        Ok(())
    }
}

/// The invocation as a single shell-style string.
pub fn command_line() -> String {
    std::iter::once("rigidlab".to_string())
        .chain(std::env::args().skip(1))
        .map(|a| {
            if a.is_empty() || a.chars().any(|c| c.is_whitespace() || "\"'\\$`".contains(c)) {
                format!("'{}'", a.replace('\'', "'\\''"))
            } else {
                a
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
