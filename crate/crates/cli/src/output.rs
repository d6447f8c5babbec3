use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    JsonLines,
    Csv,
    Human,
}

/// Writes records in the chosen format. The first record of every run is
/// the full run configuration.
pub struct Emitter {
    format: Format,
    out: io::Stdout,
    csv_columns: Vec<String>,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(v: &Value) -> String {
    let s = scalar(v);
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

impl Emitter {
    pub fn new(format: Format) -> Self {
        Emitter { format, out: io::stdout(), csv_columns: Vec::new() }
    }

    pub fn header(&mut self, config: &impl Serialize) -> io::Result<()> {
        let value = serde_json::to_value(config).expect("config serializes");
        match self.format {
            Format::Csv => writeln!(self.out, "# config {value}"),
            _ => self.record("config", value),
        }
    }

    /// Emits `{"kind": kind, ...fields}`.
    pub fn record(&mut self, kind: &str, fields: impl Serialize) -> io::Result<()> {
        let mut map = Map::new();
        map.insert("kind".into(), Value::String(kind.into()));
        match serde_json::to_value(fields).expect("record serializes") {
            Value::Object(obj) => map.extend(obj),
            Value::Null => {}
            other => {
                map.insert("value".into(), other);
            }
        }
        match self.format {
            Format::JsonLines => writeln!(self.out, "{}", Value::Object(map)),
            Format::Csv => {
                let columns: Vec<String> = map.keys().cloned().collect();
                if columns != self.csv_columns {
                    writeln!(self.out, "{}", columns.join(","))?;
                    self.csv_columns = columns;
                }
                let row: Vec<String> = map.values().map(csv_field).collect();
                writeln!(self.out, "{}", row.join(","))
            }
            Format::Human => {
                let mut line = String::new();
                for (i, (k, v)) in map.iter().enumerate() {
                    if i == 0 {
                        line.push_str(&scalar(v));
                        line.push(':');
                    } else {
                        line.push_str(&format!(" {k}={}", scalar(v)));
                    }
                }
                writeln!(self.out, "{line}")
            }
        }
    }
}
