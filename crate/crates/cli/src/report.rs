//! A command's result in the three output formats.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug)]
pub struct Report {
    command: &'static str,
    body: Map<String, Value>,
    lines: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    violations: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            body: Map::new(),
            lines: Vec::new(),
            header: Vec::new(),
            rows: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub fn field<T: Serialize + ?Sized>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.body.insert(key.to_string(), v);
    }

    /// Inserts every field of a serialized struct at the top level.
    pub fn merge<T: Serialize>(&mut self, value: &T) {
        if let Value::Object(m) = serde_json::to_value(value).expect("report values serialize") {
            self.body.extend(m);
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn header(&mut self, cols: &[&str]) {
        self.header = cols.iter().map(|c| c.to_string()).collect();
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn violation(&mut self, s: impl Into<String>) {
        self.violations.push(s.into());
    }

    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human(),
            Format::Json => self.json(),
            Format::Csv => self.csv(),
        }
    }

    fn human(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for v in &self.violations {
            out.push_str("VIOLATION: ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    fn json(&self) -> String {
        let mut m = Map::new();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("command".into(), self.command.into());
        m.extend(self.body.clone());
        m.insert("passed".into(), self.passed().into());
        m.insert("violations".into(), self.violations.clone().into());
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("json");
        s.push('\n');
        s
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>, r: &[String]| w.write_record(r).expect("in-memory csv");
        if self.header.is_empty() {
            write(&mut w, &["field".into(), "value".into()]);
            for (k, v) in &self.body {
                let cell = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                write(&mut w, &[k.clone(), cell]);
            }
        } else {
            write(&mut w, &self.header);
            for r in &self.rows {
                write(&mut w, r);
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }
}
