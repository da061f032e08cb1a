//! Report assembly and the md/json/csv emitters.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub provenance: Vec<String>,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            results: Value::Object(Map::new()),
            provenance: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        if let Value::Object(m) = &mut self.results {
            m.insert(key.to_string(), value);
        }
    }

    pub fn note(&mut self, line: &str) {
        self.provenance.push(line.to_string());
    }

    pub fn to_value(&self) -> Value {
        serde_json::json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "provenance": self.provenance,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Md => self.markdown(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["section", "key", "value"]).expect("in-memory write");
        w.write_record(["command", "", self.command.as_str()]).expect("in-memory write");
        for (section, value) in [("inputs", &self.inputs), ("results", &self.results)] {
            let mut rows = Vec::new();
            flatten("", value, &mut rows);
            for (k, v) in rows {
                w.write_record([section, k.as_str(), v.as_str()]).expect("in-memory write");
            }
        }
        for (i, p) in self.provenance.iter().enumerate() {
            w.write_record(["provenance", i.to_string().as_str(), p.as_str()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    fn markdown(&self) -> String {
        let mut out = format!("# kummerlab {}\n\n", self.command);
        out.push_str("## Inputs\n\n");
        key_value_table(&self.inputs, &mut out);
        out.push_str("## Results\n\n");
        if let Value::Object(m) = &self.results {
            let mut scalars = Map::new();
            for (k, v) in m {
                match record_rows(v) {
                    Some(rows) => {
                        out.push_str(&format!("### {k}\n\n"));
                        record_table(&rows, &mut out);
                    }
                    None => {
                        scalars.insert(k.clone(), v.clone());
                    }
                }
            }
            if !scalars.is_empty() {
                key_value_table(&Value::Object(scalars), &mut out);
            }
        }
        if !self.provenance.is_empty() {
            out.push_str("## Provenance\n\n");
            for p in &self.provenance {
                out.push_str(&format!("- {p}\n"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

/// Dotted-path rows for every leaf. Arrays of scalars stay on one row.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) if m.is_empty() && prefix.is_empty() => {}
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::Array(a) => out.push((prefix.to_string(), a.iter().map(scalar).collect::<Vec<_>>().join(" "))),
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn key_value_table(v: &Value, out: &mut String) {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    if rows.is_empty() {
        out.push_str("(none)\n\n");
        return;
    }
    out.push_str("| key | value |\n|---|---|\n");
    for (k, x) in rows {
        out.push_str(&format!("| {} | {} |\n", escape(&k), escape(&x)));
    }
    out.push('\n');
}

fn record_rows(v: &Value) -> Option<Vec<Vec<(String, String)>>> {
    let a = v.as_array()?;
    if a.is_empty() || !a.iter().all(Value::is_object) {
        return None;
    }
    Some(
        a.iter()
            .map(|x| {
                let mut rows = Vec::new();
                flatten("", x, &mut rows);
                rows
            })
            .collect(),
    )
}

fn record_table(rows: &[Vec<(String, String)>], out: &mut String) {
    let mut columns: Vec<String> = Vec::new();
    for r in rows {
        for (k, _) in r {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    out.push_str(&format!("| {} |\n", columns.iter().map(|c| escape(c)).collect::<Vec<_>>().join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(columns.len())));
    for r in rows {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| r.iter().find(|(k, _)| k == c).map(|(_, v)| escape(v)).unwrap_or_default())
            .collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    out.push('\n');
}

fn escape(s: &str) -> String {
    s.replace('|', "\\|")
}
