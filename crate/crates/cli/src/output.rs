use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;

/// A titled table of text cells.
#[derive(Clone, Debug)]
pub struct Table {
    pub heading: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(heading: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            heading: heading.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> =
                    self.columns.iter().zip(r).map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("heading".into(), Value::String(self.heading.clone()));
        m.insert("rows".into(), Value::Array(rows));
        if !self.notes.is_empty() {
            m.insert("notes".into(), self.notes.iter().cloned().map(Value::String).collect());
        }
        Value::Object(m)
    }
}

/// Command output: a header block, tables and a closing summary.
#[derive(Clone, Debug)]
pub struct Document {
    pub title: String,
    pub meta: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub summary: Vec<String>,
    pub passed: bool,
}

impl Document {
    pub fn new(title: impl Into<String>) -> Self {
        Document { title: title.into(), meta: Vec::new(), tables: Vec::new(), summary: Vec::new(), passed: true }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, table: Table) {
        self.tables.push(table);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Markdown => self.write_markdown(out),
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.to_json()).expect("documents serialize");
                writeln!(out, "{text}")
            }
        }
    }

    fn write_markdown(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "# {}", self.title)?;
        writeln!(out)?;
        for (k, v) in &self.meta {
            writeln!(out, "- {k}: {v}")?;
        }
        for t in &self.tables {
            writeln!(out)?;
            writeln!(out, "## {}", t.heading)?;
            writeln!(out)?;
            if t.rows.is_empty() {
                writeln!(out, "(none)")?;
            } else {
                writeln!(out, "| {} |", t.columns.join(" | "))?;
                writeln!(out, "|{}", "---|".repeat(t.columns.len()))?;
                for r in &t.rows {
                    let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                    writeln!(out, "| {} |", cells.join(" | "))?;
                }
            }
            if !t.notes.is_empty() {
                writeln!(out)?;
                for n in &t.notes {
                    writeln!(out, "- {n}")?;
                }
            }
        }
        if !self.summary.is_empty() {
            writeln!(out)?;
            for s in &self.summary {
                writeln!(out, "{s}")?;
            }
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("title".into(), Value::String(self.title.clone()));
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        m.insert("meta".into(), Value::Object(meta));
        m.insert("tables".into(), self.tables.iter().map(Table::to_json).collect());
        m.insert("summary".into(), self.summary.iter().cloned().map(Value::String).collect());
        m.insert("passed".into(), Value::Bool(self.passed));
        Value::Object(m)
    }
}

pub fn residual(r: f64) -> String {
    format!("{r:.3e}")
}

pub fn verdict(passed: bool) -> String {
    if passed { "pass" } else { "FAIL" }.to_string()
}

/// Shortest round-trip form of a float.
pub fn number(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}
