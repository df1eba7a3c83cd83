//! Tables and their CSV/JSON rendering.
//!
//! Fractions shown as percentages get two decimals, basis points two
//! decimals, other numbers six significant digits. `--raw` prints every
//! number at full precision in the same unit.

use lst_core::io::{fmt_num, fmt_pct};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    /// A fraction, printed ×100.
    Pct(f64),
    /// A fraction, printed ×10⁴.
    Bp(f64),
    Text(String),
}

impl Cell {
    fn render(&self, raw: bool) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) if raw => format!("{x}"),
            Cell::Num(x) => fmt_num(*x),
            Cell::Pct(x) if raw => format!("{}", 100.0 * x),
            Cell::Pct(x) => fmt_pct(*x),
            Cell::Bp(x) if raw => format!("{}", 1e4 * x),
            Cell::Bp(x) => fmt_pct(100.0 * x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self, raw: bool) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.clone()),
            // the rendered text is the value, so JSON and CSV agree
            other => {
                let s = other.render(raw);
                s.parse::<f64>().map(Value::from).unwrap_or(Value::String(s))
            }
        }
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_columns(name: &str, columns: Vec<String>) -> Self {
        Table { name: name.to_string(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "{}", self.name);
        self.rows.push(row);
    }

    pub fn csv(&self, raw: bool) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| quote(&c.render(raw))).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json(&self, raw: bool) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(|c| c.json(raw))).collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Renders a set of tables as one document. A single CSV table prints bare;
/// several are each headed by `# name` and separated by a blank line.
pub fn render(tables: &[Table], format: Format, raw: bool) -> String {
    match format {
        Format::Csv if tables.len() == 1 => tables[0].csv(raw),
        Format::Csv => tables.iter().map(|t| format!("# {}\n{}", t.name, t.csv(raw))).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let obj: Map<String, Value> = tables.iter().map(|t| (t.name.clone(), t.json(raw))).collect();
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("tables serialise");
            s.push('\n');
            s
        }
    }
}
