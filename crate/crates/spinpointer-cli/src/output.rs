//! Deterministic CSV and JSON rendering.
//!
//! Floats are written with 17 significant digits in scientific notation, so a
//! file is a pure function of its rows.

use serde_json::{Map, Value as Json};

use crate::config::Format;

/// Versioned layout of every CSV and JSON document.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Int(i) => Json::from(*i),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map(Json::Number).unwrap_or(Json::Null),
            Cell::Text(s) => Json::from(s.clone()),
            Cell::Bool(b) => Json::from(*b),
        }
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
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
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Values of one column, for tests and checks.
    pub fn column(&self, name: &str) -> Vec<&Cell> {
        let i = self.columns.iter().position(|c| *c == name).expect("known column");
        self.rows.iter().map(|r| &r[i]).collect()
    }

    pub fn render(&self, format: Format, config_json: &str) -> String {
        match format {
            Format::Csv => self.render_csv(config_json),
            Format::Json => self.render_json(config_json),
        }
    }

    pub fn render_csv(&self, config_json: &str) -> String {
        let mut out = format!("# schema={SCHEMA_VERSION}\n# config={config_json}\n");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self, config_json: &str) -> String {
        let records: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    obj.insert((*c).to_string(), v.json());
                }
                Json::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("schema".into(), Json::from(SCHEMA_VERSION));
        doc.insert("config".into(), serde_json::from_str(config_json).unwrap_or(Json::Null));
        doc.insert("records".into(), Json::Array(records));
        let mut text = serde_json::to_string_pretty(&Json::Object(doc)).expect("json renders");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["n_spins", "delta", "rule"]);
        t.push(vec![2usize.into(), (2.0f64 / 3.0).into(), "plus_r".into()]);
        let csv = t.render_csv("{}");
        assert_eq!(csv, "# schema=1\n# config={}\nn_spins,delta,rule\n2,6.6666666666666663e-1,plus_r\n");
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(&["n_spins", "ok"]);
        t.push(vec![4usize.into(), true.into()]);
        let v: Json = serde_json::from_str(&t.render_json(r#"{"n":[4]}"#)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["records"][0]["n_spins"], 4);
        assert_eq!(v["config"]["n"][0], 4);
    }
}
