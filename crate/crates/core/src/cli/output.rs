use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "gup-spectra/1";

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_g(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

/// Result of one command: a header and rows, plus free-form metadata that
/// only the JSON envelope carries.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Map<String, Value>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json<C: Serialize>(&self, command: &str, config: &C) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut env = json!({
            "schema": SCHEMA,
            "command": command,
            "config": config,
            "rows": rows,
        });
        if !self.meta.is_empty() {
            env["meta"] = Value::Object(self.meta.clone());
        }
        let mut s = serde_json::to_string_pretty(&env).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// C `%.15g`.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: i32 = 15;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS {
        let mut s = trim_zeros(mantissa).to_string();
        let _ = write!(s, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
        s
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.5, "0.5"),
            (2.9, "2.9"),
            (0.552493781056044, "0.552493781056044"),
            (1.0 / 3.0, "0.333333333333333"),
            (1e-7, "1e-07"),
            (1.5e-5, "1.5e-05"),
            (0.0001, "0.0001"),
            (123456789012345.0, "123456789012345"),
            (1e15, "1e+15"),
            (-2.5e20, "-2.5e+20"),
            (999999999999999.9, "1e+15"),
            (100.0, "100"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x:e}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["n", "E", "note"]);
        t.push(vec![0usize.into(), 0.5.into(), "a,b".into()]);
        t.push(vec![1usize.into(), Cell::Empty, "x".into()]);
        assert_eq!(t.csv(), "n,E,note\n0,0.5,\"a,b\"\n1,,x\n");
    }

    #[test]
    fn json_envelope() {
        let mut t = Table::new(&["n", "E"]);
        t.push(vec![0usize.into(), f64::NAN.into()]);
        let v: Value = serde_json::from_str(&t.json("spectrum", &json!({"tau": 0.1}))).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["rows"][0]["n"], 0);
        assert!(v["rows"][0]["E"].is_null());
        assert!(v.get("meta").is_none());
    }
}
