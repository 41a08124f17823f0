//! Row values and the CSV / JSON writers.

use std::io::Write;

use serde_json::{Map, Value as Json};
use xxz_ness::LogScalar;

/// One cell of a scan row.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    /// Expanded to `<name>_sign`, `<name>_log10` and a linear `<name>` column
    /// that stays empty when the value does not fit an `f64`.
    Log(LogScalar),
    Text(String),
    Empty,
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<u32> for Value {
    fn from(x: u32) -> Self {
        Value::Int(x as i64)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<LogScalar> for Value {
    fn from(x: LogScalar) -> Self {
        Value::Log(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_owned())
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(x: Option<T>) -> Self {
        x.map_or(Value::Empty, Into::into)
    }
}

/// Ordered named cells plus a status (`ok` or an error message).
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<(&'static str, Value)>,
    pub error: Option<String>,
}

impl Row {
    pub fn new() -> Self {
        Row {
            cells: Vec::new(),
            error: None,
        }
    }

    pub fn push(&mut self, name: &'static str, v: impl Into<Value>) -> &mut Self {
        self.cells.push((name, v.into()));
        self
    }

    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

impl Default for Row {
    fn default() -> Self {
        Row::new()
    }
}

fn float_text(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        String::new()
    }
}

fn expand(name: &str, v: &Value) -> Vec<(String, String)> {
    match v {
        Value::Int(i) => vec![(name.to_owned(), i.to_string())],
        Value::Float(x) => vec![(name.to_owned(), float_text(*x))],
        Value::Text(s) => vec![(name.to_owned(), s.clone())],
        Value::Empty => vec![(name.to_owned(), String::new())],
        Value::Log(l) => {
            let (sign, log10) = if l.is_zero() {
                ("0".to_owned(), String::new())
            } else {
                (l.sign().to_string(), float_text(l.log10_abs()))
            };
            vec![
                (format!("{name}_sign"), sign),
                (format!("{name}_log10"), log10),
                (name.to_owned(), l.to_f64_checked().map(float_text).unwrap_or_default()),
            ]
        }
    }
}

/// Column names taken from the first successful row; failed rows fill
/// the value columns with blanks.
fn header(rows: &[Row]) -> Vec<String> {
    let template = rows.iter().find(|r| !r.failed()).or(rows.first());
    let mut cols: Vec<String> = template
        .map(|r| r.cells.iter().flat_map(|(n, v)| expand(n, v)).map(|(n, _)| n).collect())
        .unwrap_or_default();
    cols.push("status".to_owned());
    cols
}

fn flatten(row: &Row, cols: &[String]) -> Vec<String> {
    let pairs: Vec<(String, String)> = row.cells.iter().flat_map(|(n, v)| expand(n, v)).collect();
    cols.iter()
        .map(|c| {
            if c == "status" {
                row.error.as_ref().map_or_else(|| "ok".to_owned(), |e| format!("error: {e}"))
            } else {
                pairs.iter().find(|(n, _)| n == c).map(|(_, v)| v.clone()).unwrap_or_default()
            }
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let cols = header(rows);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
    w.write_record(&cols)?;
    for r in rows {
        w.write_record(flatten(r, &cols))?;
    }
    w.flush()?;
    Ok(())
}

fn json_cell(v: &Value) -> Json {
    match v {
        Value::Int(i) => Json::from(*i),
        Value::Float(x) => serde_json::Number::from_f64(*x).map_or(Json::Null, Json::Number),
        Value::Text(s) => Json::from(s.clone()),
        Value::Empty => Json::Null,
        Value::Log(l) => {
            let mut m = Map::new();
            m.insert("sign".into(), Json::from(l.sign()));
            m.insert(
                "log10".into(),
                if l.is_zero() { Json::Null } else { json_cell(&Value::Float(l.log10_abs())) },
            );
            m.insert("linear".into(), l.to_f64_checked().map_or(Json::Null, |x| json_cell(&Value::Float(x))));
            Json::Object(m)
        }
    }
}

pub fn rows_to_json(rows: &[Row]) -> Json {
    Json::Array(
        rows.iter()
            .map(|r| {
                let mut m = Map::new();
                for (n, v) in &r.cells {
                    m.insert((*n).to_owned(), json_cell(v));
                }
                m.insert(
                    "status".into(),
                    Json::from(r.error.as_ref().map_or_else(|| "ok".to_owned(), |e| format!("error: {e}"))),
                );
                Json::Object(m)
            })
            .collect(),
    )
}
