//! Result rows and their CSV / JSON renderings.

use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Int(i64),
    UInt(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::UInt(v) => v.to_string(),
            Field::Float(v) => format_float(*v),
            Field::Text(s) => csv_escape(s),
            Field::Bool(b) => b.to_string(),
            Field::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) => Value::from(*v),
            Field::UInt(v) => Value::from(*v),
            Field::Float(v) if v.is_finite() => Value::from(*v),
            Field::Float(v) => Value::from(format_float(*v)),
            Field::Text(s) => Value::from(s.clone()),
            Field::Bool(b) => Value::from(*b),
            Field::Missing => Value::Null,
        }
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::UInt(v as u64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::UInt(v)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Field::Missing)
    }
}

/// 17 significant digits.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One output row: named fields in a fixed column order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ResultRecord {
    pub fields: Vec<(String, Field)>,
}

impl ResultRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: impl Into<Field>) -> Self {
        self.fields.push((name.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, name: &str, value: impl Into<Field>) {
        self.fields.push((name.to_string(), value.into()));
    }

    pub fn get(&self, name: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn columns(&self) -> Vec<&str> {
        self.fields.iter().map(|(k, _)| k.as_str()).collect()
    }
}

/// CSV with a header row; the header is the union of columns in first-seen
/// order, missing cells left empty.
pub fn to_csv(records: &[ResultRecord]) -> String {
    let mut header: Vec<String> = Vec::new();
    for r in records {
        for (k, _) in &r.fields {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut out = header.join(",");
    out.push('\n');
    for r in records {
        let row: Vec<String> = header
            .iter()
            .map(|h| r.get(h).map(Field::csv).unwrap_or_default())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(records: &[ResultRecord]) -> String {
    let rows: Vec<Value> = records
        .iter()
        .map(|r| {
            let mut m = Map::new();
            for (k, v) in &r.fields {
                m.insert(k.clone(), v.json());
            }
            Value::Object(m)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON values serialize");
    s.push('\n');
    s
}
