//! The output record: `schema_version`, `command`, `params`, an optional
//! `summary`, and flat rows sharing one column set.
//!
//! Numbers are written with 17 significant digits, so a re-parse gives back
//! the exact f64. Non-finite numbers become `null` in JSON and an empty field
//! in CSV.

use std::io::{self, Write};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Num(f64),
    Int(i64),
    Str(String),
    Bool(bool),
    Null,
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u32> for Field {
    fn from(v: u32) -> Self {
        Field::Int(v as i64)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Str(v.to_owned())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Str(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Null, Into::into)
    }
}

/// 17 significant digits, or None when not finite.
pub fn fmt_num(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.16e}"))
}

impl Field {
    fn json(&self) -> String {
        match self {
            Field::Num(v) => fmt_num(*v).unwrap_or_else(|| "null".into()),
            Field::Int(v) => v.to_string(),
            Field::Str(s) => serde_json::to_string(s).expect("strings always serialize"),
            Field::Bool(b) => b.to_string(),
            Field::Null => "null".into(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Field::Num(v) => fmt_num(*v).unwrap_or_default(),
            Field::Int(v) => v.to_string(),
            Field::Str(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        }
    }
}

pub type Pairs = Vec<(&'static str, Field)>;

#[derive(Clone, Debug, PartialEq)]
pub struct OutputRecord {
    pub command: &'static str,
    pub params: Pairs,
    pub summary: Pairs,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl OutputRecord {
    pub fn new(command: &'static str, params: Pairs, columns: Vec<&'static str>) -> Self {
        OutputRecord { command, params, summary: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.columns.len(), "row does not match the column set");
        self.rows.push(row);
    }

    pub fn write_json<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        let obj = |pairs: &mut dyn Iterator<Item = (&str, &Field)>| {
            let body: Vec<String> = pairs.map(|(k, v)| format!("{}:{}", Field::Str(k.into()).json(), v.json())).collect();
            format!("{{{}}}", body.join(","))
        };
        write!(w, "{{\"schema_version\":\"{SCHEMA_VERSION}\",\"command\":\"{}\"", self.command)?;
        write!(w, ",\"params\":{}", obj(&mut self.params.iter().map(|(k, v)| (*k, v))))?;
        write!(w, ",\"summary\":{}", obj(&mut self.summary.iter().map(|(k, v)| (*k, v))))?;
        write!(w, ",\"rows\":[")?;
        for (i, row) in self.rows.iter().enumerate() {
            let sep = if i == 0 { "\n" } else { ",\n" };
            write!(w, "{sep}{}", obj(&mut self.columns.iter().copied().zip(row)))?;
        }
        writeln!(w, "]}}")
    }

    /// RFC 4180; the header is the column set, and the summary is not part of it.
    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Field::csv))?;
        }
        out.flush()
    }
}
