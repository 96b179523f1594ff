//! Deterministic JSON and CSV emission.
//!
//! Every float is written with 17 significant digits (`{:.16e}`); non-finite
//! values become `null` in JSON and empty cells in CSV.

use std::io::Write;

use num_complex::Complex64;
use serde::ser::{Serialize, Serializer};
use serde_json::value::RawValue;

/// f64 with fixed-width formatting on serialization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F(pub f64);

pub fn fmt_f64(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

impl Serialize for F {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match fmt_f64(self.0) {
            Some(text) => RawValue::from_string(text).map_err(serde::ser::Error::custom)?.serialize(s),
            None => s.serialize_none(),
        }
    }
}

/// Complex number as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C(pub Complex64);

impl Serialize for C {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [F(self.0.re), F(self.0.im)].serialize(s)
    }
}

pub fn opt(x: Option<f64>) -> Option<F> {
    x.map(F)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.and_then(fmt_f64).unwrap_or_default()))?;
        }
        w.flush()?;
        Ok(())
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Wire<'a> {
            columns: &'a [String],
            rows: Vec<Vec<Option<F>>>,
        }
        Wire { columns: &self.header, rows: self.rows.iter().map(|r| r.iter().map(|v| v.map(F)).collect()).collect() }
            .serialize(s)
    }
}

/// Flattens a JSON document into `key,value` rows with dotted paths.
pub fn flatten(value: &serde_json::Value, prefix: &str, out: &mut Vec<(String, String)>) {
    use serde_json::Value;
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(v, &join(k), out)),
        Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| flatten(v, &join(&i.to_string()), out)),
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Number(n) if n.is_f64() => {
            out.push((prefix.to_string(), n.as_f64().and_then(fmt_f64).unwrap_or_default()))
        }
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
