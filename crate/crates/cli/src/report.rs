//! Tabular results and their JSON and CSV renderings.
//!
//! Numbers are printed with 17 significant digits so that every `f64`
//! survives a round trip through either format unchanged, and both formats
//! carry the identical digit strings.

use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::config::StateSpec;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(usize),
    Text(String),
    /// A value that is undefined at this point, such as the argument of a
    /// vanishing overlap.
    Null,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Num(x) if x.is_finite() => format_number(*x),
            Field::Num(_) | Field::Null => String::new(),
            Field::Int(n) => n.to_string(),
            Field::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Field::Num(x) if x.is_finite() => number(*x),
            Field::Num(_) | Field::Null => Value::Null,
            Field::Int(n) => Value::from(*n),
            Field::Text(s) => Value::String(s.clone()),
        }
    }
}

pub fn format_number(x: f64) -> String {
    json_number(x).to_string()
}

fn json_number(x: f64) -> Number {
    Number::from_str(&format!("{x:.16e}")).expect("formatted float is a JSON number")
}

pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(json_number(x))
}

pub fn state_json(spec: &StateSpec) -> Value {
    let amps = spec
        .amplitudes
        .iter()
        .map(|[re, im]| Value::Array(vec![number(*re), number(*im)]))
        .collect();
    let mut m = Map::new();
    m.insert("basis".into(), Value::String(spec.basis.clone()));
    m.insert("amplitudes".into(), Value::Array(amps));
    Value::Object(m)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    fn row_object(&self, row: &[Field]) -> Map<String, Value> {
        self.columns
            .iter()
            .zip(row)
            .map(|(c, f)| (c.clone(), f.to_json()))
            .collect()
    }
}

/// A finished result: either a single record (possibly with structured
/// extras that only JSON can carry) or a list of records.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub single: bool,
    pub extras: Vec<(String, Value)>,
}

impl Report {
    pub fn records(table: Table) -> Self {
        Report {
            table,
            single: false,
            extras: Vec::new(),
        }
    }

    pub fn record(table: Table, extras: Vec<(String, Value)>) -> Self {
        Report {
            table,
            single: true,
            extras,
        }
    }

    pub fn to_json(&self) -> String {
        let value = if self.single {
            let mut obj = self
                .table
                .rows
                .first()
                .map(|r| self.table.row_object(r))
                .unwrap_or_default();
            for (k, v) in &self.extras {
                obj.insert(k.clone(), v.clone());
            }
            Value::Object(obj)
        } else {
            Value::Array(
                self.table
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.table.row_object(r)))
                    .collect(),
            )
        };
        let mut out = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Config(format!("cannot write CSV: {e}"));
        w.write_record(&self.table.columns).map_err(io)?;
        for row in &self.table.rows {
            w.write_record(row.iter().map(Field::render)).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Config(format!("cannot write CSV: {e}")))?;
        Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_through_both_formats() {
        for x in [std::f64::consts::PI, -1e-300, 0.1 + 0.2, 123456.789] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert_eq!(number(x).to_string(), s);
        }
    }

    #[test]
    fn null_fields_are_empty_in_csv() {
        let mut t = Table::new(vec!["a".into(), "b".into()]);
        t.rows.push(vec![Field::Num(1.0), Field::Null]);
        let r = Report::records(t);
        assert_eq!(r.to_csv().unwrap(), "a,b\n1.0000000000000000e+0,\n");
        assert!(r.to_json().contains("\"b\": null"));
    }
}
