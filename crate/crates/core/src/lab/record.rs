use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Map, Value as Json};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// One cell of an experiment record.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    /// Exact integer, serialized as a decimal string.
    Int(BigInt),
    /// Exact rational, serialized as `num/den` (or just `num` when integral).
    Rational(Rational),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Value {
    pub fn int(x: impl Into<BigInt>) -> Self {
        Value::Int(x.into())
    }

    /// Whether the serialized form parses back to the same value exactly.
    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Rational(_) | Value::Bool(_))
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Int(_) | Value::Rational(_) | Value::Text(_) => Json::String(self.to_string()),
            Value::Float(x) => serde_json::Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Value::Bool(b) => Json::Bool(*b),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(x) => write!(f, "{x}"),
            Value::Rational(r) => write!(f, "{r}"),
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(x: $t) -> Self {
                Value::Int(BigInt::from(x))
            }
        }
    )*};
}
int_value!(u32, u64, u128, usize, i64);

impl From<BigInt> for Value {
    fn from(x: BigInt) -> Self {
        Value::Int(x)
    }
}

impl From<Rational> for Value {
    fn from(x: Rational) -> Self {
        Value::Rational(x)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

/// One output row: the trial coordinates plus named quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub p: u64,
    pub family: String,
    /// Realized `|A|`; `None` when the trial failed before `A` existed.
    pub n: Option<usize>,
    pub seed: u64,
    pub trial_index: usize,
    pub quantities: Vec<(String, Value)>,
    pub error: Option<String>,
}

impl ExperimentRecord {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.quantities
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v)
    }

    pub fn is_failure(&self) -> bool {
        self.error.is_some()
    }
}

pub const BASE_COLUMNS: [&str; 5] = ["p", "family", "n", "seed", "trial"];

/// A finished experiment: fixed column order plus rows ordered by `(p, trial)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Quantity columns, between the base columns and the trailing `error`.
    pub columns: Vec<&'static str>,
    pub records: Vec<ExperimentRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(Error::BadParameter(format!(
                "format must be csv|jsonl, got {s:?}"
            ))),
        }
    }
}

impl Table {
    pub fn header(&self) -> Vec<&'static str> {
        BASE_COLUMNS
            .iter()
            .copied()
            .chain(self.columns.iter().copied())
            .chain(std::iter::once("error"))
            .collect()
    }

    /// True when there is at least one row and every row failed.
    pub fn all_failed(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(ExperimentRecord::is_failure)
    }

    fn row(&self, rec: &ExperimentRecord) -> Vec<String> {
        let mut row = vec![
            rec.p.to_string(),
            rec.family.clone(),
            rec.n.map(|n| n.to_string()).unwrap_or_default(),
            rec.seed.to_string(),
            rec.trial_index.to_string(),
        ];
        for col in &self.columns {
            row.push(rec.get(col).map(Value::to_string).unwrap_or_default());
        }
        row.push(rec.error.clone().unwrap_or_default());
        row
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(self.header()).map_err(csv_err)?;
        for rec in &self.records {
            w.write_record(self.row(rec)).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for rec in &self.records {
            let mut obj = Map::new();
            obj.insert("p".into(), Json::from(rec.p));
            obj.insert("family".into(), Json::from(rec.family.clone()));
            obj.insert("n".into(), rec.n.map_or(Json::Null, Json::from));
            obj.insert("seed".into(), Json::String(rec.seed.to_string()));
            obj.insert("trial".into(), Json::from(rec.trial_index));
            for col in &self.columns {
                obj.insert(
                    col.to_string(),
                    rec.get(col).map_or(Json::Null, Value::to_json),
                );
            }
            obj.insert(
                "error".into(),
                rec.error.clone().map_or(Json::Null, Json::String),
            );
            serde_json::to_writer(&mut out, &Json::Object(obj))
                .map_err(|e| Error::Io(e.to_string()))?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write<W: Write>(&self, out: W, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Jsonl => self.write_jsonl(out),
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf, format)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Writes `table` to `path` in the given format.
pub fn emit(table: &Table, path: &Path, format: Format) -> Result<()> {
    let file = std::fs::File::create(path)?;
    table.write(std::io::BufWriter::new(file), format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rational, ratio};

    fn record(quantities: Vec<(&str, Value)>) -> ExperimentRecord {
        ExperimentRecord {
            p: 5,
            family: "elements:1;2".into(),
            n: Some(2),
            seed: 7,
            trial_index: 0,
            quantities: quantities
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            error: None,
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table {
            columns: vec!["n_total"],
            records: vec![],
        };
        assert_eq!(
            t.render(Format::Csv).unwrap(),
            "p,family,n,seed,trial,n_total,error\n"
        );
        assert_eq!(t.render(Format::Jsonl).unwrap(), "");
        assert!(!t.all_failed());
    }

    #[test]
    fn one_record_is_two_lines() {
        let t = Table {
            columns: vec!["dev", "big", "r", "ok"],
            records: vec![record(vec![
                ("dev", ratio(424, 25).into()),
                ("big", Value::from(u128::MAX)),
                ("r", 0.5.into()),
                ("ok", true.into()),
            ])],
        };
        let csv = t.render(Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            format!("5,elements:1;2,2,7,0,424/25,{},0.5,true,", u128::MAX)
        );
        let json = t.render(Format::Jsonl).unwrap();
        assert_eq!(json.lines().count(), 1);
        let v: Json = serde_json::from_str(json.trim()).unwrap();
        assert_eq!(v["dev"], Json::String("424/25".into()));
        assert_eq!(v["big"], Json::String(u128::MAX.to_string()));
        assert_eq!(v["error"], Json::Null);
    }

    #[test]
    fn exact_values_round_trip() {
        for v in [
            Value::from(ratio(-7, 3)),
            Value::from(ratio(10, 5)),
            Value::from(BigInt::from(3).pow(90)),
        ] {
            assert!(v.is_exact());
            let parsed = parse_rational(&v.to_string()).unwrap();
            match v {
                Value::Rational(r) => assert_eq!(parsed, r),
                Value::Int(i) => assert_eq!(parsed, Rational::from_integer(i)),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn floats_print_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 12345.678] {
            let s = Value::Float(x).to_string();
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn failures_are_detected() {
        let mut r = record(vec![]);
        r.error = Some("boom".into());
        let t = Table {
            columns: vec!["x"],
            records: vec![r],
        };
        assert!(t.all_failed());
        assert!(t.render(Format::Csv).unwrap().ends_with(",,boom\n"));
    }
}
