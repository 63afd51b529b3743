//! Report documents and CSV output.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::{json, Value};
use symdyn::spectra::{ln_big, CountTable, EntropyEstimate};
use symdyn::{Enclosure, Error, Result};

use crate::presentation::Document;

/// An inconclusive or horizon-bounded result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
}

impl Warning {
    pub fn new(code: &str, message: impl Into<String>, horizon: Option<usize>) -> Self {
        Warning {
            code: code.to_string(),
            message: message.into(),
            horizon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input: Document,
    pub options: Value,
    pub results: Value,
    pub warnings: Vec<Warning>,
    pub versions: BTreeMap<String, String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn has_warning(&self, code: &str) -> bool {
        self.warnings.iter().any(|w| w.code == code)
    }
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("symdyn".to_string(), symdyn::VERSION.to_string()),
        (
            "symdyn-cli".to_string(),
            env!("CARGO_PKG_VERSION").to_string(),
        ),
    ])
}

/// JSON number, or null for ±∞ and NaN.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn big(x: &BigUint) -> Value {
    Value::String(x.to_string())
}

pub fn bigs(xs: &[BigUint]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}

pub fn signed_bigs(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn enclosure(e: &Enclosure) -> Value {
    json!({ "lo": num(e.lo), "hi": num(e.hi), "width": num(e.width()) })
}

pub fn estimate(e: &EntropyEstimate) -> Value {
    json!({
        "point": num(e.point),
        "empty_shift": e.point == f64::NEG_INFINITY,
        "slope": e.slope.map(num),
        "ratio": e.ratio.map(num),
        "enclosure": e.enclosure.as_ref().map(enclosure),
        "method": format!("{:?}", e.method).to_lowercase(),
        "horizon": e.horizon,
        "transient": e.transient,
    })
}

/// Writes `n,count,log_count,ratio_to_previous` rows; an empty table is an
/// error and creates no file.
pub fn emit_growth_csv(t: &CountTable, path: &Path) -> Result<()> {
    if t.is_empty() {
        return Err(Error::Input(
            "growth CSV requested for an empty count table".into(),
        ));
    }
    let io = |e: csv::Error| Error::Input(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["n", "count", "log_count", "ratio_to_previous"])
        .map_err(io)?;
    let mut prev: Option<&BigUint> = None;
    for (n, c) in t.iter() {
        let log = ln_big(c);
        let ratio = match prev {
            Some(p) if p.bits() > 0 => (ln_big(c) - ln_big(p)).exp().to_string(),
            _ => String::new(),
        };
        let log = if log.is_finite() {
            log.to_string()
        } else {
            String::new()
        };
        w.write_record([n.to_string(), c.to_string(), log, ratio])
            .map_err(io)?;
        prev = Some(c);
    }
    w.flush()
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}
