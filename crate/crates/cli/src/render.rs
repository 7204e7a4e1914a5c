//! Deterministic serialization helpers.
//!
//! * JSON objects use sorted keys; every exact quantity is a decimal or
//!   fraction string, floats appear only for truncated prime products.
//! * TSV tables are plain tab-joined rows with a header line.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};

use crate::job::AppError;

/// Writes to the output path, or stdout when none is given.
pub fn emit(output: Option<&Path>, text: &str) -> Result<(), AppError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| AppError { code: 1, message: format!("cannot write {}: {e}", path.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

/// Tab-joined rows with a trailing newline.
pub fn tsv(rows: &[Vec<String>]) -> String {
    let mut text = String::new();
    for row in rows {
        text.push_str(&row.join("\t"));
        text.push('\n');
    }
    text
}

pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (key, value) in entries {
        map.insert(key.to_string(), value);
    }
    Value::Object(map)
}

pub fn fraction(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ratio_of(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
