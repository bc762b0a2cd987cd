//! Canonical JSON: sorted object keys, two-space indentation, trailing newline.
//!
//! Rationals are already strings `"p/q"` in every schema, so no floats appear.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub fn to_canonical<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's Value keeps object keys in a BTreeMap
    let v = serde_json::to_value(value).map_err(|e| Error::Invariant(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Invariant(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses `text` as `T`, reporting the position of syntax errors.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })
}

/// Where `text` first departs from the canonical form of the `T` it
/// encodes, as 1-based `(line, column)`; `None` if it is canonical.
pub fn canonical_mismatch<T: Serialize + DeserializeOwned>(text: &str) -> Result<Option<(usize, usize)>> {
    let parsed: T = parse(text)?;
    let canon = to_canonical(&parsed)?;
    if canon == text {
        return Ok(None);
    }
    let (mut line, mut col) = (1, 1);
    for (a, b) in canon.chars().zip(text.chars()) {
        if a != b {
            return Ok(Some((line, col)));
        }
        if a == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    Ok(Some((line, col)))
}

/// Canonical form of arbitrary JSON text, for documents without a schema.
pub fn canonicalize_value(text: &str) -> Result<String> {
    to_canonical(&parse::<Value>(text)?)
}
