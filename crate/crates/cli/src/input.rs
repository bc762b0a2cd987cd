//! Reading equations, series and representations from paths, stdin or inline JSON.

use std::io::Read;

use mahler_core::json;
use mahler_core::mahler::{solve_series, MahlerEquation};
use mahler_core::regular::LinearRepresentation;
use mahler_core::series::LaurentSeries;
use serde_json::Value;

use crate::CliError;

/// `-` reads stdin, text starting with `{` or `[` is inline JSON, anything
/// else is a path.
pub fn read_source(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::usage(format!("{arg}: {e}")))
}

fn value(text: &str) -> Result<Value, CliError> {
    json::parse::<Value>(text).map_err(CliError::from)
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::malformed(format!("{what}: {e}")))
}

/// An equation, plus the prefix stored next to it when the input is a
/// corpus item.
pub struct EquationInput {
    pub equation: MahlerEquation,
    pub prefix: Option<LaurentSeries>,
}

/// Accepts `{"k", "coeffs"}`, a corpus item, or a bare coefficient list
/// together with `--k`.
pub fn equation(arg: &str, k: Option<usize>) -> Result<EquationInput, CliError> {
    let v = value(&read_source(arg)?)?;
    let (equation, prefix) = match v {
        Value::Array(_) => {
            let k = k.ok_or_else(|| CliError::usage("a bare coefficient list needs --k"))?;
            let coeffs = from_value(v, "coefficients")?;
            let eq = MahlerEquation::new(k, coeffs).map_err(CliError::from_input)?;
            (eq, None)
        }
        Value::Object(mut map) if map.contains_key("equation") => {
            let eq = from_value(map.remove("equation").unwrap_or(Value::Null), "equation")?;
            let prefix = match map.remove("prefix") {
                Some(p) => Some(from_value(p, "prefix")?),
                None => None,
            };
            (eq, prefix)
        }
        other => (from_value(other, "equation")?, None),
    };
    if let Some(k) = k {
        if k != equation.k() {
            return Err(CliError::usage(format!(
                "--k {k} differs from the equation's k = {}",
                equation.k()
            )));
        }
    }
    Ok(EquationInput { equation, prefix })
}

/// Accepts a series object, a corpus item (its prefix), or a bare list of
/// coefficients starting at `z^0`.
pub fn series(arg: &str) -> Result<LaurentSeries, CliError> {
    let v = value(&read_source(arg)?)?;
    match v {
        Value::Array(_) => {
            let coeffs: Vec<String> = from_value(v, "coefficients")?;
            let parsed = coeffs
                .iter()
                .map(|c| mahler_core::algebra::rational::parse_rational(c))
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::from_input)?;
            Ok(LaurentSeries::new(0, parsed))
        }
        Value::Object(mut map) if map.contains_key("prefix") => {
            from_value(map.remove("prefix").unwrap_or(Value::Null), "prefix")
        }
        other => from_value(other, "series"),
    }
}

pub fn representation(arg: &str) -> Result<LinearRepresentation, CliError> {
    from_value(value(&read_source(arg)?)?, "representation")
}

/// The series to work with: `--series`, else the stored prefix, else the
/// first solution by coefficient comparison modulo `z^order`.
pub struct Prefix {
    pub series: LaurentSeries,
    pub source: &'static str,
    /// Dimension of the solution space when the prefix was solved for.
    pub solution_space_dim: Option<usize>,
}

pub fn prefix(input: &EquationInput, series_arg: Option<&str>, order: i64) -> Result<Prefix, CliError> {
    if let Some(arg) = series_arg {
        return Ok(Prefix {
            series: series(arg)?,
            source: "argument",
            solution_space_dim: None,
        });
    }
    if let Some(p) = &input.prefix {
        return Ok(Prefix {
            series: p.clone(),
            source: "input",
            solution_space_dim: None,
        });
    }
    let basis = solve_series(&input.equation, order).map_err(CliError::from_input)?;
    Ok(Prefix {
        solution_space_dim: Some(basis.len()),
        series: basis.into_iter().next().expect("solve_series returns a nonempty basis"),
        source: "solved",
    })
}
