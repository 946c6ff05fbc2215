//! Dotted parameter paths into a scenario, shared by overrides, sweeps and
//! calibration.
//!
//! `rates.k3`, `initial.u` and `solver.method` address plain fields.
//! Schedules accept either `schedules.sigma_env` (replaces the whole schedule
//! with a constant) or `schedules.sigma_env.1.start_time` /
//! `schedules.sigma_env.0.value` (one segment field).

use serde::Deserialize;
use toml::Value;

use super::{Scenario, ScenarioError};

fn to_value(sc: &Scenario) -> Value {
    Value::try_from(sc).expect("scenario serializes to a TOML value")
}

fn unknown(path: &str) -> ScenarioError {
    ScenarioError::UnknownPath(path.to_owned())
}

fn bad(path: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::BadValue {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn descend<'a>(root: &'a mut Value, path: &str) -> Result<&'a mut Value, ScenarioError> {
    let mut node = root;
    for key in path.split('.') {
        node = match node {
            Value::Table(t) => t.get_mut(key),
            Value::Array(a) => key.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
            _ => None,
        }
        .ok_or_else(|| unknown(path))?;
    }
    Ok(node)
}

fn parse_float(path: &str, raw: &str) -> Result<f64, ScenarioError> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| bad(path, format!("`{raw}` is not a number")))
}

/// Returns a copy of `sc` with `path` set to `raw`. The result is not
/// validated.
pub fn set_path(sc: &Scenario, path: &str, raw: &str) -> Result<Scenario, ScenarioError> {
    let mut root = to_value(sc);
    let node = descend(&mut root, path)?;
    *node = match node {
        Value::Float(_) => Value::Float(parse_float(path, raw)?),
        Value::String(_) => Value::String(raw.trim().to_owned()),
        Value::Array(_) if path.starts_with("schedules.") => {
            let value = parse_float(path, raw)?;
            let mut seg = toml::map::Map::new();
            seg.insert("start_time".into(), Value::Float(0.0));
            seg.insert("value".into(), Value::Float(value));
            Value::Array(vec![Value::Table(seg)])
        }
        _ => return Err(unknown(path)),
    };
    Scenario::deserialize(root).map_err(|e| bad(path, e.message().to_owned()))
}

/// Numeric value at `path`.
pub fn get_path(sc: &Scenario, path: &str) -> Result<f64, ScenarioError> {
    let mut root = to_value(sc);
    match descend(&mut root, path)? {
        Value::Float(f) => Ok(*f),
        _ => Err(unknown(path)),
    }
}

/// Splits `path=value`.
pub fn parse_override(text: &str) -> Result<(String, String), ScenarioError> {
    let (path, value) = text
        .split_once('=')
        .ok_or_else(|| bad(text, "expected path=value"))?;
    Ok((path.trim().to_owned(), value.trim().to_owned()))
}

pub fn apply_override(sc: &Scenario, text: &str) -> Result<Scenario, ScenarioError> {
    let (path, value) = parse_override(text)?;
    set_path(sc, &path, &value)
}
