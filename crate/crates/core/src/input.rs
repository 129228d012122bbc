//! Instance files.
//!
//! ```json
//! {"mode": "roots", "p": 3, "roots": ["0", "1", "2", "3", "4", "1/5"], "label": "A"}
//! {"mode": "matrix", "valuations": [[null, 1], [1, null]]}
//! ```

use serde_json::{json, Map, Value};

use crate::conductor::AnalysisInput;
use crate::error::InputError;
use crate::valuation::{parse_rational, Extended, ExtNat, Instance, Prime, ValuationMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub label: Option<String>,
    pub input: AnalysisInput,
}

fn malformed(msg: impl Into<String>) -> InputError {
    InputError::Malformed(msg.into())
}

fn only_fields(obj: &Map<String, Value>, allowed: &[&str], mode: &str) -> Result<(), InputError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(malformed(format!("field {key:?} is not allowed in {mode} mode")));
        }
    }
    Ok(())
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, mode: &str) -> Result<&'a Value, InputError> {
    obj.get(key)
        .ok_or_else(|| malformed(format!("{mode} mode requires field {key:?}")))
}

pub fn parse_instance_file(text: &str, allow_small_genus: bool) -> Result<InstanceFile, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    parse_instance_value(&value, allow_small_genus)
}

pub fn parse_instance_value(value: &Value, allow_small_genus: bool) -> Result<InstanceFile, InputError> {
    let obj = value
        .as_object()
        .ok_or_else(|| malformed("top level must be a JSON object"))?;
    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(malformed("label must be a string")),
    };
    let mode = match obj.get("mode") {
        Some(Value::String(m)) => m.as_str(),
        Some(_) => return Err(malformed("mode must be a string")),
        None => return Err(malformed("missing field \"mode\" (\"roots\" or \"matrix\")")),
    };
    let input = match mode {
        "roots" => {
            only_fields(obj, &["mode", "label", "p", "roots"], mode)?;
            AnalysisInput::Roots(parse_roots(obj, allow_small_genus)?)
        }
        "matrix" => {
            only_fields(obj, &["mode", "label", "valuations"], mode)?;
            AnalysisInput::Matrix(parse_matrix(required(obj, "valuations", mode)?)?)
        }
        other => return Err(malformed(format!("unknown mode {other:?}; expected \"roots\" or \"matrix\""))),
    };
    Ok(InstanceFile { label, input })
}

fn parse_roots(obj: &Map<String, Value>, allow_small_genus: bool) -> Result<Instance, InputError> {
    let p = match required(obj, "p", "roots")? {
        Value::Number(n) => n
            .as_u64()
            .ok_or_else(|| InputError::NotPrime(n.to_string()))?,
        Value::String(s) => s.trim().parse::<u64>().map_err(|_| InputError::NotPrime(s.clone()))?,
        other => return Err(InputError::NotPrime(other.to_string())),
    };
    let prime = Prime::new(p)?;
    let list = required(obj, "roots", "roots")?
        .as_array()
        .ok_or_else(|| malformed("roots must be an array of strings"))?;
    let mut roots = Vec::with_capacity(list.len());
    for (index, item) in list.iter().enumerate() {
        let text = match item {
            Value::String(s) => s.clone(),
            // plain JSON integers are accepted as a convenience
            Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            other => {
                return Err(InputError::BadRoot {
                    index,
                    value: other.to_string(),
                })
            }
        };
        let q = parse_rational(&text).ok_or(InputError::BadRoot { index, value: text })?;
        roots.push(q);
    }
    Instance::new(prime, roots, allow_small_genus)
}

fn parse_matrix(v: &Value) -> Result<ValuationMatrix, InputError> {
    let rows = v
        .as_array()
        .ok_or_else(|| malformed("valuations must be an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| malformed(format!("valuations row {i} is not an array")))?;
        let mut parsed = Vec::with_capacity(row.len());
        for (j, e) in row.iter().enumerate() {
            let entry: ExtNat = match e {
                Value::Null => Extended::Infinity,
                Value::Number(n) => Extended::Finite(n.as_u64().ok_or_else(|| {
                    malformed(format!("valuations[{i}][{j}] = {n} is not a nonnegative integer"))
                })?),
                other => {
                    return Err(malformed(format!(
                        "valuations[{i}][{j}] = {other} is not a nonnegative integer or null"
                    )))
                }
            };
            parsed.push(entry);
        }
        out.push(parsed);
    }
    ValuationMatrix::from_rows(out)
}

/// Serializes an instance in the same format [`parse_instance_file`] reads.
pub fn instance_to_json(input: &AnalysisInput, label: Option<&str>) -> Value {
    let mut v = match input {
        AnalysisInput::Roots(inst) => json!({
            "mode": "roots",
            "p": inst.prime().get(),
            "roots": inst.roots().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        }),
        AnalysisInput::Matrix(m) => json!({
            "mode": "matrix",
            "valuations": m
                .rows()
                .iter()
                .map(|row| row.iter().map(|e| e.finite().map_or(Value::Null, Value::from)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
    };
    if let Some(l) = label {
        v["label"] = Value::from(l);
    }
    v
}
