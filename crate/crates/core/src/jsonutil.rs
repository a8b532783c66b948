//! Canonical JSON: object keys sorted, compact separators. Identical values
//! always serialize to identical bytes, so emitted documents are diffable
//! and round-trip byte-stable.

use serde::Serialize;
use serde_json::Value;

pub fn canonicalize(value: &Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut sorted: Vec<(&String, &Value)> = map.iter().collect();
            sorted.sort_by_key(|(k, _)| k.clone());
            Value::Object(
                sorted
                    .into_iter()
                    .map(|(k, v)| (k.clone(), canonicalize(v)))
                    .collect(),
            )
        }
        Value::Array(items) => Value::Array(items.iter().map(canonicalize).collect()),
        other => other.clone(),
    }
}

pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    canonicalize(&v).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_sorted_recursively() {
        let v = json!({"b": 1, "a": {"z": [ {"y": 2, "x": 3} ], "w": 4}});
        assert_eq!(
            to_canonical_string(&v),
            r#"{"a":{"w":4,"z":[{"x":3,"y":2}]},"b":1}"#
        );
    }
}
