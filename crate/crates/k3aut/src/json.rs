//! JSON encoding with every lattice integer written as a decimal string, so that values
//! survive readers that parse numbers as floating point.
//!
//! Fields opt in with `#[serde(with = "crate::json::decimal")]`; the encoding nests through
//! vectors, fixed arrays, options and string-keyed maps.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde_json::Value;

/// Conversion between a value and its decimal-string JSON form.
pub trait DecimalJson: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, String>;
}

impl DecimalJson for i64 {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        match v {
            Value::String(s) => s.parse().map_err(|e| format!("bad integer {s:?}: {e}")),
            other => Err(format!("expected a decimal string, found {other}")),
        }
    }
}

impl<T: DecimalJson> DecimalJson for Vec<T> {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(T::to_json).collect())
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        v.as_array()
            .ok_or_else(|| format!("expected an array, found {v}"))?
            .iter()
            .map(T::from_json)
            .collect()
    }
}

impl<T: DecimalJson, const N: usize> DecimalJson for [T; N] {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(T::to_json).collect())
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        let items: Vec<T> = Vec::from_json(v)?;
        let len = items.len();
        items
            .try_into()
            .map_err(|_| format!("expected {N} entries, found {len}"))
    }
}

impl<T: DecimalJson> DecimalJson for Option<T> {
    fn to_json(&self) -> Value {
        self.as_ref().map_or(Value::Null, T::to_json)
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        if v.is_null() {
            Ok(None)
        } else {
            T::from_json(v).map(Some)
        }
    }
}

impl<T: DecimalJson> DecimalJson for BTreeMap<String, T> {
    fn to_json(&self) -> Value {
        Value::Object(self.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        v.as_object()
            .ok_or_else(|| format!("expected an object, found {v}"))?
            .iter()
            .map(|(k, v)| Ok((k.clone(), T::from_json(v)?)))
            .collect()
    }
}

/// `serde(with)` adapter for any [`DecimalJson`] field.
pub mod decimal {
    use super::*;

    pub fn serialize<T: DecimalJson, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&v.to_json(), s)
    }

    pub fn deserialize<'de, T: DecimalJson, D: serde::Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let v: Value = serde::Deserialize::deserialize(d)?;
        T::from_json(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_round_trip_through_strings() {
        let m: Vec<Vec<i64>> = vec![vec![i64::MIN, 0], vec![-7, i64::MAX]];
        let v = m.to_json();
        assert_eq!(v[0][0], Value::String("-9223372036854775808".into()));
        assert_eq!(Vec::<Vec<i64>>::from_json(&v).unwrap(), m);
    }

    #[test]
    fn bare_numbers_are_rejected() {
        let v: Value = serde_json::from_str("[1, 2]").unwrap();
        assert!(Vec::<i64>::from_json(&v).is_err());
    }

    #[test]
    fn fixed_arrays_check_their_length() {
        let v: Value = serde_json::from_str(r#"["1","2","3"]"#).unwrap();
        assert!(<[i64; 2]>::from_json(&v).is_err());
        assert_eq!(<[i64; 3]>::from_json(&v).unwrap(), [1, 2, 3]);
    }
}
