//! JSON encoding with exact integers.
//!
//! Big integers become JSON numbers of any length; non-integral rationals
//! become `"p/q"` strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Number, Value};

use crate::linalg::IntMatrix;

pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl ToJson for BigInt {
    fn to_json(&self) -> Value {
        Value::Number(Number::from_str(&self.to_string()).expect("decimal integer"))
    }
}

impl ToJson for BigRational {
    fn to_json(&self) -> Value {
        if self.is_integer() {
            self.to_integer().to_json()
        } else {
            Value::String(self.to_string())
        }
    }
}

impl ToJson for IntMatrix {
    fn to_json(&self) -> Value {
        self.to_rows().to_json()
    }
}

impl ToJson for Value {
    fn to_json(&self) -> Value {
        self.clone()
    }
}

macro_rules! via_serde {
    ($($t:ty),*) => {
        $(impl ToJson for $t {
            fn to_json(&self) -> Value {
                serde_json::to_value(self).expect("plain value")
            }
        })*
    };
}

via_serde!(bool, u8, u32, u64, usize, i32, i64, String, str);

impl<T: ToJson + ?Sized> ToJson for &T {
    fn to_json(&self) -> Value {
        (**self).to_json()
    }
}

impl<T: ToJson> ToJson for [T] {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(ToJson::to_json).collect())
    }
}

impl<T: ToJson, const N: usize> ToJson for [T; N] {
    fn to_json(&self) -> Value {
        self.as_slice().to_json()
    }
}

impl<T: ToJson> ToJson for Vec<T> {
    fn to_json(&self) -> Value {
        self.as_slice().to_json()
    }
}

impl<T: ToJson> ToJson for Option<T> {
    fn to_json(&self) -> Value {
        self.as_ref().map_or(Value::Null, ToJson::to_json)
    }
}

impl<A: ToJson, B: ToJson> ToJson for (A, B) {
    fn to_json(&self) -> Value {
        Value::Array(vec![self.0.to_json(), self.1.to_json()])
    }
}

impl<V: ToJson> ToJson for std::collections::BTreeMap<String, V> {
    fn to_json(&self) -> Value {
        Value::Object(self.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
    }
}

/// `serialize_with` adapter for any [`ToJson`] field.
pub fn ser<T: ToJson + ?Sized, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    v.to_json().serialize(s)
}

fn value_to_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).ok(),
        Value::String(s) => BigInt::from_str(s).ok(),
        _ => None,
    }
}

pub fn de_ints<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    let raw = Vec::<Value>::deserialize(d)?;
    raw.iter()
        .map(|v| value_to_int(v).ok_or_else(|| D::Error::custom(format!("not an integer: {v}"))))
        .collect()
}

pub fn de_int_rows<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
    let raw = Vec::<Vec<Value>>::deserialize(d)?;
    raw.iter()
        .map(|row| {
            row.iter()
                .map(|v| value_to_int(v).ok_or_else(|| D::Error::custom(format!("not an integer: {v}"))))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat_frac;

    #[test]
    fn big_integers_are_plain_numbers() {
        let b = BigInt::from(2).pow(120);
        let s = serde_json::to_string(&b.to_json()).unwrap();
        assert_eq!(s, "1329227995784915872903807060280344576");
        assert_eq!(rat_frac(-3, 6).to_json(), Value::String("-1/2".into()));
        assert_eq!(rat_frac(4, 2).to_json(), serde_json::json!(2));
    }
}
