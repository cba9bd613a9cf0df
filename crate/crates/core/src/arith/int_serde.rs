//! Serde adapters writing integers as JSON numbers when they fit in i64 and as
//! decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(i64),
    Str(String),
}

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match n.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&n.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v.into()),
            Repr::Str(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wrapped(#[serde(with = "int")] BigInt);

pub mod ints {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|n| Wrapped(n.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<Wrapped>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct T {
        #[serde(with = "int")]
        small: BigInt,
        #[serde(with = "int")]
        big: BigInt,
        #[serde(with = "ints")]
        list: Vec<BigInt>,
    }

    #[test]
    fn round_trip() {
        let t = T { small: BigInt::from(-7), big: BigInt::from(3).pow(60), list: vec![1.into(), (-2).into()] };
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"small":-7,"big":"42391158275216203514294433201","list":[1,-2]}"#);
        assert_eq!(serde_json::from_str::<T>(&s).unwrap(), t);
    }
}
