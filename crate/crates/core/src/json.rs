//! Serde helpers shared by the JSON file formats.

/// Big integers travel as JSON numbers while they fit in 64 bits and as
/// decimal strings beyond that. Both forms are accepted on input.
pub mod bigint {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        if let Some(i) = v.to_i64() {
            s.serialize_i64(i)
        } else if let Some(u) = v.to_u64() {
            s.serialize_u64(u)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    struct BigIntVisitor;

    impl Visitor<'_> for BigIntVisitor {
        type Value = BigInt;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("an integer or a decimal string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(v.into())
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(v.into())
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            v.parse().map_err(E::custom)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(BigIntVisitor)
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap(#[serde(with = "super::bigint")] BigInt);

    #[test]
    fn small_values_are_numbers_large_are_strings() {
        assert_eq!(serde_json::to_string(&Wrap(BigInt::from(-7))).unwrap(), "-7");
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let s = serde_json::to_string(&Wrap(big.clone())).unwrap();
        assert_eq!(s, "\"123456789012345678901234567890\"");
        assert_eq!(serde_json::from_str::<Wrap>(&s).unwrap(), Wrap(big));
        assert_eq!(serde_json::from_str::<Wrap>("42").unwrap(), Wrap(BigInt::from(42)));
    }
}
