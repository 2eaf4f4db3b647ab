//! Exact fractions as `"p/q"` strings in JSON output.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// Always `p/q` with `q > 0`, including integers (`3/1`).
pub fn to_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("fraction {text:?}"));
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| bad())?;
    let q = BigInt::from_str(q).map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

pub fn integer(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn one() -> BigRational {
    BigRational::one()
}

/// Serde adapter for a single fraction.
pub mod serde_fraction {
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for (p, q) in [(3, 1), (-1, 2), (0, 1), (6, 4)] {
            let x = BigRational::new(p.into(), q.into());
            assert_eq!(parse(&to_string(&x)).unwrap(), x);
        }
        assert_eq!(to_string(&integer(-2)), "-2/1");
        assert_eq!(parse("5").unwrap(), integer(5));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}
