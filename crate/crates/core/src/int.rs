//! Arbitrary-precision integer helpers shared by every module.
//!
//! JSON documents carry integers either as numbers or as decimal strings.
//! Output uses a plain number when the value fits in an `i64`, a decimal
//! string otherwise, so small documents stay readable and large residues
//! survive the round trip.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// JSON-facing wrapper around [`BigInt`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int(v)
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int(BigInt::from(v))
    }
}

impl From<Int> for BigInt {
    fn from(v: Int) -> Self {
        v.0
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = Int;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(BigInt::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(BigInt::from(v)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                parse_decimal(v).map(Int).ok_or_else(|| E::custom(format!("invalid decimal integer {v:?}")))
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

/// Serde adapter writing a [`BigInt`] as a decimal string, for values such
/// as residues whose moduli outgrow native integers. Reads either form.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Int;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Int::deserialize(d).map(|v| v.0)
    }
}

/// Parses an optionally signed run of ASCII digits.
pub fn parse_decimal(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Least non-negative residue of `a` modulo `m` (`m > 0`).
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

pub fn pow(base: u64, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_decimal(n)?;
            let d = parse_decimal(d)?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => parse_decimal(s).map(BigRational::from_integer),
    }
}

pub fn is_integral(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Deterministic primality test by trial division; inputs are user-supplied
/// primes of desk-scale size.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The least `count` primes strictly greater than `threshold`.
pub fn primes_above(threshold: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = threshold + 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

pub fn abs_max<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_json_uses_numbers_when_small() {
        let small = Int::from(-42);
        assert_eq!(serde_json::to_string(&small).unwrap(), "-42");
        let big = Int(pow(2, 80));
        assert_eq!(serde_json::to_string(&big).unwrap(), "\"1208925819614629174706176\"");
        let back: Int = serde_json::from_str("\"1208925819614629174706176\"").unwrap();
        assert_eq!(back, big);
        assert!(serde_json::from_str::<Int>("1.5").is_err());
        assert!(serde_json::from_str::<Int>("\"12a\"").is_err());
    }

    #[test]
    fn rationals_render_and_parse() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(rational_to_string(&half), "1/2");
        assert_eq!(parse_rational("1/2"), Some(half));
        assert_eq!(parse_rational("-3"), Some(BigRational::from_integer(BigInt::from(-3))));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_above(30, 3), vec![31, 37, 41]);
    }
}
