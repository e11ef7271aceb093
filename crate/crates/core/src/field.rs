//! Coefficient fields: the rationals or a prime field F_p.
//!
//! Scalars are carried as `i64`. Over F_p they are kept in `[0, p)`; over Q
//! they are integers (all forms are sampled with integer coefficients, and
//! rank is invariant under clearing denominators).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u64 = 32003;

/// Largest supported characteristic; keeps pivot rows in `u32`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime(DEFAULT_PRIME)
    }
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "characteristic must be a prime below 2^31, got {p}"
            )));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn reduce(&self, x: i64) -> i64 {
        match self {
            FieldSpec::Rational => x,
            FieldSpec::Prime(p) => x.rem_euclid(*p as i64),
        }
    }

    pub fn add(&self, x: i64, y: i64) -> i64 {
        match self {
            FieldSpec::Rational => x.checked_add(y).expect("integer overflow in Q scalar"),
            FieldSpec::Prime(p) => ((x as i128 + y as i128).rem_euclid(*p as i128)) as i64,
        }
    }

    pub fn mul(&self, x: i64, y: i64) -> i64 {
        match self {
            FieldSpec::Rational => x.checked_mul(y).expect("integer overflow in Q scalar"),
            FieldSpec::Prime(p) => ((x as i128 * y as i128).rem_euclid(*p as i128)) as i64,
        }
    }

    pub fn neg(&self, x: i64) -> i64 {
        self.reduce(-x)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rational);
        }
        let digits = s
            .strip_prefix("fp:")
            .or_else(|| s.strip_prefix("FP:"))
            .unwrap_or(s);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("unrecognized field '{s}' (expected q or fp:P)")))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deterministic primality test for `n < 2^32` by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Modular inverse of `a` mod prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("fp:32003".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(32003));
        assert_eq!("7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert!("fp:32004".parse::<FieldSpec>().is_err());
        assert!("fp:x".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::default().to_string(), "fp:32003");
    }

    #[test]
    fn arithmetic() {
        let f = FieldSpec::Prime(7);
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.neg(3), 4);
        assert_eq!(inv_mod(3, 7), 5);
        assert!(is_prime(32003));
        assert!(is_prime(MAX_PRIME));
    }
}
