//! The coefficient rings: `ℤ`, `ℤ/m` and `ℚ`.
//!
//! Every coefficient is carried as an exact rational. In `ℤ` and `ℤ/m` the
//! denominator is always 1, and `ℤ/m` values are kept reduced to `0..m`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    /// `ℤ/m` with `m ≥ 2`.
    IntegersMod(u64),
    Rationals,
}

impl RingSpec {
    pub fn integers_mod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::UnsupportedRing(format!("mod:{m}")));
        }
        Ok(RingSpec::IntegersMod(m))
    }

    pub fn from_integer(&self, value: i64) -> Coeff {
        self.normalize(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn zero(&self) -> Coeff {
        Coeff::zero()
    }

    pub fn one(&self) -> Coeff {
        self.normalize(Coeff::one())
    }

    /// Canonical representative of a value already known to lie in the ring.
    pub(crate) fn normalize(&self, c: Coeff) -> Coeff {
        match *self {
            RingSpec::IntegersMod(m) => {
                debug_assert!(c.is_integer());
                BigRational::from_integer(c.to_integer().mod_floor(&BigInt::from(m)))
            }
            _ => c,
        }
    }

    /// Maps an arbitrary rational into the ring, if it has an image there.
    pub fn coerce(&self, c: &Coeff) -> Result<Coeff> {
        let not_in = || Error::NotInRing(c.to_string(), self.to_string());
        match *self {
            RingSpec::Rationals => Ok(c.clone()),
            RingSpec::Integers => {
                if c.is_integer() {
                    Ok(c.clone())
                } else {
                    Err(not_in())
                }
            }
            RingSpec::IntegersMod(m) => {
                let m = BigInt::from(m);
                let inverse = mod_inverse(&c.denom().mod_floor(&m), &m).ok_or_else(not_in)?;
                let value = (c.numer() * inverse).mod_floor(&m);
                Ok(BigRational::from_integer(value))
            }
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a + b)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.normalize(-a)
    }

    /// Text form of a coefficient: `-3`, `7`, `5/2`.
    pub fn format(c: &Coeff) -> String {
        if c.is_integer() {
            c.numer().to_string()
        } else {
            format!("{}/{}", c.numer(), c.denom())
        }
    }

    pub fn parse_coeff(s: &str) -> Result<Coeff> {
        let bad = || Error::Parse {
            line: 0,
            message: format!("bad coefficient `{s}`"),
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() || d.is_negative() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => f.write_str("int"),
            RingSpec::IntegersMod(m) => write!(f, "mod:{m}"),
            RingSpec::Rationals => f.write_str("rat"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "int" | "Z" => Ok(RingSpec::Integers),
            "rat" | "Q" => Ok(RingSpec::Rationals),
            other => {
                let m = other
                    .strip_prefix("mod:")
                    .and_then(|m| m.parse::<u64>().ok())
                    .ok_or_else(|| Error::UnsupportedRing(other.to_owned()))?;
                RingSpec::integers_mod(m)
            }
        }
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Coeff {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_and_display() {
        for s in ["int", "mod:2", "mod:15", "rat"] {
            assert_eq!(s.parse::<RingSpec>().unwrap().to_string(), s);
        }
        assert!("mod:1".parse::<RingSpec>().is_err());
        assert!("mod:x".parse::<RingSpec>().is_err());
        assert!("real".parse::<RingSpec>().is_err());
    }

    #[test]
    fn mod_reduction() {
        let r = RingSpec::IntegersMod(3);
        assert_eq!(r.from_integer(-1), q(2, 1));
        assert_eq!(r.add(&q(2, 1), &q(2, 1)), q(1, 1));
        assert_eq!(RingSpec::IntegersMod(2).from_integer(2), q(0, 1));
    }

    #[test]
    fn coercion() {
        assert_eq!(RingSpec::Rationals.coerce(&q(1, 2)).unwrap(), q(1, 2));
        assert!(RingSpec::Integers.coerce(&q(1, 2)).is_err());
        // 1/2 = 3 in Z/5
        assert_eq!(RingSpec::IntegersMod(5).coerce(&q(1, 2)).unwrap(), q(3, 1));
        assert!(RingSpec::IntegersMod(4).coerce(&q(1, 2)).is_err());
    }

    #[test]
    fn coefficient_text() {
        assert_eq!(RingSpec::format(&q(-3, 1)), "-3");
        assert_eq!(RingSpec::format(&q(5, 2)), "5/2");
        assert_eq!(RingSpec::parse_coeff("5/2").unwrap(), q(5, 2));
        assert_eq!(RingSpec::parse_coeff("-4").unwrap(), q(-4, 1));
        assert!(RingSpec::parse_coeff("1/0").is_err());
    }
}
