//! Exact rational helpers.
//!
//! Every probability, ratio and threshold in the crate is a [`BigRational`].
//! Values cross the JSON boundary as `"p/q"` strings (integers print as `"p"`).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    BigRational::new(num.into(), den.into())
}

pub fn int(v: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(v.into())
}

pub fn from_biguint(num: &BigUint, den: &BigUint) -> Rational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// `2^e` as a big integer.
pub fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// `2^-e` as a rational.
pub fn inv_pow2(e: usize) -> Rational {
    BigRational::new(BigInt::one(), BigInt::from(pow2(e)))
}

/// `num / 2^e` as a rational.
pub fn from_bigint_pow2(num: BigInt, e: usize) -> Rational {
    BigRational::new(num, BigInt::from(pow2(e)))
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"0.125"`, exactly.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(BigRational::new(num, den));
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

pub fn to_f64(r: &Rational) -> f64 {
    // Scale so both parts fit comfortably before dividing.
    let n = r.numer();
    let d = r.denom();
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            let shift = d.bits().max(n.bits()).saturating_sub(1000) as usize;
            let a = (n >> shift).to_f64().unwrap_or(f64::NAN);
            let b = (d >> shift).to_f64().unwrap_or(f64::NAN);
            a / b
        }
    }
}

pub fn lcm(a: &BigUint, b: &BigUint) -> BigUint {
    a.lcm(b)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let text = String::deserialize(d)?;
    parse(&text).map_err(serde::de::Error::custom)
}

/// Serde adapter for `Option<Rational>`.
pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        text.map(|t| parse(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// A dyadic rational `num / 2^pow2`, the value type of truth tables and spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    pub num: i128,
    pub pow2: u32,
}

impl Dyadic {
    pub fn new(num: i128, pow2: u32) -> Self {
        Self { num, pow2 }.reduced()
    }

    pub fn reduced(mut self) -> Self {
        if self.num == 0 {
            self.pow2 = 0;
            return self;
        }
        let tz = self.num.trailing_zeros().min(self.pow2);
        self.num >>= tz;
        self.pow2 -= tz;
        self
    }

    pub fn to_rational(self) -> Rational {
        BigRational::new(BigInt::from(self.num), BigInt::from(pow2(self.pow2 as usize)))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / 2f64.powi(self.pow2 as i32)
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = self.reduced();
        if r.pow2 == 0 {
            write!(f, "{}", r.num)
        } else {
            write!(f, "{}/{}", r.num, pow2(r.pow2 as usize))
        }
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
