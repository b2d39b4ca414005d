//! Extended exponents in `[1, ∞]` and validated Young triples.
//!
//! Exponents are exact rationals (or the distinguished value `∞`), so the
//! relation `1/p1 + 1/p2 = 1 + 1/p` is checked without float drift and the
//! boundary cases `p1 = 1`, `p2 = 1`, `p = ∞` are hit exactly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// An exponent `1 <= p <= ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    pub const INFINITY: Exponent = Exponent::Infinite;

    pub fn one() -> Self {
        Exponent::Finite(Rational::one())
    }

    pub fn integer(n: i64) -> Result<Self> {
        Self::from_ratio(Rational::from_integer(n))
    }

    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidExponent(format!("{numer}/{denom}")));
        }
        Self::from_ratio(Rational::new(numer, denom))
    }

    pub fn from_ratio(r: Rational) -> Result<Self> {
        if r < Rational::one() {
            return Err(Error::InvalidExponent(format!("{r} < 1")));
        }
        Ok(Exponent::Finite(r))
    }

    /// Builds `p` from its reciprocal `1/p ∈ [0, 1]`; `0` maps to `∞`.
    pub fn from_reciprocal(r: Rational) -> Result<Self> {
        if r.is_zero() {
            return Ok(Exponent::Infinite);
        }
        if r < Rational::zero() || r > Rational::one() {
            return Err(Error::InvalidExponent(format!("reciprocal {r} outside [0, 1]")));
        }
        Ok(Exponent::Finite(r.recip()))
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> Rational {
        match self {
            Exponent::Finite(r) => r.recip(),
            Exponent::Infinite => Rational::zero(),
        }
    }

    pub fn reciprocal_f64(&self) -> f64 {
        ratio_f64(self.reciprocal())
    }

    /// Hölder conjugate: `1/p + 1/p' = 1`.
    pub fn conjugate(&self) -> Exponent {
        let r = Rational::one() - self.reciprocal();
        Exponent::from_reciprocal(r).expect("conjugate of a valid exponent is valid")
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Finite(r) => ratio_f64(*r),
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Exponent::Finite(r) if r.is_one())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger exponent <=> smaller reciprocal
        other.reciprocal().cmp(&self.reciprocal())
    }
}

pub(crate) fn ratio_f64(r: Rational) -> f64 {
    r.to_f64().expect("i64 ratio converts to f64")
}

/// `x^e` where the exponent may be exactly zero; `0^0 = 1`.
pub fn pow_ratio(x: f64, e: Rational) -> f64 {
    if e.is_zero() {
        1.0
    } else if e.is_one() {
        x
    } else {
        x.powf(ratio_f64(e))
    }
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (int, frac) = s.split_once('.')?;
    if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let int: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let scale = 10i64.checked_pow(frac.len() as u32)?;
    let frac: i64 = frac.parse().ok()?;
    Some(Rational::new(int.checked_mul(scale)?.checked_add(frac)?, scale))
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `inf`, `∞`, integers, fractions `a/b` and plain decimals.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidExponent(s.to_string());
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(Exponent::Infinite),
            _ => {}
        }
        let r = if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Rational::new(n, d)
        } else if t.contains('.') {
            parse_decimal(t).ok_or_else(bad)?
        } else {
            Rational::from_integer(t.parse().map_err(|_| bad())?)
        };
        Exponent::from_ratio(r).map_err(|_| bad())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Exponent::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Holder conjugate of `p`.
pub fn holder_conjugate(p: Exponent) -> Exponent {
    p.conjugate()
}

/// An admissible triple `(p1, p2, p)` with `1/p1 + 1/p2 = 1 + 1/p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct YoungExponents {
    pub p1: Exponent,
    pub p2: Exponent,
    pub p: Exponent,
}

impl YoungExponents {
    /// Solves for `p`; rejects pairs with `1/p1 + 1/p2 < 1`.
    pub fn new(p1: Exponent, p2: Exponent) -> Result<Self> {
        let s = p1.reciprocal() + p2.reciprocal();
        if s < Rational::one() {
            return Err(Error::Inadmissible(format!("p1 = {p1}, p2 = {p2}")));
        }
        let p = Exponent::from_reciprocal(s - Rational::one())?;
        Ok(YoungExponents { p1, p2, p })
    }

    pub fn parse(p1: &str, p2: &str) -> Result<Self> {
        Self::new(p1.parse()?, p2.parse()?)
    }

    /// Boundary triple: `p1 = 1`, `p2 = 1` or `p = ∞`.
    pub fn is_boundary(&self) -> bool {
        self.p1.is_one() || self.p2.is_one() || self.p.is_infinite()
    }

    pub fn is_interior(&self) -> bool {
        !self.is_boundary()
    }

    pub fn swapped(&self) -> Self {
        YoungExponents { p1: self.p2, p2: self.p1, p: self.p }
    }

    /// `1/p1'`, the power of the modular function in the twisted convolution.
    pub fn twist(&self) -> Rational {
        self.p1.conjugate().reciprocal()
    }
}

#[derive(Deserialize)]
struct RawTriple {
    p1: Exponent,
    p2: Exponent,
    p: Exponent,
}

impl<'de> Deserialize<'de> for YoungExponents {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTriple::deserialize(d)?;
        let ex = YoungExponents::new(raw.p1, raw.p2).map_err(serde::de::Error::custom)?;
        if ex.p != raw.p {
            return Err(serde::de::Error::custom(format!("p = {} does not match {ex}", raw.p)));
        }
        Ok(ex)
    }
}

impl fmt::Display for YoungExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p1={}, p2={}, p={})", self.p1, self.p2, self.p)
    }
}
