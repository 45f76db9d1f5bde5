//! Two-tier scalar arithmetic: arbitrary-precision rationals or `f64`.
//!
//! Every integral, weight and gap in this crate is a [`Scalar`]. A
//! computation runs entirely in one tier: the exact tier makes knife-edge
//! equality questions decidable, the float tier trades that for speed on
//! large instances. Tiers are never mixed inside one computation; the
//! arithmetic operators panic on mixed operands because a mix can only
//! arise from a construction bug, never from user input (input validation
//! rejects it first).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Arithmetic tier of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    /// Arbitrary-precision rational arithmetic; comparisons are exact.
    Exact,
    /// `f64` arithmetic with a fixed summation order and a documented
    /// relative-tolerance comparator for verdicts.
    Float,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tier::Exact => write!(f, "exact"),
            Tier::Float => write!(f, "float"),
        }
    }
}

/// A number in one of the two tiers.
#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn tier(&self) -> Tier {
        match self {
            Scalar::Exact(_) => Tier::Exact,
            Scalar::Float(_) => Tier::Float,
        }
    }

    pub fn zero(tier: Tier) -> Self {
        match tier {
            Tier::Exact => Scalar::Exact(BigRational::zero()),
            Tier::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(tier: Tier) -> Self {
        match tier {
            Tier::Exact => Scalar::Exact(BigRational::from_integer(1.into())),
            Tier::Float => Scalar::Float(1.0),
        }
    }

    /// Exact integer.
    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(n.into()))
    }

    /// Exact ratio `p/q`. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(BigRational::new(p.into(), q.into()))
    }

    /// Float-tier value; `-0.0` is normalized to `0.0` so that value
    /// equality coincides with bit equality on finite inputs.
    pub fn float(x: f64) -> Self {
        Scalar::Float(if x == 0.0 { 0.0 } else { x })
    }

    /// Parse a textual scalar in the given tier.
    ///
    /// Exact tier accepts integers (`-3`), ratios (`p/q`) and plain
    /// decimals (`0.25` becomes `1/4`); anything else, including exponent
    /// notation, is rejected. Float tier accepts everything `f64` parses
    /// plus `p/q`, and rejects non-finite results.
    pub fn parse(text: &str, tier: Tier) -> Result<Self> {
        let t = text.trim();
        match tier {
            Tier::Exact => parse_exact(t),
            Tier::Float => parse_float(t),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(x) => x.is_finite(),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::float(x.abs()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    /// `self^e` by repeated left-to-right multiplication (fixed order
    /// keeps the float tier deterministic).
    pub fn pow_usize(&self, e: usize) -> Scalar {
        let mut acc = Scalar::one(self.tier());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Pointwise minimum; both operands must share a tier.
    pub fn min_with(&self, other: &Scalar) -> Scalar {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Sum respecting the fixed float-tier order (iteration order of the
    /// argument), with an explicit tier for the empty sum.
    pub fn sum<'a, I: IntoIterator<Item = &'a Scalar>>(items: I, tier: Tier) -> Scalar {
        let mut acc = Scalar::zero(tier);
        for s in items {
            acc = &acc + s;
        }
        acc
    }

    /// Product in iteration order, with an explicit tier for the empty
    /// product.
    pub fn product<'a, I: IntoIterator<Item = &'a Scalar>>(items: I, tier: Tier) -> Scalar {
        let mut acc = Scalar::one(tier);
        for s in items {
            acc = &acc * s;
        }
        acc
    }

    fn mixed(&self, other: &Scalar) -> ! {
        panic!(
            "mixed scalar tiers in one computation: {} vs {}",
            self.tier(),
            other.tier()
        );
    }
}

fn parse_exact(t: &str) -> Result<Scalar> {
    let err = |reason: &str| Error::ScalarParse {
        text: t.to_string(),
        tier: Tier::Exact,
        reason: reason.to_string(),
    };
    if t.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| err(&format!("numerator: {e}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| err(&format!("denominator: {e}")))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Scalar::Exact(BigRational::new(p, q)));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("malformed decimal"));
        }
        if !int_digits.is_empty() && !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("malformed decimal"));
        }
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac_part);
        let mantissa = BigInt::from_str(&digits).map_err(|e| err(&format!("{e}")))?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(Scalar::Exact(BigRational::new(mantissa * sign, denom)));
    }
    let n = BigInt::from_str(t).map_err(|e| err(&format!("{e}")))?;
    Ok(Scalar::Exact(BigRational::from_integer(n)))
}

fn parse_float(t: &str) -> Result<Scalar> {
    let err = |reason: &str| Error::ScalarParse {
        text: t.to_string(),
        tier: Tier::Float,
        reason: reason.to_string(),
    };
    let value = if let Some((p, q)) = t.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| err("malformed numerator"))?;
        let q: f64 = q.trim().parse().map_err(|_| err("malformed denominator"))?;
        p / q
    } else {
        t.parse().map_err(|_| err("not a float"))?
    };
    if !value.is_finite() {
        return Err(Error::NonFinite {
            context: format!("parsed value `{t}`"),
        });
    }
    Ok(Scalar::float(value))
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.total_cmp(b),
            _ => self.mixed(other),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::float(a $op b),
                    _ => self.mixed(rhs),
                }
            }
        }

        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
// Exact-tier division by zero panics like integer division would; every
// divisor in this crate is validated positive before use.
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom() == &BigInt::from(1) {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

// Rationals serialize as strings to survive JSON number limits; floats as
// plain numbers.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(_) => serializer.serialize_str(&self.to_string()),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}
