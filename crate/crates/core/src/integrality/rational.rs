use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest continued-fraction denominator accepted by [`rationalize`].
pub const MAX_DENOMINATOR: u64 = 1_000_000;
/// Relative tolerance of [`rationalize`].
pub const RATIONALIZE_TOL: f64 = 1e-9;

/// Exact rational in lowest terms with a positive denominator.
///
/// Serialized as a pair of decimal strings `["num", "den"]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidRational(format!("{num}/0")));
        }
        Ok(Self(BigRational::new(num.into(), den.into())))
    }

    pub fn from_integer(k: i64) -> Self {
        Self(BigRational::from_integer(k.into()))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidRational(format!("{num}/0")));
        }
        Ok(Self(BigRational::new(num, den)))
    }

    pub fn parse_parts(num: &str, den: &str) -> Result<Self> {
        let parse = |s: &str| {
            BigInt::from_str(s.trim()).map_err(|_| Error::InvalidRational(format!("{num}/{den}")))
        };
        Self::from_big(parse(num)?, parse(den)?)
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidRational("1/0".into()));
        }
        Ok(Self(self.0.recip()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn mul_int(&self, k: u64) -> Self {
        Self(&self.0 * BigRational::from_integer(k.into()))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.numer().to_string())?;
        t.serialize_element(&self.denom().to_string())?;
        t.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntText {
    Text(String),
    Int(i64),
}

impl IntText {
    fn into_string(self) -> String {
        match self {
            IntText::Text(s) => s,
            IntText::Int(k) => k.to_string(),
        }
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (num, den) = <(IntText, IntText)>::deserialize(d)?;
        Rational::parse_parts(&num.into_string(), &den.into_string()).map_err(de::Error::custom)
    }
}

/// Positive generator of the additive group spanned by `values`:
/// `gcd(numerators) / lcm(denominators)`. `None` if every value is zero.
pub fn rational_gcd<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Option<Rational> {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut any = false;
    for v in values.into_iter().filter(|v| !v.is_zero()) {
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
        any = true;
    }
    any.then(|| Rational(BigRational::new(num, den)))
}

/// Continued-fraction approximation of `x` within `RATIONALIZE_TOL * max(|x|, scale)`.
///
/// `scale` sets the absolute floor so that rounding noise around zero snaps to 0.
pub fn rationalize(x: f64, scale: f64) -> Result<Rational> {
    let limit_err = Error::Rationalize {
        value: x,
        limit: MAX_DENOMINATOR,
    };
    if !x.is_finite() || x.abs() > 1e15 {
        return Err(limit_err);
    }
    let tol = RATIONALIZE_TOL * x.abs().max(scale.abs());
    let (mut h1, mut h2) = (1i128, 0i128);
    let (mut k1, mut k2) = (0i128, 1i128);
    let mut r = x;
    loop {
        let a = r.floor();
        let ai = a as i128;
        let (h, k) = (ai * h1 + h2, ai * k1 + k2);
        if k > MAX_DENOMINATOR as i128 {
            return Err(limit_err);
        }
        let approx = h as f64 / k as f64;
        let frac = r - a;
        if (x - approx).abs() <= tol || frac == 0.0 {
            return Rational::from_big(h.into(), k.into());
        }
        r = 1.0 / frac;
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
    }
}
