//! Exact rational scalars: `Rat` (arbitrary-precision rationals) and
//! `CRat` (complex numbers with rational parts).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"3"`, `"-1/2"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num = BigInt::from_str(n.trim())
            .map_err(|_| CoreError::Parse(format!("bad numerator in `{s}`")))?;
        let den = BigInt::from_str(d.trim())
            .map_err(|_| CoreError::Parse(format!("bad denominator in `{s}`")))?;
        if den.is_zero() {
            return Err(CoreError::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(Rat::new(num, den))
    } else {
        let num =
            BigInt::from_str(s).map_err(|_| CoreError::Parse(format!("bad rational `{s}`")))?;
        Ok(Rat::from_integer(num))
    }
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `10^{-k}` as an exact rational.
pub fn pow10_neg(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(10u32).pow(k))
}

/// Largest rational of the form `m / (denom * 10^15)` below `sqrt(x)`;
/// errors on negative input. Exact lower bound.
pub fn sqrt_lower(x: &Rat) -> Result<Rat> {
    sqrt_bounds(x).map(|(lo, _)| lo)
}

/// Smallest convenient rational upper bound for `sqrt(x)`.
pub fn sqrt_upper(x: &Rat) -> Result<Rat> {
    sqrt_bounds(x).map(|(_, hi)| hi)
}

/// `(lo, hi)` with `lo <= sqrt(x) <= hi` and `hi - lo <= 1e-15`-ish
/// (granularity `1/(denom * 10^15)`).
pub fn sqrt_bounds(x: &Rat) -> Result<(Rat, Rat)> {
    if x.is_negative() {
        return Err(CoreError::Domain("square root of a negative rational".into()));
    }
    if x.is_zero() {
        return Ok((Rat::zero(), Rat::zero()));
    }
    let scale = BigInt::from(10u32).pow(15);
    let n = x.numer().clone();
    let d = x.denom().clone();
    // sqrt(n/d) = sqrt(n*d)/d; work at integer precision d*scale
    let big = &n * &d * &scale * &scale;
    let root = big.sqrt(); // floor of the integer square root
    let denom = &d * &scale;
    let lo = Rat::new(root.clone(), denom.clone());
    let hi = Rat::new(root + BigInt::one(), denom);
    Ok((lo, hi))
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        CRat::new(rat_int(n), Rat::zero())
    }

    pub fn from_rat(re: Rat) -> Self {
        CRat::new(re, Rat::zero())
    }

    pub fn zero() -> Self {
        CRat::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        CRat::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, other: &CRat) -> Self {
        CRat::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn sub(&self, other: &CRat) -> Self {
        CRat::new(&self.re - &other.re, &self.im - &other.im)
    }

    pub fn mul(&self, other: &CRat) -> Self {
        CRat::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    /// `|z|^2`, exact.
    pub fn abs_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
        }
    }
}
