//! Exact rationals, points of the plane and their one-point compactifications.

use alloc::format;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `"p/q"` in lowest terms with positive denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact conversion of a finite double.
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(Rational::zero(), Rational::zero())
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A point of the line or plane, or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<P> {
    Finite(P),
    Infinity,
}

impl<P> Extended<P> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn finite(&self) -> Option<&P> {
        match self {
            Extended::Finite(p) => Some(p),
            Extended::Infinity => None,
        }
    }

    pub fn map<Q>(self, f: impl FnOnce(P) -> Q) -> Extended<Q> {
        match self {
            Extended::Finite(p) => Extended::Finite(f(p)),
            Extended::Infinity => Extended::Infinity,
        }
    }
}

impl<P: fmt::Display> fmt::Display for Extended<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(p) => p.fmt(f),
            Extended::Infinity => f.write_str("inf"),
        }
    }
}

pub type ExtPoint1 = Extended<Rational>;
pub type ExtPoint2 = Extended<Point2>;

/// Horizontal projection of an extended plane point.
pub fn project(p: &ExtPoint2) -> ExtPoint1 {
    match p {
        Extended::Finite(p) => Extended::Finite(p.x.clone()),
        Extended::Infinity => Extended::Infinity,
    }
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_roundtrip() {
        for s in ["3/4", "-7/2", "0/1", "5/1"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert_eq!(parse_rational(" 12 ").unwrap(), int(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn float_conversion() {
        assert_eq!(to_f64(&rat(1, 4)), 0.25);
        assert_eq!(from_f64(0.5).unwrap(), rat(1, 2));
    }
}
