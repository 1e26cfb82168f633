//! Laurent polynomials in a parameter `t` and their quotients, with limits as `t -> 0+`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::number::{to_f64, ExtPoint1, Extended, Rational};

/// Finite sum of `c * t^e` with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    terms: BTreeMap<i32, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::constant(crate::number::one())
    }

    pub fn constant(c: Rational) -> Self {
        Laurent::monomial(c, 0)
    }

    pub fn monomial(c: Rational, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms }
    }

    /// Sums repeated exponents and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Rational)>) -> Self {
        let mut out = Laurent::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: i32, c: Rational) {
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Lowest exponent present.
    pub fn order(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(i32, &Rational)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    /// Sign for all sufficiently small `t > 0`.
    pub fn sign(&self) -> Ordering {
        match self.leading() {
            None => Ordering::Equal,
            Some((_, c)) => c.cmp(&Rational::zero()),
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Exact value at a nonzero rational `t`.
    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            acc += c * pow(t, *e);
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * libm::pow(t, *e as f64))
            .sum()
    }

    pub fn limit(&self) -> ExtPoint1 {
        match self.order() {
            None => Extended::Finite(Rational::zero()),
            Some(e) if e < 0 => Extended::Infinity,
            Some(_) => Extended::Finite(self.terms.get(&0).cloned().unwrap_or_else(Rational::zero)),
        }
    }

    /// Eventual comparison of `self` and `other` as `t -> 0+`.
    pub fn cmp_eventually(&self, other: &Laurent) -> Ordering {
        (self - other).sign()
    }
}

fn pow(t: &Rational, e: i32) -> Rational {
    let base = if e < 0 { t.recip() } else { t.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match *e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add<&Laurent> for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&Laurent> for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul<&Laurent> for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Laurent> for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent { (&self).$m(&rhs) }
        }
        impl $tr<&Laurent> for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: &Laurent) -> Laurent { (&self).$m(rhs) }
        }
        impl $tr<Laurent> for &Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl From<Rational> for Laurent {
    fn from(c: Rational) -> Self {
        Laurent::constant(c)
    }
}

/// Quotient of two Laurent polynomials; the denominator is never zero.
#[derive(Clone, Debug)]
pub struct RatFn {
    num: Laurent,
    den: Laurent,
}

impl RatFn {
    pub fn new(num: Laurent, den: Laurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFn { num, den }
    }

    pub fn numerator(&self) -> &Laurent {
        &self.num
    }

    pub fn denominator(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Valuation `ord(num) - ord(den)`; `None` for zero.
    pub fn order(&self) -> Option<i32> {
        Some(self.num.order()? - self.den.order()?)
    }

    pub fn sign(&self) -> Ordering {
        match (self.num.sign(), self.den.sign()) {
            (Ordering::Equal, _) => Ordering::Equal,
            (a, b) if a == b => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    pub fn limit(&self) -> ExtPoint1 {
        let Some(k) = self.order() else {
            return Extended::Finite(Rational::zero());
        };
        match k.cmp(&0) {
            Ordering::Less => Extended::Infinity,
            Ordering::Greater => Extended::Finite(Rational::zero()),
            Ordering::Equal => {
                let (_, n) = self.num.leading().unwrap();
                let (_, d) = self.den.leading().unwrap();
                Extended::Finite(n / d)
            }
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.num.eval(t) / self.den.eval(t)
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        RatFn::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &RatFn) -> RatFn {
        assert!(!other.is_zero(), "division by zero");
        RatFn::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        RatFn::new(
            &self.num * &other.den + &other.num * &self.den,
            &self.den * &other.den,
        )
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        RatFn::new(
            &self.num * &other.den - &other.num * &self.den,
            &self.den * &other.den,
        )
    }

    pub fn neg(&self) -> RatFn {
        RatFn::new(-&self.num, self.den.clone())
    }

    pub fn abs(&self) -> RatFn {
        if self.sign() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn equals(&self, other: &RatFn) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl From<Laurent> for RatFn {
    fn from(l: Laurent) -> Self {
        RatFn::new(l, Laurent::one())
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

/// Limit of a pair: infinite as soon as one coordinate diverges.
pub fn ext_limit_pair(x: &RatFn, y: &RatFn) -> crate::number::ExtPoint2 {
    match (x.limit(), y.limit()) {
        (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(crate::number::Point2::new(a, b)),
        _ => Extended::Infinity,
    }
}

/// Largest order of divergence among coordinates, used to compare growth rates.
pub fn min_order(values: &[&RatFn]) -> Option<i32> {
    values.iter().filter_map(|v| v.order()).min()
}

pub fn laurent_vec_eval(values: &[Laurent], t: &Rational) -> Vec<Rational> {
    values.iter().map(|v| v.eval(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};

    fn l(terms: &[(i32, i64)]) -> Laurent {
        Laurent::from_terms(terms.iter().map(|(e, c)| (*e, int(*c))))
    }

    #[test]
    fn limits() {
        assert_eq!(l(&[(0, 3), (1, 2)]).limit(), Extended::Finite(int(3)));
        assert_eq!(l(&[(-1, 1)]).limit(), Extended::Infinity);
        assert_eq!(
            ext_limit_pair(&l(&[(1, 1)]).into(), &l(&[(0, 1), (2, -1)]).into()),
            Extended::Finite(crate::number::Point2::new(int(0), int(1)))
        );
        let q = RatFn::new(l(&[(1, 2), (2, 1)]), l(&[(1, 4)]));
        assert_eq!(q.limit(), Extended::Finite(rat(1, 2)));
    }

    #[test]
    fn arithmetic_and_eval() {
        let a = l(&[(-1, 1), (0, 2)]);
        let b = l(&[(1, 3)]);
        let p = &a * &b;
        assert_eq!(p, l(&[(0, 3), (1, 6)]));
        assert_eq!((&a - &a), Laurent::zero());
        assert_eq!(a.eval(&rat(1, 2)), int(4));
        assert_eq!(l(&[(1, -1), (2, 5)]).sign(), Ordering::Less);
        assert!(RatFn::new(a.clone(), b.clone()).equals(&RatFn::new(&a * &a, &a * &b)));
    }
}
