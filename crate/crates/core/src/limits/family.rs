//! Families of smooth curves and of reparametrizations, indexed by `t -> 0+`.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::laurent::{ext_limit_pair, Laurent, RatFn};
use crate::moduli::{Reparam1, Reparam2, WitchCurve};
use crate::number::{ExtPoint2, Extended, Point2, Rational};

/// Zero-based `(seam, index)` of a marked point.
pub type PointKey = (usize, usize);

/// `|c| t^e` for the leading term `c t^e` of `d`: a positive scale with the same order as `d`.
pub fn scale_of(d: &Laurent) -> Result<Laurent> {
    let (e, c) = d
        .leading()
        .ok_or_else(|| Error::DegenerateFamily("two points coincide identically".into()))?;
    Ok(Laurent::monomial(num_traits::Signed::abs(c), e))
}

fn check_increasing(v: &[Laurent], what: &str) -> Result<()> {
    for (k, w) in v.windows(2).enumerate() {
        match w[0].cmp_eventually(&w[1]) {
            Ordering::Less => {}
            Ordering::Equal => {
                return Err(Error::DegenerateFamily(format!("{what} {k} and {} coincide", k + 1)))
            }
            Ordering::Greater => {
                return Err(Error::InvalidFamily(format!("{what} {k} and {} are out of order", k + 1)))
            }
        }
    }
    Ok(())
}

/// Smooth curves `x_i(t)`, `z_ij(t) = (x_i(t), y_ij(t))`, ordered for all small `t > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothFamily {
    x: Vec<Laurent>,
    y: Vec<Vec<Laurent>>,
}

impl SmoothFamily {
    pub fn new(x: Vec<Laurent>, y: Vec<Vec<Laurent>>) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::TypeVectorMismatch("one height list per seam is required".into()));
        }
        if y.iter().all(Vec::is_empty) {
            return Err(Error::TypeVectorMismatch("at least one marked point is required".into()));
        }
        check_increasing(&x, "abscissas")?;
        for (i, ys) in y.iter().enumerate() {
            check_increasing(ys, &format!("heights on seam {i}:"))?;
        }
        Ok(SmoothFamily { x, y })
    }

    pub fn seam_count(&self) -> usize {
        self.x.len()
    }

    pub fn type_vector(&self) -> Vec<usize> {
        self.y.iter().map(Vec::len).collect()
    }

    pub fn point_count(&self) -> usize {
        self.y.iter().map(Vec::len).sum()
    }

    pub fn x(&self) -> &[Laurent] {
        &self.x
    }

    pub fn y(&self) -> &[Vec<Laurent>] {
        &self.y
    }

    pub fn height(&self, (i, j): PointKey) -> &Laurent {
        &self.y[i][j]
    }

    pub fn point(&self, (i, j): PointKey) -> (&Laurent, &Laurent) {
        (&self.x[i], &self.y[i][j])
    }

    pub fn keys(&self) -> impl Iterator<Item = PointKey> + '_ {
        self.y
            .iter()
            .enumerate()
            .flat_map(|(i, ys)| (0..ys.len()).map(move |j| (i, j)))
    }

    /// Adds a point on seam `i`, placed by the eventual order of heights. Returns its index.
    pub fn with_point(&self, i: usize, y: Laurent) -> Result<(SmoothFamily, usize)> {
        if i >= self.x.len() {
            return Err(Error::TypeVectorMismatch(format!("no seam {i}")));
        }
        let mut j = 0;
        for (k, other) in self.y[i].iter().enumerate() {
            match other.cmp_eventually(&y) {
                Ordering::Less => j = k + 1,
                Ordering::Equal => return Err(Error::CoincidentPoint(i, k)),
                Ordering::Greater => break,
            }
        }
        let mut out = self.clone();
        out.y[i].insert(j, y);
        Ok((out, j))
    }

    /// Only the given points, keeping every seam.
    pub fn restricted(&self, keep: impl Fn(PointKey) -> bool) -> Result<SmoothFamily> {
        let y = self
            .y
            .iter()
            .enumerate()
            .map(|(i, ys)| {
                ys.iter()
                    .enumerate()
                    .filter(|(j, _)| keep((i, *j)))
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        SmoothFamily::new(self.x.clone(), y)
    }

    /// The family moved by a time-dependent reparametrization of the single component.
    pub fn apply_gauge(&self, g: &Reparam2Family) -> Result<SmoothFamily> {
        let x = self.x.iter().map(|x| &g.a * x + &g.bx).collect();
        let y = self
            .y
            .iter()
            .map(|ys| ys.iter().map(|y| &g.a * y + &g.by).collect())
            .collect();
        SmoothFamily::new(x, y)
    }

    /// The curve at a fixed parameter value; fails when `t` is not yet small enough.
    pub fn at(&self, t: &Rational) -> Result<WitchCurve> {
        let x = self.x.iter().map(|v| v.eval(t)).collect();
        let y = self
            .y
            .iter()
            .map(|ys| ys.iter().map(|v| v.eval(t)).collect())
            .collect();
        WitchCurve::smooth(x, y)
    }
}

/// `x -> a(t) x + b(t)` with `a` eventually positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reparam1Family {
    pub a: Laurent,
    pub b: Laurent,
}

impl Reparam1Family {
    pub fn new(a: Laurent, b: Laurent) -> Result<Self> {
        if a.sign() != Ordering::Greater {
            return Err(Error::InvalidFamily(format!("scale {a} is not eventually positive")));
        }
        Ok(Reparam1Family { a, b })
    }

    pub fn constant(f: &Reparam1) -> Self {
        Reparam1Family { a: f.a.clone().into(), b: f.b.clone().into() }
    }

    pub fn apply(&self, x: &Laurent) -> Laurent {
        &self.a * x + &self.b
    }

    /// The inverse applied to `x`.
    pub fn pull(&self, x: &Laurent) -> RatFn {
        RatFn::new(x - &self.b, self.a.clone())
    }

    /// `self^{-1} ∘ other`.
    pub fn relative(&self, other: &Reparam1Family) -> Relative {
        Relative {
            a: RatFn::new(other.a.clone(), self.a.clone()),
            bx: self.pull(&other.b),
            by: RatFn::from(Laurent::zero()),
        }
    }

    /// `self ∘ c`.
    pub fn compose_const(&self, c: &Reparam1) -> Self {
        Reparam1Family {
            a: self.a.scale(&c.a),
            b: self.a.scale(&c.b) + &self.b,
        }
    }

    pub fn at(&self, t: &Rational) -> Result<Reparam1> {
        Reparam1::new(self.a.eval(t), self.b.eval(t))
    }
}

/// `z -> a(t) z + (bx(t), by(t))` with `a` eventually positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reparam2Family {
    pub a: Laurent,
    pub bx: Laurent,
    pub by: Laurent,
}

impl Reparam2Family {
    pub fn new(a: Laurent, bx: Laurent, by: Laurent) -> Result<Self> {
        Reparam1Family::new(a.clone(), bx.clone())?;
        Ok(Reparam2Family { a, bx, by })
    }

    pub fn constant(f: &Reparam2) -> Self {
        Reparam2Family {
            a: f.a.clone().into(),
            bx: f.b.x.clone().into(),
            by: f.b.y.clone().into(),
        }
    }

    /// Horizontal part `phi` with vertical translation `by`.
    pub fn over(phi: &Reparam1Family, by: Laurent) -> Self {
        Reparam2Family { a: phi.a.clone(), bx: phi.b.clone(), by }
    }

    pub fn horizontal(&self) -> Reparam1Family {
        Reparam1Family { a: self.a.clone(), b: self.bx.clone() }
    }

    pub fn apply(&self, x: &Laurent, y: &Laurent) -> (Laurent, Laurent) {
        (&self.a * x + &self.bx, &self.a * y + &self.by)
    }

    pub fn pull(&self, x: &Laurent, y: &Laurent) -> (RatFn, RatFn) {
        (
            RatFn::new(x - &self.bx, self.a.clone()),
            RatFn::new(y - &self.by, self.a.clone()),
        )
    }

    /// Limit of the inverse applied to a point family.
    pub fn pull_limit(&self, x: &Laurent, y: &Laurent) -> ExtPoint2 {
        let (u, v) = self.pull(x, y);
        ext_limit_pair(&u, &v)
    }

    pub fn relative(&self, other: &Reparam2Family) -> Relative {
        let (bx, by) = self.pull(&other.bx, &other.by);
        Relative { a: RatFn::new(other.a.clone(), self.a.clone()), bx, by }
    }

    pub fn compose_const(&self, c: &Reparam2) -> Self {
        Reparam2Family {
            a: self.a.scale(&c.a),
            bx: self.a.scale(&c.b.x) + &self.bx,
            by: self.a.scale(&c.b.y) + &self.by,
        }
    }

    pub fn at(&self, t: &Rational) -> Result<Reparam2> {
        Reparam2::new(self.a.eval(t), Point2::new(self.bx.eval(t), self.by.eval(t)))
    }
}

/// An affine family `z -> a z + b` with rational-function coefficients.
#[derive(Clone, Debug)]
pub struct Relative {
    pub a: RatFn,
    pub bx: RatFn,
    pub by: RatFn,
}

fn tends_to_zero(f: &RatFn) -> bool {
    f.order().is_some_and(|k| k > 0)
}

fn diverges(f: &RatFn) -> bool {
    f.order().is_some_and(|k| k < 0)
}

impl Relative {
    /// Whether the family converges to the constant `w` uniformly on compact subsets
    /// of the sphere minus `w_away`. For affine maps this reduces to limits of coefficients.
    pub fn converges_away(&self, w: &ExtPoint2, w_away: &ExtPoint2) -> bool {
        match (w, w_away) {
            (Extended::Finite(w), Extended::Infinity) => {
                tends_to_zero(&self.a) && ext_limit_pair(&self.bx, &self.by) == Extended::Finite(w.clone())
            }
            (Extended::Infinity, Extended::Finite(w_away)) => {
                diverges(&self.a)
                    && ext_limit_pair(&self.bx.div(&self.a).neg(), &self.by.div(&self.a).neg())
                        == Extended::Finite(w_away.clone())
            }
            (Extended::Infinity, Extended::Infinity) => {
                ext_limit_pair(&self.bx, &self.by).is_infinite()
                    && ext_limit_pair(&self.bx.div(&self.a), &self.by.div(&self.a)).is_infinite()
            }
            (Extended::Finite(_), Extended::Finite(_)) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;
    use alloc::vec;

    fn l(terms: &[(i32, i64)]) -> Laurent {
        Laurent::from_terms(terms.iter().map(|(e, c)| (*e, int(*c))))
    }

    #[test]
    fn family_validation() {
        let ok = SmoothFamily::new(vec![l(&[]), l(&[(1, 1)])], vec![vec![l(&[])], vec![]]).unwrap();
        assert_eq!(ok.type_vector(), vec![1, 0]);
        assert!(matches!(
            SmoothFamily::new(vec![l(&[(1, 1)]), l(&[(1, 1)])], vec![vec![l(&[])], vec![]]),
            Err(Error::DegenerateFamily(_))
        ));
        assert!(matches!(
            SmoothFamily::new(vec![l(&[(0, 1)])], vec![vec![l(&[(0, 1)]), l(&[(1, 1)])]]),
            Err(Error::InvalidFamily(_))
        ));
        let (f, j) = ok.with_point(0, l(&[(1, -1)])).unwrap();
        assert_eq!(j, 0);
        assert_eq!(f.type_vector(), vec![2, 0]);
        assert_eq!(ok.with_point(0, l(&[])), Err(Error::CoincidentPoint(0, 0)));
    }

    #[test]
    fn affine_convergence_rules() {
        let id = Reparam2Family::new(l(&[(0, 1)]), l(&[]), l(&[])).unwrap();
        let small = Reparam2Family::new(l(&[(2, 1)]), l(&[(1, 1)]), l(&[(0, 3)])).unwrap();
        let rel = id.relative(&small);
        let p = Extended::Finite(Point2::new(int(0), int(3)));
        assert!(rel.converges_away(&p, &Extended::Infinity));
        let back = small.relative(&id);
        assert!(back.converges_away(&Extended::Infinity, &p));
        assert!(!back.converges_away(&Extended::Infinity, &Extended::Finite(Point2::origin())));
        let far = Reparam2Family::new(l(&[(2, 1)]), l(&[(0, 5)]), l(&[])).unwrap();
        assert!(small.relative(&far).converges_away(&Extended::Infinity, &Extended::Infinity));
    }

    #[test]
    fn constant_composition() {
        let f = Reparam2Family::new(l(&[(1, 2)]), l(&[(0, 1)]), l(&[(2, 1)])).unwrap();
        let c = Reparam2::new(int(3), Point2::new(int(1), int(-1))).unwrap();
        let g = f.compose_const(&c);
        let t = int(1) / int(5);
        assert_eq!(g.at(&t).unwrap(), f.at(&t).unwrap().compose(&c));
    }
}
