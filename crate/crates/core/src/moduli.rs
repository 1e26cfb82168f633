//! Exact points of the compactified moduli spaces: disk trees and witch curves,
//! the translation-dilation groups acting on them, derived special-point
//! coordinates and canonical representatives of isomorphism classes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{ExtPoint1, ExtPoint2, Extended, Point2, Rational};
use crate::treepair::{BubbleId, TreePair};
use crate::trees::{Rrt, VertexId};

/// `x -> a x + b` with `a > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Reparam1 {
    pub a: Rational,
    pub b: Rational,
}

impl Reparam1 {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidCoordinates(format!("dilation {a} is not positive")));
        }
        Ok(Reparam1 { a, b })
    }

    pub fn identity() -> Self {
        Reparam1 { a: Rational::one(), b: Rational::zero() }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.a * x + &self.b
    }

    pub fn apply_ext(&self, x: &ExtPoint1) -> ExtPoint1 {
        match x {
            Extended::Finite(x) => Extended::Finite(self.apply(x)),
            Extended::Infinity => Extended::Infinity,
        }
    }

    pub fn inverse(&self) -> Self {
        let a = self.a.recip();
        let b = -(&self.b * &a);
        Reparam1 { a, b }
    }

    /// `self` after `inner`.
    pub fn compose(&self, inner: &Reparam1) -> Self {
        Reparam1 {
            a: &self.a * &inner.a,
            b: &self.a * &inner.b + &self.b,
        }
    }
}

/// `z -> a z + b` on the plane with `a > 0`, fixing infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Reparam2 {
    pub a: Rational,
    pub b: Point2,
}

impl Reparam2 {
    pub fn new(a: Rational, b: Point2) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidCoordinates(format!("dilation {a} is not positive")));
        }
        Ok(Reparam2 { a, b })
    }

    pub fn identity() -> Self {
        Reparam2 { a: Rational::one(), b: Point2::origin() }
    }

    /// Same dilation with the given horizontal part and vertical translation.
    pub fn over(h: &Reparam1, by: Rational) -> Self {
        Reparam2 { a: h.a.clone(), b: Point2::new(h.b.clone(), by) }
    }

    pub fn apply(&self, z: &Point2) -> Point2 {
        Point2::new(&self.a * &z.x + &self.b.x, &self.a * &z.y + &self.b.y)
    }

    pub fn apply_ext(&self, z: &ExtPoint2) -> ExtPoint2 {
        match z {
            Extended::Finite(z) => Extended::Finite(self.apply(z)),
            Extended::Infinity => Extended::Infinity,
        }
    }

    pub fn inverse(&self) -> Self {
        let a = self.a.recip();
        let b = Point2::new(-(&self.b.x * &a), -(&self.b.y * &a));
        Reparam2 { a, b }
    }

    pub fn compose(&self, inner: &Reparam2) -> Self {
        Reparam2 {
            a: &self.a * &inner.a,
            b: Point2::new(
                &self.a * &inner.b.x + &self.b.x,
                &self.a * &inner.b.y + &self.b.y,
            ),
        }
    }

    /// The induced map on abscissas.
    pub fn horizontal(&self) -> Reparam1 {
        Reparam1 { a: self.a.clone(), b: self.b.x.clone() }
    }
}

/// A seam-tree vertex, or the formal vertex past the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeamTarget {
    Vertex(VertexId),
    LeafInfinity,
}

/// A bubble vertex, or the formal mark past the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BubbleTarget {
    Vertex(BubbleId),
    MarkInfinity,
}

pub type SeamCoords = BTreeMap<VertexId, Vec<Rational>>;
pub type SeamMaps = BTreeMap<VertexId, Reparam1>;
pub type ComponentMaps = BTreeMap<BubbleId, Reparam2>;

fn strictly_increasing(v: &[Rational]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn check_seam_coords(tree: &Rrt, x: &SeamCoords) -> Result<()> {
    let interior: BTreeSet<VertexId> = tree.interior().collect();
    let given: BTreeSet<VertexId> = x.keys().copied().collect();
    if interior != given {
        return Err(Error::InvalidCoordinates(format!(
            "abscissas given at {given:?} but interior vertices are {interior:?}"
        )));
    }
    for (v, xs) in x {
        if xs.len() != tree.in_degree(*v) {
            return Err(Error::InvalidCoordinates(format!(
                "vertex {v} has {} incoming but {} abscissas",
                tree.in_degree(*v),
                xs.len()
            )));
        }
        if !strictly_increasing(xs) {
            return Err(Error::InvalidCoordinates(format!("abscissas at vertex {v} are not increasing")));
        }
    }
    Ok(())
}

/// `x_{ρσ}`: the abscissa at `rho` of the incoming edge leading to `sigma`, or infinity
/// when the path leaves `rho` toward the root.
fn seam_x(tree: &Rrt, x: &SeamCoords, rho: VertexId, sigma: SeamTarget) -> Result<ExtPoint1> {
    if rho >= tree.len() || tree.is_leaf(rho) {
        return Err(Error::VertexNotFound(rho));
    }
    let sigma = match sigma {
        SeamTarget::LeafInfinity => return Ok(Extended::Infinity),
        SeamTarget::Vertex(s) => s,
    };
    if sigma >= tree.len() {
        return Err(Error::VertexNotFound(sigma));
    }
    if sigma == rho {
        return Err(Error::IdenticalEndpoints);
    }
    if !tree.is_ancestor(rho, sigma) {
        return Ok(Extended::Infinity);
    }
    let i = tree
        .children(rho)
        .iter()
        .position(|c| tree.is_ancestor(*c, sigma))
        .unwrap();
    Ok(Extended::Finite(x[&rho][i].clone()))
}

/// The map sending the first abscissa at each vertex to 0 and the last to 1.
fn canonical_seam_maps(tree: &Rrt, x: &SeamCoords) -> SeamMaps {
    tree.interior()
        .map(|v| {
            let xs = &x[&v];
            let first = &xs[0];
            let last = &xs[xs.len() - 1];
            let a = if xs.len() >= 2 { (last - first).recip() } else { Rational::one() };
            let b = -(first * &a);
            (v, Reparam1 { a, b })
        })
        .collect()
}

fn apply_seam_maps(x: &SeamCoords, phi: &SeamMaps) -> Result<SeamCoords> {
    x.iter()
        .map(|(v, xs)| {
            let f = phi
                .get(v)
                .ok_or_else(|| Error::InvalidCoordinates(format!("no reparametrization at vertex {v}")))?;
            Ok((*v, xs.iter().map(|x| f.apply(x)).collect()))
        })
        .collect()
}

/// A point of the moduli space of stable disk trees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiskTree {
    tree: Rrt,
    x: SeamCoords,
}

impl DiskTree {
    pub fn new(tree: Rrt, x: SeamCoords) -> Result<Self> {
        if !tree.is_stable() {
            return Err(Error::SeamTreeUnstable);
        }
        check_seam_coords(&tree, &x)?;
        Ok(DiskTree { tree, x })
    }

    pub fn tree(&self) -> &Rrt {
        &self.tree
    }

    pub fn x(&self) -> &SeamCoords {
        &self.x
    }

    pub fn derived_x(&self, rho: VertexId, sigma: SeamTarget) -> Result<ExtPoint1> {
        seam_x(&self.tree, &self.x, rho, sigma)
    }

    pub fn apply_reparam(&self, phi: &SeamMaps) -> Result<DiskTree> {
        Ok(DiskTree { tree: self.tree.clone(), x: apply_seam_maps(&self.x, phi)? })
    }

    /// The canonical representative and the maps taking `self` to it.
    pub fn canonical_form(&self) -> (DiskTree, SeamMaps) {
        let phi = canonical_seam_maps(&self.tree, &self.x);
        (self.apply_reparam(&phi).unwrap(), phi)
    }

    /// Maps taking `self` to `other` when the two are isomorphic.
    pub fn is_isomorphic(&self, other: &DiskTree) -> Option<SeamMaps> {
        if self.tree != other.tree {
            return None;
        }
        let (c1, f1) = self.canonical_form();
        let (c2, f2) = other.canonical_form();
        if c1 != c2 {
            return None;
        }
        Some(f1.iter().map(|(v, f)| (*v, f2[v].inverse().compose(f))).collect())
    }
}

/// Coordinates on one component: an abscissa per seam and increasing heights per seam.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComponentCoords {
    pub x: Vec<Rational>,
    pub y: Vec<Vec<Rational>>,
}

impl ComponentCoords {
    pub fn point(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.x[i].clone(), self.y[i][j].clone())
    }

    fn transformed(&self, psi: &Reparam2) -> ComponentCoords {
        ComponentCoords {
            x: self.x.iter().map(|x| &psi.a * x + &psi.b.x).collect(),
            y: self
                .y
                .iter()
                .map(|ys| ys.iter().map(|y| &psi.a * y + &psi.b.y).collect())
                .collect(),
        }
    }
}

/// A point of the compactified moduli space of witch curves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WitchCurve {
    pair: TreePair,
    x: SeamCoords,
    z: BTreeMap<BubbleId, ComponentCoords>,
}

/// Maps taking one curve to an isomorphic one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub phi: SeamMaps,
    pub psi: ComponentMaps,
}

impl WitchCurve {
    pub fn new(pair: TreePair, x: SeamCoords, z: BTreeMap<BubbleId, ComponentCoords>) -> Result<Self> {
        check_seam_coords(pair.seam_tree(), &x)?;
        let comps: BTreeSet<BubbleId> = pair.components().collect();
        let given: BTreeSet<BubbleId> = z.keys().copied().collect();
        if comps != given {
            return Err(Error::InvalidCoordinates(format!(
                "coordinates given at {given:?} but components are {comps:?}"
            )));
        }
        for (a, c) in &z {
            let seams = pair.seams_of(*a);
            if c.x.len() != seams.len() || c.y.len() != seams.len() {
                return Err(Error::InvalidCoordinates(format!("component {a} has the wrong number of seams")));
            }
            if !strictly_increasing(&c.x) {
                return Err(Error::InvalidCoordinates(format!("abscissas of component {a} are not increasing")));
            }
            for (i, ys) in c.y.iter().enumerate() {
                if ys.len() != pair.items_on(*a, i).len() {
                    return Err(Error::InvalidCoordinates(format!(
                        "component {a}, seam {i}: {} heights for {} items",
                        ys.len(),
                        pair.items_on(*a, i).len()
                    )));
                }
                if !strictly_increasing(ys) {
                    return Err(Error::InvalidCoordinates(format!(
                        "heights on component {a}, seam {i} are not increasing"
                    )));
                }
            }
            if seams.len() >= 2 && c.x != x[&pair.label(*a)] {
                return Err(Error::InvalidCoordinates(format!(
                    "component {a} must share the abscissas of its seam-tree vertex"
                )));
            }
        }
        Ok(WitchCurve { pair, x, z })
    }

    /// Smooth curve from seam abscissas and per-seam heights.
    pub fn smooth(x: Vec<Rational>, y: Vec<Vec<Rational>>) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::TypeVectorMismatch("one height list per seam is required".into()));
        }
        let n: Vec<usize> = y.iter().map(Vec::len).collect();
        if n.iter().all(|k| *k == 0) {
            return Err(Error::TypeVectorMismatch("at least one marked point is required".into()));
        }
        let pair = TreePair::smooth(&n);
        let mut xs = SeamCoords::new();
        xs.insert(0, x.clone());
        let mut z = BTreeMap::new();
        z.insert(0, ComponentCoords { x, y });
        WitchCurve::new(pair, xs, z)
    }

    pub fn pair(&self) -> &TreePair {
        &self.pair
    }

    pub fn x(&self) -> &SeamCoords {
        &self.x
    }

    pub fn z(&self) -> &BTreeMap<BubbleId, ComponentCoords> {
        &self.z
    }

    pub fn coords(&self, a: BubbleId) -> &ComponentCoords {
        &self.z[&a]
    }

    pub fn disk_tree(&self) -> DiskTree {
        DiskTree { tree: self.pair.seam_tree().clone(), x: self.x.clone() }
    }

    fn check_component(&self, a: BubbleId) -> Result<()> {
        if self.pair.is_component(a) {
            Ok(())
        } else {
            Err(Error::VertexNotFound(a))
        }
    }

    /// `z_{αβ}`: the special point of `alpha` through which the path to `beta` leaves,
    /// or infinity when it leaves toward the root.
    pub fn derived_z(&self, alpha: BubbleId, beta: BubbleTarget) -> Result<ExtPoint2> {
        self.check_component(alpha)?;
        let beta = match beta {
            BubbleTarget::MarkInfinity => return Ok(Extended::Infinity),
            BubbleTarget::Vertex(b) => b,
        };
        if beta >= self.pair.len() || !(self.pair.is_component(beta) || self.pair.is_mark(beta)) {
            return Err(Error::VertexNotFound(beta));
        }
        if beta == alpha {
            return Err(Error::IdenticalEndpoints);
        }
        if !self.pair.is_ancestor(alpha, beta) {
            return Ok(Extended::Infinity);
        }
        let mut item = beta;
        loop {
            let (a, i, j) = self.pair.attachment(item).unwrap();
            if a == alpha {
                return Ok(Extended::Finite(self.z[&alpha].point(i, j)));
            }
            item = a;
        }
    }

    /// `x_{αβ}`: horizontal part of `z_{αβ}`.
    pub fn derived_x_bubble(&self, alpha: BubbleId, beta: BubbleTarget) -> Result<ExtPoint1> {
        Ok(crate::number::project(&self.derived_z(alpha, beta)?))
    }

    /// `x_{αρ}` for a seam-tree vertex. Multi-seam components read it off their seam-tree
    /// vertex; single-seam components see every vertex over their own at their one abscissa
    /// and everything else at infinity.
    pub fn derived_x_seam(&self, alpha: BubbleId, rho: SeamTarget) -> Result<ExtPoint1> {
        self.check_component(alpha)?;
        let ts = self.pair.seam_tree();
        let own = self.pair.label(alpha);
        match rho {
            SeamTarget::LeafInfinity => Ok(Extended::Infinity),
            SeamTarget::Vertex(v) if v >= ts.len() => Err(Error::VertexNotFound(v)),
            SeamTarget::Vertex(v) => {
                if self.pair.is_single_seam(alpha) {
                    if ts.is_ancestor(own, v) {
                        Ok(Extended::Finite(self.z[&alpha].x[0].clone()))
                    } else {
                        Ok(Extended::Infinity)
                    }
                } else {
                    seam_x(ts, &self.x, own, SeamTarget::Vertex(v))
                }
            }
        }
    }

    /// `x_{ρσ}` on the underlying disk tree.
    pub fn derived_x_tree(&self, rho: VertexId, sigma: SeamTarget) -> Result<ExtPoint1> {
        seam_x(self.pair.seam_tree(), &self.x, rho, sigma)
    }

    /// Nodal points and special points of a component.
    pub fn special_sets(&self, alpha: BubbleId) -> Result<(BTreeSet<ExtPoint2>, BTreeSet<ExtPoint2>)> {
        self.check_component(alpha)?;
        let mut node = BTreeSet::new();
        for b in self.pair.components().filter(|b| *b != alpha) {
            node.insert(self.derived_z(alpha, BubbleTarget::Vertex(b))?);
        }
        let mut spec = node.clone();
        for m in self.pair.marks() {
            spec.insert(self.derived_z(alpha, BubbleTarget::Vertex(m))?);
        }
        spec.insert(Extended::Infinity);
        Ok((node, spec))
    }

    pub fn apply_reparam(&self, phi: &SeamMaps, psi: &ComponentMaps) -> Result<WitchCurve> {
        for a in self.pair.components() {
            let p = psi
                .get(&a)
                .ok_or_else(|| Error::InvalidCoordinates(format!("no reparametrization at component {a}")))?;
            if !self.pair.is_single_seam(a) {
                let f = phi
                    .get(&self.pair.label(a))
                    .ok_or_else(|| Error::InvalidCoordinates(format!("no reparametrization at vertex {}", self.pair.label(a))))?;
                if p.horizontal() != *f {
                    return Err(Error::ProjectionMismatch(a));
                }
            }
        }
        let x = apply_seam_maps(&self.x, phi)?;
        let z = self.z.iter().map(|(a, c)| (*a, c.transformed(&psi[a]))).collect();
        Ok(WitchCurve { pair: self.pair.clone(), x, z })
    }

    /// Maps taking `self` to its canonical representative.
    pub fn canonical_maps(&self) -> (SeamMaps, ComponentMaps) {
        let ts = self.pair.seam_tree();
        let phi = canonical_seam_maps(ts, &self.x);
        let mut psi = ComponentMaps::new();
        for a in self.pair.components() {
            let c = &self.z[&a];
            let map = if self.pair.is_single_seam(a) {
                let ys = &c.y[0];
                let scale = if ys.len() >= 2 { (&ys[1] - &ys[0]).recip() } else { Rational::one() };
                Reparam2 {
                    b: Point2::new(-(&c.x[0] * &scale), -(&ys[0] * &scale)),
                    a: scale,
                }
            } else {
                let h = &phi[&self.pair.label(a)];
                let least = c.y.iter().find(|ys| !ys.is_empty()).map(|ys| ys[0].clone()).unwrap_or_default();
                Reparam2::over(h, -(&h.a * &least))
            };
            psi.insert(a, map);
        }
        (phi, psi)
    }

    /// The canonical representative and the maps taking `self` to it.
    pub fn canonical_form(&self) -> (WitchCurve, SeamMaps, ComponentMaps) {
        let (phi, psi) = self.canonical_maps();
        (self.apply_reparam(&phi, &psi).unwrap(), phi, psi)
    }

    /// Maps taking `self` to `other` when the two are isomorphic.
    pub fn is_isomorphic(&self, other: &WitchCurve) -> Option<Isomorphism> {
        if self.pair != other.pair {
            return None;
        }
        let (c1, f1, g1) = self.canonical_form();
        let (c2, f2, g2) = other.canonical_form();
        if c1 != c2 {
            return None;
        }
        Some(Isomorphism {
            phi: f1.iter().map(|(v, f)| (*v, f2[v].inverse().compose(f))).collect(),
            psi: g1.iter().map(|(a, g)| (*a, g2[a].inverse().compose(g))).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};
    use crate::treepair::all_tree_pairs;
    use alloc::vec;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|k| int(*k)).collect()
    }

    #[test]
    fn group_laws() {
        let f = Reparam1::new(rat(3, 2), int(-1)).unwrap();
        let g = Reparam1::new(int(4), rat(1, 3)).unwrap();
        let x = rat(5, 7);
        assert_eq!(f.compose(&g).apply(&x), f.apply(&g.apply(&x)));
        assert_eq!(f.inverse().apply(&f.apply(&x)), x);
        let h = Reparam2::new(int(2), Point2::new(int(1), int(1))).unwrap();
        let p = Point2::new(int(3), int(-2));
        assert_eq!(h.apply(&p), Point2::new(int(7), int(-3)));
        assert_eq!(h.inverse().apply(&h.apply(&p)), p);
        assert!(Reparam1::new(int(0), int(0)).is_err());
        assert_eq!(h.apply_ext(&Extended::Infinity), Extended::Infinity);
    }

    #[test]
    fn smooth_canonical_forms() {
        let w = WitchCurve::smooth(q(&[5]), vec![q(&[2, 9])]).unwrap();
        let (c, _, _) = w.canonical_form();
        assert_eq!(c.coords(0).x, q(&[0]));
        assert_eq!(c.coords(0).y, vec![q(&[0, 1])]);
        assert_eq!(c.canonical_form().0, c);

        let a = WitchCurve::smooth(q(&[0]), vec![q(&[0, 1, 3])]).unwrap();
        let b = WitchCurve::smooth(q(&[0]), vec![q(&[0, 1, 2])]).unwrap();
        assert!(a.is_isomorphic(&b).is_none());

        let w = WitchCurve::smooth(q(&[1, 4]), vec![q(&[1, 2]), q(&[0])]).unwrap();
        let psi = Reparam2::new(int(2), Point2::new(int(1), int(1))).unwrap();
        let phi: SeamMaps = [(0, psi.horizontal())].into();
        let moved = w.apply_reparam(&phi, &[(0, psi.clone())].into()).unwrap();
        assert_eq!(moved.coords(0).x, q(&[3, 9]));
        assert_eq!(moved.coords(0).y, vec![q(&[3, 5]), q(&[1])]);
        let iso = w.is_isomorphic(&moved).unwrap();
        assert_eq!(w.apply_reparam(&iso.phi, &iso.psi).unwrap(), moved);
        let bad = Reparam2::new(int(2), Point2::new(int(0), int(1))).unwrap();
        assert_eq!(w.apply_reparam(&phi, &[(0, bad)].into()), Err(Error::ProjectionMismatch(0)));
    }

    #[test]
    fn derived_points_on_two_components() {
        // n = (2): the only proper stratum-free pair is smooth, so use n = (3) with a bubble.
        let p = all_tree_pairs(&[3])
            .into_iter()
            .find(|p| p.component_count() == 2 && p.items_on(0, 0).len() == 2 && p.is_component(p.items_on(0, 0)[0]))
            .unwrap();
        let bubble = p.items_on(0, 0)[0];
        let mut z = BTreeMap::new();
        z.insert(0, ComponentCoords { x: q(&[0]), y: vec![q(&[0, 1])] });
        z.insert(bubble, ComponentCoords { x: q(&[0]), y: vec![q(&[0, 1])] });
        let w = WitchCurve::new(p.clone(), [(0, q(&[0]))].into(), z).unwrap();
        assert_eq!(w.derived_z(0, BubbleTarget::Vertex(bubble)).unwrap(), Extended::Finite(Point2::origin()));
        assert_eq!(w.derived_z(bubble, BubbleTarget::Vertex(0)).unwrap(), Extended::Infinity);
        assert_eq!(w.derived_z(0, BubbleTarget::MarkInfinity).unwrap(), Extended::Infinity);
        let m = p.mark(0, 1).unwrap();
        assert_eq!(w.derived_z(0, BubbleTarget::Vertex(m)).unwrap(), Extended::Finite(Point2::origin()));
        let (node, spec) = w.special_sets(0).unwrap();
        assert_eq!(node.len(), 1);
        assert_eq!(spec.len(), 3);
    }

    #[test]
    fn single_seam_abscissa_rule() {
        // Over the 2-leaf corolla: root with a bubble carrying both marks of seam 1.
        let p = all_tree_pairs(&[0, 2])
            .into_iter()
            .find(|p| p.component_count() == 2)
            .unwrap();
        let bubble = p.components().nth(1).unwrap();
        assert!(p.is_single_seam(bubble));
        let ts = p.seam_tree().clone();
        let mut z = BTreeMap::new();
        z.insert(0, ComponentCoords { x: q(&[0, 1]), y: vec![q(&[]), q(&[0])] });
        z.insert(bubble, ComponentCoords { x: q(&[7]), y: vec![q(&[0, 1])] });
        let w = WitchCurve::new(p, [(0, q(&[0, 1]))].into(), z).unwrap();
        assert_eq!(w.derived_x_seam(bubble, SeamTarget::Vertex(ts.leaf(1))).unwrap(), Extended::Finite(int(7)));
        assert_eq!(w.derived_x_seam(bubble, SeamTarget::Vertex(ts.leaf(0))).unwrap(), Extended::Infinity);
        assert_eq!(w.derived_x_seam(0, SeamTarget::Vertex(ts.leaf(0))).unwrap(), Extended::Finite(int(0)));
        assert_eq!(w.derived_x_seam(0, SeamTarget::LeafInfinity).unwrap(), Extended::Infinity);
    }

    #[test]
    fn disk_tree_canonical_form() {
        let t = Rrt::parse("(.(..))").unwrap();
        let inner = t.parent(t.leaf(1)).unwrap();
        let d = DiskTree::new(t.clone(), [(0, q(&[2, 6])), (inner, q(&[-1, 3]))].into()).unwrap();
        let (c, _) = d.canonical_form();
        assert_eq!(c.x()[&0], q(&[0, 1]));
        assert_eq!(c.x()[&inner], q(&[0, 1]));
        assert!(d.is_isomorphic(&c).is_some());
        assert_eq!(d.derived_x(0, SeamTarget::Vertex(t.leaf(2))).unwrap(), Extended::Finite(int(6)));
        assert_eq!(d.derived_x(inner, SeamTarget::Vertex(t.leaf(0))).unwrap(), Extended::Infinity);
        assert!(DiskTree::new(t, [(0, q(&[2, 1])), (inner, q(&[0, 1]))].into()).is_err());
    }
}
