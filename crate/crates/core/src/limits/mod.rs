//! Gromov limits of one-parameter families of smooth witch curves.
//!
//! Families are Laurent polynomials in `t` and limits are taken as `t -> 0+`, so every
//! limit is exact. A limit is built by induction on the number of marked points: the
//! first point gives a chain of components over the limiting disk tree, and each further
//! point is classified against the current limit and inserted.

mod check;
mod classify;
mod family;

pub use check::{check_gromov_convergence, AxiomResult, ConvergenceReport};
pub use classify::{classification_candidates, classify_new_point, insert_point, NewPointCase, NewPointClassification};
pub use family::{scale_of, PointKey, Reparam1Family, Reparam2Family, Relative, SmoothFamily};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::moduli::{ComponentCoords, DiskTree, SeamCoords, WitchCurve};
use crate::number::{Extended, Rational};
use crate::treepair::{BubbleId, BubbleKind, TreePair};
use crate::trees::{Rrt, VertexId};

/// A limiting disk tree with the reparametrizations realizing the convergence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskLimit {
    pub tree: DiskTree,
    pub phi: BTreeMap<VertexId, Reparam1Family>,
}

/// A limiting witch curve with the reparametrizations realizing the convergence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GromovLimit {
    pub curve: WitchCurve,
    pub phi: BTreeMap<VertexId, Reparam1Family>,
    pub psi: BTreeMap<BubbleId, Reparam2Family>,
}

impl GromovLimit {
    pub fn pair(&self) -> &TreePair {
        self.curve.pair()
    }

    /// The same limit with its curve in canonical form; the families absorb the change.
    pub fn canonicalized(&self) -> GromovLimit {
        let (curve, f, g) = self.curve.canonical_form();
        GromovLimit {
            curve,
            phi: self.phi.iter().map(|(v, p)| (*v, p.compose_const(&f[v].inverse()))).collect(),
            psi: self.psi.iter().map(|(a, p)| (*a, p.compose_const(&g[a].inverse()))).collect(),
        }
    }
}

/// Limit of the abscissas by recursive rescaling: each cluster is normalized by the
/// leading order of its width and split where the rescaled abscissas have distinct limits.
pub fn limit_disk_tree(x: &[Laurent]) -> Result<DiskLimit> {
    if x.is_empty() {
        return Err(Error::InvalidFamily("no seams".into()));
    }
    for (k, w) in x.windows(2).enumerate() {
        match w[0].cmp_eventually(&w[1]) {
            core::cmp::Ordering::Less => {}
            core::cmp::Ordering::Equal => {
                return Err(Error::DegenerateFamily(format!("abscissas {k} and {} coincide", k + 1)))
            }
            core::cmp::Ordering::Greater => {
                return Err(Error::InvalidFamily(format!("abscissas {k} and {} are out of order", k + 1)))
            }
        }
    }
    let mut phi = BTreeMap::new();
    let mut coords = SeamCoords::new();
    let tree = if x.len() == 1 {
        phi.insert(0, Reparam1Family { a: Laurent::one(), b: x[0].clone() });
        coords.insert(0, alloc::vec![Rational::default()]);
        Rrt::corolla(1)
    } else {
        let mut enc = String::new();
        let mut next = 0;
        split(x, 0, x.len(), &mut next, &mut enc, &mut phi, &mut coords)?;
        Rrt::parse(&enc)?
    };
    Ok(DiskLimit { tree: DiskTree::new(tree, coords)?, phi })
}

fn split(
    x: &[Laurent],
    lo: usize,
    hi: usize,
    next: &mut usize,
    enc: &mut String,
    phi: &mut BTreeMap<VertexId, Reparam1Family>,
    coords: &mut SeamCoords,
) -> Result<()> {
    let id = *next;
    *next += 1;
    if hi - lo == 1 {
        enc.push('.');
        return Ok(());
    }
    let fam = Reparam1Family { a: scale_of(&(&x[hi - 1] - &x[lo]))?, b: x[lo].clone() };
    let limits: Vec<Rational> = (lo..hi)
        .map(|i| match fam.pull(&x[i]).limit() {
            Extended::Finite(v) => v,
            Extended::Infinity => unreachable!("inside the cluster width"),
        })
        .collect();
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for (k, v) in limits.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if limits[g.0 - lo] == *v => g.1 = lo + k + 1,
            _ => groups.push((lo + k, lo + k + 1)),
        }
    }
    coords.insert(id, groups.iter().map(|g| limits[g.0 - lo].clone()).collect());
    phi.insert(id, fam);
    enc.push('(');
    for (a, b) in groups {
        split(x, a, b, next, enc, phi, coords)?;
    }
    enc.push(')');
    Ok(())
}

fn finite<P>(p: Extended<P>, what: impl FnOnce() -> String) -> Result<P> {
    match p {
        Extended::Finite(p) => Ok(p),
        Extended::Infinity => Err(Error::InvalidFamily(what())),
    }
}

/// The limit coordinates read off from the families: each special point of a component is
/// the limit of the corresponding point family, or of the attached component's centre,
/// seen through the inverse reparametrization.
pub fn evaluate_limit(
    pair: TreePair,
    phi: &BTreeMap<VertexId, Reparam1Family>,
    psi: &BTreeMap<BubbleId, Reparam2Family>,
    family: &SmoothFamily,
) -> Result<WitchCurve> {
    if pair.type_vector() != family.type_vector().as_slice() {
        return Err(Error::TypeVectorMismatch("limit and family have different types".into()));
    }
    let ts = pair.seam_tree();
    let mut x = SeamCoords::new();
    for rho in ts.interior() {
        let f = phi.get(&rho).ok_or_else(|| Error::InvalidFamily(format!("no family at vertex {rho}")))?;
        let mut xs = Vec::new();
        for c in ts.children(rho) {
            let leaf = ts.leaf_span(*c).0;
            xs.push(finite(f.pull(&family.x()[leaf]).limit(), || {
                format!("abscissa of seam {leaf} diverges at vertex {rho}")
            })?);
        }
        x.insert(rho, xs);
    }
    let mut z = BTreeMap::new();
    for a in pair.components() {
        let f = psi.get(&a).ok_or_else(|| Error::InvalidFamily(format!("no family at component {a}")))?;
        let mut cx = Vec::new();
        let mut cy = Vec::new();
        for (k, _) in pair.seams_of(a).iter().enumerate() {
            let mut ys = Vec::new();
            let mut seam_x = None;
            for item in pair.items_on(a, k) {
                let p = match pair.kind(*item) {
                    BubbleKind::Mark { seam, index } => {
                        let (px, py) = family.point((seam, index));
                        f.pull_limit(px, py)
                    }
                    _ => f.pull_limit(&psi[item].bx, &psi[item].by),
                };
                let p = finite(p, || format!("special point {item} diverges on component {a}"))?;
                if seam_x.as_ref().is_some_and(|v| *v != p.x) {
                    return Err(Error::InvalidFamily(format!("items on component {a} have different abscissas")));
                }
                seam_x = Some(p.x);
                ys.push(p.y);
            }
            let sx = if pair.is_single_seam(a) {
                seam_x.ok_or_else(|| Error::InvalidFamily(format!("empty single seam on component {a}")))?
            } else {
                x[&pair.label(a)][k].clone()
            };
            cx.push(sx);
            cy.push(ys);
        }
        z.insert(a, ComponentCoords { x: cx, y: cy });
    }
    WitchCurve::new(pair, x, z)
}

/// Options for the inductive construction.
#[derive(Clone, Debug, Default)]
pub struct LimitOptions {
    /// Priority among points with identical heights; lexicographic when absent.
    pub tie_order: Option<Vec<PointKey>>,
}

/// The Gromov limit of a smooth family, with its curve in canonical form.
pub fn gromov_limit(family: &SmoothFamily) -> Result<GromovLimit> {
    gromov_limit_with(family, &LimitOptions::default())
}

pub fn gromov_limit_with(family: &SmoothFamily, options: &LimitOptions) -> Result<GromovLimit> {
    let order = insertion_order(family, options)?;
    let disk = limit_disk_tree(family.x())?;
    let ts = disk.tree.tree().clone();
    let r = family.seam_count();
    let first = order[0];
    let (mut limit, mut current, rest) = if r >= 2 {
        let current = family.restricted(|k| k == first)?;
        let pair = TreePair::from_disk_tree(&ts, first.0);
        let psi = pair
            .components()
            .map(|a| (a, Reparam2Family::over(&disk.phi[&pair.label(a)], family.height(first).clone())))
            .collect();
        (start(pair, disk.phi, psi, &current)?, current, &order[1..])
    } else if order.len() == 1 {
        let current = family.clone();
        let psi = [(0, Reparam2Family { a: Laurent::one(), bx: family.x()[0].clone(), by: family.height(first).clone() })].into();
        (start(TreePair::smooth(&[1]), disk.phi, psi, &current)?, current, &order[1..])
    } else {
        let second = order[1];
        let current = family.restricted(|k| k == first || k == second)?;
        let (y0, y1) = (family.height(first), family.height(second));
        let psi = [(0, Reparam2Family { a: scale_of(&(y1 - y0))?, bx: family.x()[0].clone(), by: y0.clone() })].into();
        (start(TreePair::smooth(&[2]), disk.phi, psi, &current)?, current, &order[2..])
    };
    for key in rest {
        let (zx, zy) = family.point(*key);
        let c = classify_new_point(&limit, &current, zx, zy)?;
        let (next, grown) = insert_point(&limit, &current, key.0, zy, &c)?;
        limit = next;
        current = grown;
    }
    debug_assert_eq!(&current, family);
    Ok(limit.canonicalized())
}

fn start(
    pair: TreePair,
    phi: BTreeMap<VertexId, Reparam1Family>,
    psi: BTreeMap<BubbleId, Reparam2Family>,
    family: &SmoothFamily,
) -> Result<GromovLimit> {
    let curve = evaluate_limit(pair, &phi, &psi, family)?;
    Ok(GromovLimit { curve, phi, psi })
}

/// Points by increasing eventual height, ties broken by the given priority.
pub fn insertion_order(family: &SmoothFamily, options: &LimitOptions) -> Result<Vec<PointKey>> {
    let mut keys: Vec<PointKey> = family.keys().collect();
    let rank = |k: &PointKey| -> usize {
        match &options.tie_order {
            Some(order) => order.iter().position(|o| o == k).unwrap_or(usize::MAX),
            None => 0,
        }
    };
    if let Some(order) = &options.tie_order {
        if keys.iter().any(|k| !order.contains(k)) {
            return Err(Error::InvalidFamily("tie order must list every point".into()));
        }
    }
    keys.sort_by(|a, b| {
        family
            .height(*a)
            .cmp_eventually(family.height(*b))
            .then_with(|| rank(a).cmp(&rank(b)))
            .then_with(|| a.cmp(b))
    });
    Ok(keys)
}
