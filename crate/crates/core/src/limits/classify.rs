//! Where a new marked point goes relative to an existing limit, and the surgery that adds it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::family::{scale_of, Reparam2Family, SmoothFamily};
use super::{evaluate_limit, GromovLimit};
use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::moduli::BubbleTarget;
use crate::number::ExtPoint2;
use crate::treepair::{chain, BubbleId, CompShape, Item, SeamShape, TreePair};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NewPointCase {
    /// The point has a limit on `component` away from its special points.
    Free { component: BubbleId },
    /// The point collides with `mark`, which hangs on `component`.
    AtMark { component: BubbleId, mark: BubbleId },
    /// The point escapes to infinity from the root component.
    BelowRoot,
    /// The point sits in the neck between `lower` and `upper`, which hangs on `lower`.
    InNeck { lower: BubbleId, upper: BubbleId },
}

impl NewPointCase {
    pub fn tag(&self) -> &'static str {
        match self {
            NewPointCase::Free { .. } => "C1",
            NewPointCase::AtMark { .. } => "C2a",
            NewPointCase::BelowRoot => "C2b",
            NewPointCase::InNeck { .. } => "C3",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewPointClassification {
    pub case: NewPointCase,
    /// Limit of the new point in the frame of each component.
    pub limits: BTreeMap<BubbleId, ExtPoint2>,
}

/// Every case whose condition holds, with the per-component limits of the new point.
pub fn classification_candidates(
    limit: &GromovLimit,
    family: &SmoothFamily,
    zx: &Laurent,
    zy: &Laurent,
) -> Result<(Vec<NewPointCase>, BTreeMap<BubbleId, ExtPoint2>)> {
    for (i, j) in family.keys() {
        let (px, py) = family.point((i, j));
        if px == zx && py == zy {
            return Err(Error::CoincidentPoint(i, j));
        }
    }
    let w = &limit.curve;
    let pair = w.pair();
    let limits: BTreeMap<BubbleId, ExtPoint2> =
        pair.components().map(|a| (a, limit.psi[&a].pull_limit(zx, zy))).collect();
    let mut out = Vec::new();
    for a in pair.components() {
        if !limits[&a].is_infinite() && !w.special_sets(a)?.1.contains(&limits[&a]) {
            out.push(NewPointCase::Free { component: a });
        }
    }
    for m in pair.marks() {
        let a = pair.parent_component(m).unwrap();
        if limits[&a] == w.derived_z(a, BubbleTarget::Vertex(m))? {
            out.push(NewPointCase::AtMark { component: a, mark: m });
        }
    }
    if limits[&pair.root()].is_infinite() {
        out.push(NewPointCase::BelowRoot);
    }
    for b in pair.components().filter(|b| *b != pair.root()) {
        let a = pair.parent_component(b).unwrap();
        if limits[&a] == w.derived_z(a, BubbleTarget::Vertex(b))? && limits[&b].is_infinite() {
            out.push(NewPointCase::InNeck { lower: a, upper: b });
        }
    }
    Ok((out, limits))
}

/// The unique applicable case; an error when none or several apply.
pub fn classify_new_point(
    limit: &GromovLimit,
    family: &SmoothFamily,
    zx: &Laurent,
    zy: &Laurent,
) -> Result<NewPointClassification> {
    let (mut cases, limits) = classification_candidates(limit, family, zx, zy)?;
    if cases.len() != 1 {
        return Err(Error::ClassificationMismatch(format!("{} cases apply: {cases:?}", cases.len())));
    }
    Ok(NewPointClassification { case: cases.pop().unwrap(), limits })
}

#[derive(Clone, Debug)]
enum Node {
    Old(BubbleId),
    New(Reparam2Family),
    Added,
}

fn relabel(c: &CompShape<BubbleId>) -> CompShape<Node> {
    CompShape {
        label: c.label,
        tag: Node::Old(c.tag),
        seams: c
            .seams
            .iter()
            .map(|s| SeamShape {
                label: s.label,
                items: s
                    .items
                    .iter()
                    .map(|it| match it {
                        Item::Mark { seam, tag } => Item::Mark { seam: *seam, tag: Node::Old(*tag) },
                        Item::Comp(cc) => Item::Comp(relabel(cc)),
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn find_mut(c: &mut CompShape<Node>, id: BubbleId) -> Option<&mut CompShape<Node>> {
    if matches!(c.tag, Node::Old(t) if t == id) {
        return Some(c);
    }
    for s in &mut c.seams {
        for it in &mut s.items {
            if let Item::Comp(cc) = it {
                if let Some(found) = find_mut(cc, id) {
                    return Some(found);
                }
            }
        }
    }
    None
}

fn item_id(it: &Item<Node>) -> Option<BubbleId> {
    match it {
        Item::Mark { tag: Node::Old(t), .. } => Some(*t),
        Item::Comp(c) => match c.tag {
            Node::Old(t) => Some(t),
            _ => None,
        },
        _ => None,
    }
}

/// Replaces item `id` on `host` by a single-seam component holding it and `added`.
fn wrap(host: &mut CompShape<Node>, id: BubbleId, added: Item<Node>, above: bool, psi: Reparam2Family) -> Result<()> {
    for s in &mut host.seams {
        if let Some(pos) = s.items.iter().position(|it| item_id(it) == Some(id)) {
            let old = s.items.remove(pos);
            let items = if above { vec![old, added] } else { vec![added, old] };
            let bubble = CompShape { label: s.label, seams: vec![SeamShape { label: s.label, items }], tag: Node::New(psi) };
            s.items.insert(pos, Item::Comp(bubble));
            return Ok(());
        }
    }
    Err(Error::ClassificationMismatch(format!("vertex {id} does not hang on the given component")))
}

fn mismatch(what: &str) -> Error {
    Error::ClassificationMismatch(what.into())
}

/// Adds the point `(x_{seam}, zy)` to the limit according to its classification.
/// Returns the new limit and the enlarged family.
pub fn insert_point(
    limit: &GromovLimit,
    family: &SmoothFamily,
    seam: usize,
    zy: &Laurent,
    classification: &NewPointClassification,
) -> Result<(GromovLimit, SmoothFamily)> {
    let (grown, slot) = family.with_point(seam, zy.clone())?;
    let zx = &family.x()[seam];
    let current = classify_new_point(limit, family, zx, zy)?;
    if current != *classification {
        return Err(mismatch("classification does not match the limit"));
    }
    let pair = limit.pair();
    let ts = pair.seam_tree();
    let above_leaf = |label| ts.is_above(label, seam);
    let added = |at| {
        chain(ts, at, seam, &mut |v| {
            if ts.leaf_span(v) == (seam, seam + 1) {
                Node::Added
            } else {
                Node::New(Reparam2Family::over(&limit.phi[&v], zy.clone()))
            }
        })
    };
    let above = |other: &Laurent| -> Result<bool> {
        match zy.cmp_eventually(other) {
            Ordering::Greater => Ok(true),
            Ordering::Less => Ok(false),
            Ordering::Equal => Err(Error::DegenerateFamily("new point has the height of its neighbour".into())),
        }
    };
    let mut shape = relabel(&pair.to_shape());
    match &classification.case {
        NewPointCase::Free { component } => {
            let a = *component;
            let zeta = current.limits[&a].finite().cloned().ok_or_else(|| mismatch("free limit is infinite"))?;
            let coords = limit.curve.coords(a);
            let k = if pair.is_single_seam(a) {
                0
            } else {
                ts.children(pair.label(a))
                    .iter()
                    .position(|c| above_leaf(*c))
                    .ok_or_else(|| mismatch("new point is not over this component"))?
            };
            let host = find_mut(&mut shape, a).unwrap();
            let label = host.seams[k].label;
            if !above_leaf(label) || coords.x[k] != zeta.x {
                return Err(mismatch("new point does not lie on a seam of its component"));
            }
            let pos = coords.y[k].iter().filter(|y| **y < zeta.y).count();
            let item = added(label);
            host.seams[k].items.insert(pos, item);
        }
        NewPointCase::AtMark { component, mark } => {
            let (mx, my) = family.point(pair.mark_key(*mark));
            let host = find_mut(&mut shape, *component).unwrap();
            let label = pair.label(pair.vertex(*mark).parent.unwrap());
            if ts.leaf_span(label) != (seam, seam + 1) {
                return Err(mismatch("new point collides with a mark on another seam"));
            }
            let psi = Reparam2Family { a: scale_of(&(zy - my))?, bx: mx.clone(), by: my.clone() };
            let up = above(my)?;
            wrap(host, *mark, added(label), up, psi)?;
        }
        NewPointCase::BelowRoot => {
            let first = family.keys().next().unwrap();
            let (fx, fy) = family.point(first);
            let psi = Reparam2Family { a: scale_of(&(zy - fy))?, bx: fx.clone(), by: fy.clone() };
            let root = ts.root();
            let fresh = added(root);
            let items = if above(fy)? { vec![Item::Comp(shape), fresh] } else { vec![fresh, Item::Comp(shape)] };
            shape = CompShape { label: root, seams: vec![SeamShape { label: root, items }], tag: Node::New(psi) };
        }
        NewPointCase::InNeck { lower, upper } => {
            let upper_psi = &limit.psi[upper];
            let label = pair.label(*upper);
            if !above_leaf(label) {
                return Err(mismatch("new point is not over the upper component"));
            }
            let psi = Reparam2Family {
                a: scale_of(&(zy - &upper_psi.by))?,
                bx: upper_psi.bx.clone(),
                by: upper_psi.by.clone(),
            };
            let up = above(&upper_psi.by)?;
            let host = find_mut(&mut shape, *lower).unwrap();
            wrap(host, *upper, added(label), up, psi)?;
        }
    }

    let n = grown.type_vector();
    let (new_pair, tags) = TreePair::from_shape(ts.clone(), &shape, &n);
    let mut psi = BTreeMap::new();
    for (id, tag) in tags {
        match (tag, new_pair.is_component(id)) {
            (Node::Old(old), true) => {
                psi.insert(id, limit.psi[&old].clone());
            }
            (Node::New(f), true) => {
                psi.insert(id, f);
            }
            (Node::Old(old), false) => {
                let (i, j) = pair.mark_key(old);
                let expect = (i, if i == seam && j >= slot { j + 1 } else { j });
                if new_pair.mark_key(id) != expect {
                    return Err(mismatch("mark order disagrees with the order of heights"));
                }
            }
            (Node::Added, false) => {
                if new_pair.mark_key(id) != (seam, slot) {
                    return Err(mismatch("new mark is out of order with the heights on its seam"));
                }
            }
            _ => unreachable!("tags follow vertex kinds"),
        }
    }
    let curve = evaluate_limit(new_pair, &limit.phi, &psi, &grown)?;
    Ok((GromovLimit { curve, phi: limit.phi.clone(), psi }, grown))
}
