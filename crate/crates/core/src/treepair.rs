//! Tree-pairs: a bubble tree of components, seams and marked points lying over a seam tree.
//!
//! Every bubble vertex carries a seam-tree label. A component with several seams
//! sits over an interior seam-tree vertex and its seams over that vertex's children
//! in order; a component with a single seam has that seam over its own label.
//! Vertices are numbered in pre-order, so isomorphic tree-pairs are equal.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::trees::{rrt_surjection, Rrt, RrtSurjection, VertexId};

pub type BubbleId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BubbleKind {
    Component,
    Seam,
    /// Zero-based seam number and position along the seam.
    Mark { seam: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BubbleVertex {
    pub kind: BubbleKind,
    pub parent: Option<BubbleId>,
    pub children: Vec<BubbleId>,
    /// Seam-tree vertex under this bubble vertex.
    pub label: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePair {
    seam_tree: Rrt,
    vertices: Vec<BubbleVertex>,
    type_vector: Vec<usize>,
}

/// Recursive description of a bubble tree, used for generation and surgery.
/// Mark positions are implicit: they are numbered in depth-first order per seam.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompShape<P> {
    pub label: VertexId,
    pub seams: Vec<SeamShape<P>>,
    pub tag: P,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeamShape<P> {
    pub label: VertexId,
    pub items: Vec<Item<P>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item<P> {
    Mark { seam: usize, tag: P },
    Comp(CompShape<P>),
}

/// Unvalidated bubble vertex, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawBubbleVertex {
    pub id: u64,
    pub kind: BubbleKind,
    pub incoming: Vec<u64>,
    pub label: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTreePair {
    pub seam_tree: Rrt,
    pub root: u64,
    pub vertices: Vec<RawBubbleVertex>,
    pub type_vector: Vec<usize>,
}

impl TreePair {
    /// The top stratum: one component carrying every seam.
    pub fn smooth(n: &[usize]) -> TreePair {
        let r = n.len();
        assert!(r >= 1 && n.iter().any(|k| *k > 0), "type vector must be nonzero");
        let ts = Rrt::corolla(r);
        let seams = if r == 1 {
            vec![SeamShape { label: 0, items: marks(0, n[0]) }]
        } else {
            (0..r)
                .map(|i| SeamShape { label: ts.leaf(i), items: marks(i, n[i]) })
                .collect()
        };
        TreePair::from_shape(ts, &CompShape { label: 0, seams, tag: () }, n).0
    }

    /// The tree-pair of type `e_i` whose seam tree is `tree`: a chain of components
    /// along the path from the root to leaf `i`.
    pub fn from_disk_tree(tree: &Rrt, i: usize) -> TreePair {
        let r = tree.leaf_count();
        assert!(r >= 2 && i < r);
        let mut n = vec![0; r];
        n[i] = 1;
        let Item::Comp(root) = chain(tree, tree.root(), i, &mut |_| ()) else {
            unreachable!("root is interior")
        };
        TreePair::from_shape(tree.clone(), &root, &n).0
    }

    /// Flattens a shape into pre-order ids. Returns the pair and each component's or mark's tag by id.
    /// No validation is performed.
    pub fn from_shape<P: Clone>(
        seam_tree: Rrt,
        shape: &CompShape<P>,
        n: &[usize],
    ) -> (TreePair, BTreeMap<BubbleId, P>) {
        let mut vertices = Vec::new();
        let mut tags = BTreeMap::new();
        let mut counters = vec![0usize; n.len()];
        flatten_comp(shape, None, &mut vertices, &mut tags, &mut counters);
        (
            TreePair {
                seam_tree,
                vertices,
                type_vector: n.to_vec(),
            },
            tags,
        )
    }

    /// Recursive form with every component and mark tagged by its id.
    pub fn to_shape(&self) -> CompShape<BubbleId> {
        self.comp_shape(0)
    }

    fn comp_shape(&self, a: BubbleId) -> CompShape<BubbleId> {
        CompShape {
            label: self.vertices[a].label,
            seams: self
                .vertices[a]
                .children
                .iter()
                .map(|s| SeamShape {
                    label: self.vertices[*s].label,
                    items: self.vertices[*s]
                        .children
                        .iter()
                        .map(|c| match self.vertices[*c].kind {
                            BubbleKind::Mark { seam, .. } => Item::Mark { seam, tag: *c },
                            _ => Item::Comp(self.comp_shape(*c)),
                        })
                        .collect(),
                })
                .collect(),
            tag: a,
        }
    }

    pub fn validate(raw: &RawTreePair) -> Result<TreePair> {
        let ts = &raw.seam_tree;
        let r = ts.leaf_count();
        if !ts.is_stable() {
            return Err(Error::SeamTreeUnstable);
        }
        if raw.type_vector.len() != r || raw.type_vector.iter().all(|k| *k == 0) {
            return Err(Error::TypeVectorMismatch(format!(
                "type vector {:?} for a seam tree with {r} leaves",
                raw.type_vector
            )));
        }
        let mut index: BTreeMap<u64, usize> = BTreeMap::new();
        for (k, v) in raw.vertices.iter().enumerate() {
            if index.insert(v.id, k).is_some() {
                return Err(Error::AlternationViolated(format!("vertex {} listed twice", v.id)));
            }
            if v.label >= ts.len() {
                return Err(Error::CoherenceViolated(format!("vertex {} has no seam-tree image", v.id)));
            }
        }
        let lookup = |id: &u64| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::AlternationViolated(format!("unknown vertex {id}")))
        };
        let root = lookup(&raw.root)?;
        let mut parent: Vec<Option<usize>> = vec![None; raw.vertices.len()];
        let mut lists: Vec<Vec<usize>> = Vec::with_capacity(raw.vertices.len());
        for (k, v) in raw.vertices.iter().enumerate() {
            let mut list = Vec::new();
            for c in &v.incoming {
                let ci = lookup(c)?;
                if parent[ci].is_some() || ci == k || ci == root {
                    return Err(Error::CycleDetected(*c));
                }
                parent[ci] = Some(k);
                list.push(ci);
            }
            lists.push(list);
        }
        let mut seen = vec![false; raw.vertices.len()];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            seen[v] = true;
            stack.extend(lists[v].iter().copied());
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::MultipleRoots(raw.root, raw.vertices[k].id));
        }

        // Shape conversion checks alternation; everything else is checked on the flat form.
        fn to_comp(raw: &RawTreePair, lists: &[Vec<usize>], a: usize) -> Result<CompShape<()>> {
            let v = &raw.vertices[a];
            if v.kind != BubbleKind::Component {
                return Err(Error::AlternationViolated(format!("vertex {} should be a component", v.id)));
            }
            if lists[a].is_empty() {
                return Err(Error::AlternationViolated(format!("component {} has no seams", v.id)));
            }
            let mut seams = Vec::new();
            for s in &lists[a] {
                let sv = &raw.vertices[*s];
                if sv.kind != BubbleKind::Seam {
                    return Err(Error::AlternationViolated(format!(
                        "component {} has non-seam incoming vertex {}",
                        v.id, sv.id
                    )));
                }
                let mut items = Vec::new();
                for c in &lists[*s] {
                    let cv = &raw.vertices[*c];
                    match cv.kind {
                        BubbleKind::Seam => {
                            return Err(Error::AlternationViolated(format!(
                                "seam {} has seam incoming vertex {}",
                                sv.id, cv.id
                            )))
                        }
                        BubbleKind::Mark { seam, .. } => {
                            if !lists[*c].is_empty() {
                                return Err(Error::AlternationViolated(format!("mark {} is not a leaf", cv.id)));
                            }
                            items.push(Item::Mark { seam, tag: () });
                        }
                        BubbleKind::Component => items.push(Item::Comp(to_comp(raw, lists, *c)?)),
                    }
                }
                seams.push(SeamShape { label: sv.label, items });
            }
            Ok(CompShape { label: v.label, seams, tag: () })
        }
        let shape = to_comp(raw, &lists, root)?;

        // Declared mark positions must agree with depth-first order.
        let mut declared: Vec<(usize, usize)> = Vec::new();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if let BubbleKind::Mark { seam, index } = raw.vertices[v].kind {
                declared.push((seam, index));
            }
            stack.extend(lists[v].iter().rev().copied());
        }
        let mut counters = vec![0usize; r];
        for (seam, index) in &declared {
            if *seam >= r {
                return Err(Error::TypeVectorMismatch(format!("mark on seam {seam} of {r}")));
            }
            if *index != counters[*seam] {
                return Err(Error::TypeVectorMismatch(format!(
                    "mark ({seam}, {index}) is out of order along its seam"
                )));
            }
            counters[*seam] += 1;
        }
        if counters != raw.type_vector {
            return Err(Error::TypeVectorMismatch(format!(
                "marks per seam {counters:?} but type vector {:?}",
                raw.type_vector
            )));
        }
        let (pair, _) = TreePair::from_shape(ts.clone(), &shape, &raw.type_vector);
        pair.check_coherence()?;
        pair.check_stability()?;
        Ok(pair)
    }

    fn check_coherence(&self) -> Result<()> {
        let ts = &self.seam_tree;
        if self.vertices[0].label != ts.root() {
            return Err(Error::CoherenceViolated("root component must lie over the seam-tree root".into()));
        }
        for a in self.components() {
            let v = &self.vertices[a];
            let seams = &v.children;
            if seams.len() >= 2 {
                if ts.in_degree(v.label) != seams.len() {
                    return Err(Error::CoherenceViolated(format!(
                        "component {a} has {} seams over a vertex with {} incoming",
                        seams.len(),
                        ts.in_degree(v.label)
                    )));
                }
                for (s, c) in seams.iter().zip(ts.children(v.label)) {
                    if self.vertices[*s].label != *c {
                        return Err(Error::CoherenceViolated(format!("seam {s} lies over the wrong vertex")));
                    }
                }
            } else if self.vertices[seams[0]].label != v.label {
                return Err(Error::CoherenceViolated(format!("single seam {} must share its component's vertex", seams[0])));
            }
            for s in seams {
                let sl = self.vertices[*s].label;
                for c in &self.vertices[*s].children {
                    match self.vertices[*c].kind {
                        BubbleKind::Component => {
                            if self.vertices[*c].label != sl {
                                return Err(Error::CoherenceViolated(format!(
                                    "component {c} must lie over the vertex of its seam"
                                )));
                            }
                        }
                        BubbleKind::Mark { seam, .. } => {
                            if ts.leaf_span(sl) != (seam, seam + 1) {
                                return Err(Error::CoherenceViolated(format!(
                                    "mark {c} on seam {seam} hangs over a vertex with other leaves"
                                )));
                            }
                        }
                        BubbleKind::Seam => unreachable!(),
                    }
                }
            }
        }
        Ok(())
    }

    fn check_stability(&self) -> Result<()> {
        if self.is_point_convention() {
            return Ok(());
        }
        for a in self.components() {
            let seams = &self.vertices[a].children;
            let ok = if seams.len() >= 2 {
                seams.iter().any(|s| !self.vertices[*s].children.is_empty())
            } else {
                self.vertices[seams[0]].children.len() >= 2
            };
            if !ok {
                return Err(Error::BubbleStabilityViolated(a));
            }
        }
        Ok(())
    }

    /// Type `(1)`: a single marked point, stable by convention.
    fn is_point_convention(&self) -> bool {
        self.type_vector == [1]
    }

    pub fn seam_tree(&self) -> &Rrt {
        &self.seam_tree
    }

    pub fn type_vector(&self) -> &[usize] {
        &self.type_vector
    }

    pub fn seam_count(&self) -> usize {
        self.type_vector.len()
    }

    pub fn marked_count(&self) -> usize {
        self.type_vector.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn root(&self) -> BubbleId {
        0
    }

    pub fn vertex(&self, v: BubbleId) -> &BubbleVertex {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[BubbleVertex] {
        &self.vertices
    }

    pub fn kind(&self, v: BubbleId) -> BubbleKind {
        self.vertices[v].kind
    }

    pub fn label(&self, v: BubbleId) -> VertexId {
        self.vertices[v].label
    }

    pub fn components(&self) -> impl Iterator<Item = BubbleId> + '_ {
        (0..self.len()).filter(|v| self.vertices[*v].kind == BubbleKind::Component)
    }

    pub fn component_count(&self) -> usize {
        self.components().count()
    }

    pub fn marks(&self) -> impl Iterator<Item = BubbleId> + '_ {
        (0..self.len()).filter(|v| matches!(self.vertices[*v].kind, BubbleKind::Mark { .. }))
    }

    pub fn is_component(&self, v: BubbleId) -> bool {
        v < self.len() && self.vertices[v].kind == BubbleKind::Component
    }

    pub fn is_mark(&self, v: BubbleId) -> bool {
        v < self.len() && matches!(self.vertices[v].kind, BubbleKind::Mark { .. })
    }

    /// Component with a single seam.
    pub fn is_single_seam(&self, a: BubbleId) -> bool {
        self.is_component(a) && self.vertices[a].children.len() == 1
    }

    pub fn mark(&self, seam: usize, index: usize) -> Option<BubbleId> {
        self.marks()
            .find(|m| self.vertices[*m].kind == BubbleKind::Mark { seam, index })
    }

    /// `(seam, index)` of a mark.
    pub fn mark_key(&self, m: BubbleId) -> (usize, usize) {
        match self.vertices[m].kind {
            BubbleKind::Mark { seam, index } => (seam, index),
            _ => panic!("vertex {m} is not a mark"),
        }
    }

    pub fn seams_of(&self, a: BubbleId) -> &[BubbleId] {
        &self.vertices[a].children
    }

    /// Items hanging on seam `i` (local index) of component `a`.
    pub fn items_on(&self, a: BubbleId, i: usize) -> &[BubbleId] {
        &self.vertices[self.vertices[a].children[i]].children
    }

    /// The component below a component or mark, with the local seam index and position on that seam.
    pub fn attachment(&self, v: BubbleId) -> Option<(BubbleId, usize, usize)> {
        let s = self.vertices[v].parent?;
        let a = self.vertices[s].parent.unwrap();
        let i = self.vertices[a].children.iter().position(|x| *x == s).unwrap();
        let j = self.vertices[s].children.iter().position(|x| *x == v).unwrap();
        Some((a, i, j))
    }

    pub fn parent_component(&self, v: BubbleId) -> Option<BubbleId> {
        self.attachment(v).map(|(a, _, _)| a)
    }

    /// One of the two is a component and the other hangs directly on one of its seams.
    pub fn contiguous(&self, a: BubbleId, b: BubbleId) -> Result<bool> {
        for v in [a, b] {
            if !self.is_component(v) && !self.is_mark(v) {
                return Err(Error::VertexNotFound(v));
            }
        }
        if a == b {
            return Err(Error::IdenticalEndpoints);
        }
        if self.is_mark(a) && self.is_mark(b) {
            return Err(Error::PairKindUnsupported);
        }
        Ok(self.parent_component(a) == Some(b) || self.parent_component(b) == Some(a))
    }

    pub fn is_ancestor(&self, a: BubbleId, v: BubbleId) -> bool {
        let mut u = v;
        loop {
            if u == a {
                return true;
            }
            match self.vertices[u].parent {
                Some(p) => u = p,
                None => return false,
            }
        }
    }

    /// Dimension of the stratum; the smooth stratum has `|n| + r - 3` (`|n| - 2` when `r = 1`).
    pub fn dimension(&self) -> usize {
        let ts = &self.seam_tree;
        let mut d: isize = 0;
        if ts.leaf_count() >= 2 {
            d += ts.interior().map(|v| ts.in_degree(v) as isize - 2).sum::<isize>();
        }
        for a in self.components() {
            let seams = &self.vertices[a].children;
            let items: isize = seams.iter().map(|s| self.vertices[*s].children.len() as isize).sum();
            d += if seams.len() >= 2 { items - 1 } else { items - 2 };
        }
        d.max(0) as usize
    }

    pub fn is_smooth(&self) -> bool {
        self.seam_tree.interior_count() == 1 && self.component_count() == 1
    }

    /// Canonical text form: seam-tree encoding, then the bubble tree with
    /// components `C<label>(...)`, seams `{...}` and marks `m<seam>`.
    pub fn encoding(&self) -> String {
        let mut out = self.seam_tree.encoding();
        out.push('|');
        self.encode_into(0, &mut out);
        out
    }

    fn encode_into(&self, v: BubbleId, out: &mut String) {
        let vx = &self.vertices[v];
        match vx.kind {
            BubbleKind::Component => {
                let _ = write!(out, "C{}(", vx.label);
                for s in &vx.children {
                    self.encode_into(*s, out);
                }
                out.push(')');
            }
            BubbleKind::Seam => {
                out.push('{');
                for c in &vx.children {
                    self.encode_into(*c, out);
                }
                out.push('}');
            }
            BubbleKind::Mark { seam, .. } => {
                let _ = write!(out, "m{seam}");
            }
        }
    }

    /// Raw form with ids equal to the canonical numbering.
    pub fn to_raw(&self) -> RawTreePair {
        RawTreePair {
            seam_tree: self.seam_tree.clone(),
            root: 0,
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(k, v)| RawBubbleVertex {
                    id: k as u64,
                    kind: v.kind,
                    incoming: v.children.iter().map(|c| *c as u64).collect(),
                    label: v.label,
                })
                .collect(),
            type_vector: self.type_vector.clone(),
        }
    }
}

fn marks(seam: usize, count: usize) -> Vec<Item<()>> {
    (0..count).map(|_| Item::Mark { seam, tag: () }).collect()
}

fn flatten_comp<P: Clone>(
    c: &CompShape<P>,
    parent: Option<BubbleId>,
    out: &mut Vec<BubbleVertex>,
    tags: &mut BTreeMap<BubbleId, P>,
    counters: &mut [usize],
) -> BubbleId {
    let id = out.len();
    out.push(BubbleVertex {
        kind: BubbleKind::Component,
        parent,
        children: Vec::new(),
        label: c.label,
    });
    tags.insert(id, c.tag.clone());
    for s in &c.seams {
        let sid = out.len();
        out.push(BubbleVertex {
            kind: BubbleKind::Seam,
            parent: Some(id),
            children: Vec::new(),
            label: s.label,
        });
        out[id].children.push(sid);
        for item in &s.items {
            let cid = match item {
                Item::Mark { seam, tag } => {
                    let mid = out.len();
                    out.push(BubbleVertex {
                        kind: BubbleKind::Mark { seam: *seam, index: counters[*seam] },
                        parent: Some(sid),
                        children: Vec::new(),
                        label: s.label,
                    });
                    counters[*seam] += 1;
                    tags.insert(mid, tag.clone());
                    mid
                }
                Item::Comp(cc) => flatten_comp(cc, Some(sid), out, tags, counters),
            };
            out[sid].children.push(cid);
        }
    }
    id
}

/// The item that carries a single new point on seam `leaf` from seam-tree vertex `at`:
/// a mark when `at` lies over that leaf alone, otherwise a component over `at`
/// whose only nonempty seam continues the chain.
pub fn chain<P>(ts: &Rrt, at: VertexId, leaf: usize, tag: &mut impl FnMut(VertexId) -> P) -> Item<P> {
    if ts.leaf_span(at) == (leaf, leaf + 1) {
        return Item::Mark { seam: leaf, tag: tag(at) };
    }
    let own = tag(at);
    let seams = ts
        .children(at)
        .iter()
        .map(|c| SeamShape {
            label: *c,
            items: if ts.is_above(*c, leaf) {
                vec![chain(ts, *c, leaf, tag)]
            } else {
                Vec::new()
            },
        })
        .collect();
    Item::Comp(CompShape { label: at, seams, tag: own })
}

/// Every stable tree-pair of type `n` over the given seam tree.
pub fn tree_pairs_over(ts: &Rrt, n: &[usize]) -> Vec<TreePair> {
    assert_eq!(ts.leaf_count(), n.len());
    if n == [1] {
        return vec![TreePair::smooth(n)];
    }
    let mut gen = Generator { ts, comps: BTreeMap::new(), seams: BTreeMap::new() };
    gen.comp(ts.root(), n.to_vec())
        .into_iter()
        .map(|c| TreePair::from_shape(ts.clone(), &c, n).0)
        .collect()
}

struct Generator<'a> {
    ts: &'a Rrt,
    comps: BTreeMap<(VertexId, Vec<usize>), Vec<CompShape<()>>>,
    seams: BTreeMap<(VertexId, Vec<usize>), Vec<Vec<Item<()>>>>,
}

impl Generator<'_> {
    fn restrict(&self, v: VertexId, counts: &[usize]) -> Vec<usize> {
        let (lo, hi) = self.ts.leaf_span(v);
        counts
            .iter()
            .enumerate()
            .map(|(i, c)| if lo <= i && i < hi { *c } else { 0 })
            .collect()
    }

    fn comp(&mut self, label: VertexId, counts: Vec<usize>) -> Vec<CompShape<()>> {
        let key = (label, counts);
        if let Some(v) = self.comps.get(&key) {
            return v.clone();
        }
        let counts = key.1.clone();
        let mut out = Vec::new();
        let kids = self.ts.children(label).to_vec();
        if kids.len() >= 2 {
            let mut acc: Vec<Vec<SeamShape<()>>> = vec![Vec::new()];
            for c in &kids {
                let sub = self.seam(*c, self.restrict(*c, &counts));
                acc = acc
                    .iter()
                    .flat_map(|prefix| {
                        sub.iter().map(move |items| {
                            let mut p = prefix.clone();
                            p.push(SeamShape { label: *c, items: items.clone() });
                            p
                        })
                    })
                    .collect();
            }
            out.extend(acc.into_iter().map(|seams| CompShape { label, seams, tag: () }));
        }
        for items in self.several(label, &counts) {
            out.push(CompShape {
                label,
                seams: vec![SeamShape { label, items }],
                tag: (),
            });
        }
        self.comps.insert(key, out.clone());
        out
    }

    /// Items that can stand alone on a seam over `label` and carry exactly `part`.
    fn singles(&mut self, label: VertexId, part: &[usize]) -> Vec<Item<()>> {
        let mut out = Vec::new();
        let (lo, hi) = self.ts.leaf_span(label);
        if hi == lo + 1 && part.iter().sum::<usize>() == 1 && part[lo] == 1 {
            out.push(Item::Mark { seam: lo, tag: () });
        }
        out.extend(self.comp(label, part.to_vec()).into_iter().map(Item::Comp));
        out
    }

    /// Sequences of at least two items over `label` carrying `counts`.
    fn several(&mut self, label: VertexId, counts: &[usize]) -> Vec<Vec<Item<()>>> {
        let mut out = Vec::new();
        for part in sub_vectors(counts) {
            if part == counts {
                continue;
            }
            let rest: Vec<usize> = counts.iter().zip(&part).map(|(c, p)| c - p).collect();
            let firsts = self.singles(label, &part);
            if firsts.is_empty() {
                continue;
            }
            let tails = self.seam(label, rest);
            for f in &firsts {
                for t in &tails {
                    let mut seq = Vec::with_capacity(t.len() + 1);
                    seq.push(f.clone());
                    seq.extend(t.iter().cloned());
                    out.push(seq);
                }
            }
        }
        out
    }

    fn seam(&mut self, label: VertexId, counts: Vec<usize>) -> Vec<Vec<Item<()>>> {
        if counts.iter().all(|c| *c == 0) {
            return vec![Vec::new()];
        }
        let key = (label, counts);
        if let Some(v) = self.seams.get(&key) {
            return v.clone();
        }
        let counts = key.1.clone();
        let mut out: Vec<Vec<Item<()>>> = self.singles(label, &counts).into_iter().map(|i| vec![i]).collect();
        out.extend(self.several(label, &counts));
        self.seams.insert(key, out.clone());
        out
    }
}

/// Nonzero vectors bounded coordinatewise by `counts`.
fn sub_vectors(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for c in counts {
        acc = acc
            .into_iter()
            .flat_map(|p| {
                (0..=*c).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    acc.retain(|p| p.iter().any(|k| *k > 0));
    acc
}

/// A surjection of tree-pairs: seam-tree contraction plus a bubble-vertex map.
/// Marks go to the marks with the same position; each component of the target
/// receives a connected block of source components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePairSurjection {
    pub seam_map: RrtSurjection,
    pub bubble_map: Vec<BubbleId>,
}

impl TreePairSurjection {
    pub fn identity(p: &TreePair) -> Self {
        TreePairSurjection {
            seam_map: RrtSurjection::identity(p.seam_tree()),
            bubble_map: (0..p.len()).collect(),
        }
    }

    pub fn apply(&self, v: BubbleId) -> BubbleId {
        self.bubble_map[v]
    }
}

/// All surjections `source -> target`, i.e. witnesses that `source` degenerates to `target`.
pub fn tree_pair_surjections(source: &TreePair, target: &TreePair) -> Result<Vec<TreePairSurjection>> {
    if source.type_vector() != target.type_vector() {
        return Err(Error::TypeVectorMismatch(format!(
            "{:?} vs {:?}",
            source.type_vector(),
            target.type_vector()
        )));
    }
    let Some(fs) = rrt_surjection(source.seam_tree(), target.seam_tree()) else {
        return Ok(Vec::new());
    };
    let top: Vec<Option<VertexId>> = (0..target.seam_tree().len())
        .map(|w| fs.top_of_preimage(w))
        .collect();
    let m = Matcher { src: source, tgt: target, fs: &fs, top };
    let maps = m.match_comp(target.root(), source.root());
    Ok(maps
        .into_iter()
        .map(|comp_map| m.complete(&comp_map))
        .map(|bubble_map| TreePairSurjection { seam_map: fs.clone(), bubble_map })
        .collect())
}

pub fn poset_leq(a: &TreePair, b: &TreePair) -> Result<bool> {
    Ok(!tree_pair_surjections(a, b)?.is_empty())
}

struct Matcher<'a> {
    src: &'a TreePair,
    tgt: &'a TreePair,
    fs: &'a RrtSurjection,
    top: Vec<Option<VertexId>>,
}

/// Source component -> target component.
type CompMap = BTreeMap<BubbleId, BubbleId>;

impl Matcher<'_> {
    /// Ways to send a block of source components rooted at `g0` onto target component `alpha`.
    fn match_comp(&self, alpha: BubbleId, g0: BubbleId) -> Vec<CompMap> {
        let rho = self.tgt.label(alpha);
        if Some(self.src.label(g0)) != self.top[rho] {
            return Vec::new();
        }
        let candidates: Vec<(Vec<BubbleId>, Vec<Vec<BubbleId>>)> = if self.tgt.is_single_seam(alpha) {
            if !self.src.is_single_seam(g0) {
                return Vec::new();
            }
            let want = self.tgt.items_on(alpha, 0).len();
            self.single_seam_blocks(g0, want)
                .into_iter()
                .map(|(block, exits)| (block, vec![exits]))
                .collect()
        } else {
            self.multi_seam_blocks(alpha, g0)
        };
        let mut results = Vec::new();
        for (block, exits) in candidates {
            let mut partial: Vec<CompMap> = vec![block.iter().map(|g| (*g, alpha)).collect()];
            for (i, ex) in exits.iter().enumerate() {
                let items = self.tgt.items_on(alpha, i);
                if items.len() != ex.len() {
                    partial.clear();
                    break;
                }
                for (t, s) in items.iter().zip(ex) {
                    let next = match (self.tgt.kind(*t), self.src.kind(*s)) {
                        (BubbleKind::Mark { seam, index }, BubbleKind::Mark { seam: s2, index: j2 }) => {
                            if (seam, index) == (s2, j2) {
                                continue;
                            }
                            Vec::new()
                        }
                        (BubbleKind::Component, BubbleKind::Component) => self.match_comp(*t, *s),
                        _ => Vec::new(),
                    };
                    partial = partial
                        .iter()
                        .flat_map(|p| {
                            next.iter().map(move |q| {
                                let mut m = p.clone();
                                m.extend(q.iter().map(|(a, b)| (*a, *b)));
                                m
                            })
                        })
                        .collect();
                    if partial.is_empty() {
                        break;
                    }
                }
                if partial.is_empty() {
                    break;
                }
            }
            results.extend(partial);
        }
        results
    }

    /// For a multi-seam target: components over preimages of its vertex are forced into the block;
    /// single-seam bubbles on the outgoing seams may be absorbed or left as exits.
    fn multi_seam_blocks(&self, alpha: BubbleId, g0: BubbleId) -> Vec<(Vec<BubbleId>, Vec<Vec<BubbleId>>)> {
        let rho = self.tgt.label(alpha);
        let kids = self.tgt.seam_tree().children(rho);
        let mut block = Vec::new();
        let mut outgoing: Vec<(usize, BubbleId)> = Vec::new();
        let mut stack = vec![g0];
        while let Some(g) = stack.pop() {
            block.push(g);
            for s in self.src.seams_of(g) {
                let image = self.fs.apply(self.src.label(*s));
                if image == rho {
                    for c in &self.src.vertex(*s).children {
                        if !self.src.is_component(*c) {
                            return Vec::new();
                        }
                        stack.push(*c);
                    }
                } else {
                    match kids.iter().position(|c| *c == image) {
                        Some(k) => outgoing.push((k, *s)),
                        None => return Vec::new(),
                    }
                }
            }
        }
        // Pre-order ids make this the depth-first order of the exits.
        outgoing.sort_by_key(|(_, s)| *s);
        let limits: Vec<usize> = (0..kids.len()).map(|k| self.tgt.items_on(alpha, k).len()).collect();
        let mut acc: Vec<(Vec<BubbleId>, Vec<Vec<BubbleId>>)> = vec![(block, vec![Vec::new(); kids.len()])];
        for (k, s) in outgoing {
            let options = self.expand(&self.src.vertex(s).children, self.src.label(s), limits[k]);
            let mut next = Vec::new();
            for (b, e) in &acc {
                for (b2, e2) in &options {
                    if e[k].len() + e2.len() > limits[k] {
                        continue;
                    }
                    let mut b = b.clone();
                    b.extend(b2.iter().copied());
                    let mut e = e.clone();
                    e[k].extend(e2.iter().copied());
                    next.push((b, e));
                }
            }
            acc = next;
        }
        acc
    }

    /// For a single-seam target: the root of the block and any absorbed single-seam bubbles.
    fn single_seam_blocks(&self, g: BubbleId, limit: usize) -> Vec<(Vec<BubbleId>, Vec<BubbleId>)> {
        self.expand(self.src.items_on(g, 0), self.src.label(g), limit)
            .into_iter()
            .map(|(mut b, e)| {
                b.insert(0, g);
                (b, e)
            })
            .collect()
    }

    /// Ways to read a sequence of items on a seam over `label`: each single-seam bubble over the
    /// same vertex is either absorbed (its items read recursively) or kept as an exit.
    fn expand(&self, items: &[BubbleId], label: VertexId, limit: usize) -> Vec<(Vec<BubbleId>, Vec<BubbleId>)> {
        let mut acc: Vec<(Vec<BubbleId>, Vec<BubbleId>)> = vec![(Vec::new(), Vec::new())];
        for c in items {
            let mut options: Vec<(Vec<BubbleId>, Vec<BubbleId>)> = vec![(Vec::new(), vec![*c])];
            if self.src.is_single_seam(*c) && self.src.label(*c) == label {
                for (mut b, e) in self.expand(self.src.items_on(*c, 0), label, limit) {
                    b.insert(0, *c);
                    options.push((b, e));
                }
            }
            let mut next = Vec::new();
            for (b, e) in &acc {
                for (b2, e2) in &options {
                    if e.len() + e2.len() > limit {
                        continue;
                    }
                    let mut b = b.clone();
                    b.extend(b2.iter().copied());
                    let mut e = e.clone();
                    e.extend(e2.iter().copied());
                    next.push((b, e));
                }
            }
            acc = next;
        }
        acc
    }

    /// Extends a component map to every bubble vertex: marks to equal marks, seams to
    /// the target seam they feed or to the component that absorbs them.
    fn complete(&self, comp_map: &CompMap) -> Vec<BubbleId> {
        let mut out = vec![0; self.src.len()];
        for v in 0..self.src.len() {
            out[v] = match self.src.kind(v) {
                BubbleKind::Component => comp_map[&v],
                BubbleKind::Mark { seam, index } => self.tgt.mark(seam, index).unwrap(),
                BubbleKind::Seam => {
                    let g = self.src.vertex(v).parent.unwrap();
                    let alpha = comp_map[&g];
                    if self.tgt.is_single_seam(alpha) {
                        self.tgt.seams_of(alpha)[0]
                    } else {
                        let image = self.fs.apply(self.src.label(v));
                        let rho = self.tgt.label(alpha);
                        match self.tgt.seam_tree().children(rho).iter().position(|c| *c == image) {
                            Some(k) => self.tgt.seams_of(alpha)[k],
                            None => alpha,
                        }
                    }
                }
            };
        }
        out
    }
}

/// Distinct seam-tree and bubble-tree surgery kinds between a stratum and one it covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    /// The seam tree gains an interior vertex.
    SeamTree,
    /// Only the bubble tree changes.
    BubbleTree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    pub result: TreePair,
    pub surjection: TreePairSurjection,
}

/// The strata covered by `p`, found among all tree-pairs of the same type.
pub fn enumerate_moves(p: &TreePair) -> Vec<Move> {
    let all = all_tree_pairs(p.type_vector());
    let below: Vec<&TreePair> = all
        .iter()
        .filter(|q| *q != p && poset_leq(q, p).unwrap())
        .collect();
    let mut out = Vec::new();
    for q in &below {
        let covered = !below
            .iter()
            .any(|m| m != q && poset_leq(q, m).unwrap());
        if covered {
            let surjection = tree_pair_surjections(q, p).unwrap().remove(0);
            let kind = if q.seam_tree() == p.seam_tree() { MoveKind::BubbleTree } else { MoveKind::SeamTree };
            out.push(Move { kind, result: (*q).clone(), surjection });
        }
    }
    out
}

/// Every stable tree-pair of type `n`, in canonical order.
pub fn all_tree_pairs(n: &[usize]) -> Vec<TreePair> {
    let mut out: Vec<TreePair> = crate::trees::enumerate_stable_rrts(n.len())
        .iter()
        .flat_map(|ts| tree_pairs_over(ts, n))
        .collect();
    out.sort_by_cached_key(stratum_key);
    out
}

/// Canonical ordering: higher strata first, then by encoding.
pub fn stratum_key(p: &TreePair) -> (core::cmp::Reverse<usize>, String) {
    (core::cmp::Reverse(p.dimension()), p.encoding())
}

/// Distinct encodings, as a sanity check on generation.
pub fn encodings(pairs: &[TreePair]) -> BTreeSet<String> {
    pairs.iter().map(|p| p.encoding()).collect()
}
