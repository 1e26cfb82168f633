//! Rooted ribbon trees: ordered rooted trees whose leaves carry the seam order.
//!
//! Vertices are numbered in pre-order, so two trees are isomorphic exactly when
//! they are equal. The text encoding writes a leaf as `.` and an interior vertex
//! as its parenthesised children, e.g. `(.(..))`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Unvalidated input: for each listed vertex, its incoming neighbours left to right.
/// Vertices that never appear as a key are leaves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawTree {
    pub root: u64,
    pub incoming: Vec<(u64, Vec<u64>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rrt {
    children: Vec<Vec<VertexId>>,
    parent: Vec<Option<VertexId>>,
    leaves: Vec<VertexId>,
    leaf_number: Vec<Option<usize>>,
    span: Vec<(usize, usize)>,
}

impl Rrt {
    /// Builds from child lists indexed by arbitrary ids, rooted at `root`, renumbering in pre-order.
    /// The input must already be a tree.
    fn from_child_lists(root: usize, lists: &[Vec<usize>]) -> Rrt {
        let mut order = Vec::with_capacity(lists.len());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(lists[v].iter().rev().copied());
        }
        let mut new_id = vec![usize::MAX; lists.len()];
        for (k, v) in order.iter().enumerate() {
            new_id[*v] = k;
        }
        let children: Vec<Vec<VertexId>> = order
            .iter()
            .map(|v| lists[*v].iter().map(|c| new_id[*c]).collect())
            .collect();
        Rrt::from_preorder(children)
    }

    fn from_preorder(children: Vec<Vec<VertexId>>) -> Rrt {
        let n = children.len();
        let mut parent = vec![None; n];
        for (v, cs) in children.iter().enumerate() {
            for c in cs {
                parent[*c] = Some(v);
            }
        }
        let leaves: Vec<VertexId> = (0..n).filter(|v| children[*v].is_empty()).collect();
        let mut leaf_number = vec![None; n];
        for (i, v) in leaves.iter().enumerate() {
            leaf_number[*v] = Some(i);
        }
        let mut span = vec![(0, 0); n];
        for v in (0..n).rev() {
            span[v] = match leaf_number[v] {
                Some(i) => (i, i + 1),
                None => (
                    span[*children[v].first().unwrap()].0,
                    span[*children[v].last().unwrap()].1,
                ),
            };
        }
        Rrt {
            children,
            parent,
            leaves,
            leaf_number,
            span,
        }
    }

    pub fn validate(raw: &RawTree) -> Result<Rrt> {
        let mut index: BTreeMap<u64, usize> = BTreeMap::new();
        let mut ids: Vec<u64> = Vec::new();
        let mut intern = |id: u64, ids: &mut Vec<u64>| -> usize {
            *index.entry(id).or_insert_with(|| {
                ids.push(id);
                ids.len() - 1
            })
        };
        let root = intern(raw.root, &mut ids);
        let mut lists: Vec<Option<Vec<usize>>> = Vec::new();
        for (v, ins) in &raw.incoming {
            let vi = intern(*v, &mut ids);
            let mut seen = BTreeSet::new();
            let mut list = Vec::with_capacity(ins.len());
            for c in ins {
                if !seen.insert(*c) {
                    return Err(Error::UnorderedInList(*v, format!("{c} listed twice")));
                }
                list.push(intern(*c, &mut ids));
            }
            if lists.len() < ids.len() {
                lists.resize(ids.len(), None);
            }
            if lists[vi].is_some() {
                return Err(Error::UnorderedInList(*v, "in-list given twice".into()));
            }
            lists[vi] = Some(list);
        }
        let n = ids.len();
        lists.resize(n, None);
        let lists: Vec<Vec<usize>> = lists.into_iter().map(Option::unwrap_or_default).collect();
        if lists[root].is_empty() {
            return Err(Error::UnorderedInList(raw.root, "root has no incoming vertices".into()));
        }
        let mut parent: Vec<Option<usize>> = vec![None; n];
        for (v, cs) in lists.iter().enumerate() {
            for c in cs {
                if *c == v || parent[*c].is_some() {
                    return Err(Error::CycleDetected(ids[*c]));
                }
                parent[*c] = Some(v);
            }
        }
        if parent[root].is_some() {
            return Err(Error::CycleDetected(raw.root));
        }
        for v in 0..n {
            let mut u = v;
            let mut steps = 0;
            while let Some(p) = parent[u] {
                u = p;
                steps += 1;
                if steps > n {
                    return Err(Error::CycleDetected(ids[v]));
                }
            }
            if u != root {
                return Err(Error::MultipleRoots(raw.root, ids[u]));
            }
        }
        Ok(Rrt::from_child_lists(root, &lists))
    }

    pub fn corolla(r: usize) -> Rrt {
        assert!(r >= 1);
        Rrt::from_preorder(core::iter::once((1..=r).collect()).chain((0..r).map(|_| Vec::new())).collect())
    }

    pub fn parse(s: &str) -> Result<Rrt> {
        let bytes: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut children: Vec<Vec<VertexId>> = Vec::new();
        let mut stack: Vec<VertexId> = Vec::new();
        let mut done = false;
        for (k, b) in bytes.iter().enumerate() {
            if done {
                return Err(Error::Parse(format!("trailing input at byte {k}")));
            }
            match b {
                b'(' | b'.' => {
                    let v = children.len();
                    children.push(Vec::new());
                    match stack.last() {
                        Some(p) => children[*p].push(v),
                        None if *b == b'(' => {}
                        None => return Err(Error::Parse("a tree must start with '('".into())),
                    }
                    if *b == b'(' {
                        stack.push(v);
                    }
                }
                b')' => {
                    let v = stack.pop().ok_or_else(|| Error::Parse("unbalanced ')'".into()))?;
                    if children[v].is_empty() {
                        return Err(Error::Parse("empty parentheses".into()));
                    }
                    done = stack.is_empty();
                }
                other => return Err(Error::Parse(format!("unexpected character {:?}", *other as char))),
            }
        }
        if !done {
            return Err(Error::Parse("unbalanced '('".into()));
        }
        Ok(Rrt::from_preorder(children))
    }

    pub fn encoding(&self) -> String {
        let mut out = String::new();
        self.encode_into(0, &mut out);
        out
    }

    fn encode_into(&self, v: VertexId, out: &mut String) {
        if self.is_leaf(v) {
            out.push('.');
        } else {
            out.push('(');
            for c in &self.children[v] {
                self.encode_into(*c, out);
            }
            out.push(')');
        }
    }

    pub fn root(&self) -> VertexId {
        0
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.children[v].len()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Leaf vertices, left to right.
    pub fn leaves(&self) -> &[VertexId] {
        &self.leaves
    }

    pub fn leaf(&self, i: usize) -> VertexId {
        self.leaves[i]
    }

    /// Position of a leaf in the left-to-right order.
    pub fn leaf_number(&self, v: VertexId) -> Option<usize> {
        self.leaf_number[v]
    }

    /// Half-open range of leaf numbers lying above `v`.
    pub fn leaf_span(&self, v: VertexId) -> (usize, usize) {
        self.span[v]
    }

    pub fn is_above(&self, v: VertexId, leaf_index: usize) -> bool {
        let (lo, hi) = self.span[v];
        lo <= leaf_index && leaf_index < hi
    }

    pub fn interior(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len()).filter(|v| !self.is_leaf(*v))
    }

    pub fn interior_count(&self) -> usize {
        self.len() - self.leaves.len()
    }

    /// Every interior vertex has at least two incoming vertices; the one-leaf tree is stable by convention.
    pub fn is_stable(&self) -> bool {
        if self.leaf_count() == 1 {
            return self.len() == 2;
        }
        self.interior().all(|v| self.in_degree(v) >= 2)
    }

    /// Child of `v` whose subtree contains leaf number `i`.
    pub fn child_toward_leaf(&self, v: VertexId, i: usize) -> Option<(usize, VertexId)> {
        self.children[v]
            .iter()
            .enumerate()
            .find(|(_, c)| self.is_above(**c, i))
            .map(|(k, c)| (k, *c))
    }

    pub fn is_ancestor(&self, a: VertexId, v: VertexId) -> bool {
        let mut u = v;
        loop {
            if u == a {
                return true;
            }
            match self.parent[u] {
                Some(p) => u = p,
                None => return false,
            }
        }
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::VertexNotFound(v))
        }
    }

    fn ancestors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = vec![v];
        let mut u = v;
        while let Some(p) = self.parent[u] {
            out.push(p);
            u = p;
        }
        out
    }

    /// The simple path from `from` to `to`, both endpoints included.
    pub fn path(&self, from: VertexId, to: VertexId) -> Result<Vec<VertexId>> {
        self.check(from)?;
        self.check(to)?;
        if from == to {
            return Err(Error::IdenticalEndpoints);
        }
        let up = self.ancestors(from);
        let down = self.ancestors(to);
        let meet = *up.iter().find(|u| down.contains(u)).unwrap();
        let mut out: Vec<VertexId> = up.iter().copied().take_while(|u| *u != meet).collect();
        out.push(meet);
        let tail: Vec<VertexId> = down.iter().copied().take_while(|u| *u != meet).collect();
        out.extend(tail.into_iter().rev());
        Ok(out)
    }

    /// Vertices of the subtree hanging above `v`, including `v`.
    pub fn subtree(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().copied());
        }
        out.sort_unstable();
        out
    }

    /// All `t` such that the path from `from` to `t` passes through `through`.
    pub fn subtree_through(&self, from: VertexId, through: VertexId) -> Result<Vec<VertexId>> {
        self.check(from)?;
        self.check(through)?;
        if from == through {
            return Err(Error::IdenticalEndpoints);
        }
        if !self.is_ancestor(through, from) {
            return Ok(self.subtree(through));
        }
        let toward = *self
            .children[through]
            .iter()
            .find(|c| self.is_ancestor(**c, from))
            .unwrap();
        let excluded = self.subtree(toward);
        Ok((0..self.len()).filter(|u| excluded.binary_search(u).is_err()).collect())
    }

    /// Sort key realising the canonical enumeration order.
    pub fn canonical_key(&self) -> (usize, String) {
        (self.interior_count(), self.encoding())
    }

    /// Stable trees one contraction below: each non-root interior vertex is merged into its parent.
    pub fn contractions(&self) -> Vec<Rrt> {
        let mut out = Vec::new();
        for v in self.interior().filter(|v| *v != 0) {
            let p = self.parent[v].unwrap();
            let mut lists = self.children.clone();
            let pos = lists[p].iter().position(|c| *c == v).unwrap();
            let grand = core::mem::take(&mut lists[v]);
            lists[p].splice(pos..=pos, grand);
            out.push(Rrt::from_child_lists(0, &lists));
        }
        out
    }
}

/// Surjection of seam trees given as a vertex map from source to target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RrtSurjection {
    pub source: Rrt,
    pub target: Rrt,
    pub vertex_map: Vec<VertexId>,
}

impl RrtSurjection {
    pub fn identity(tree: &Rrt) -> Self {
        RrtSurjection {
            source: tree.clone(),
            target: tree.clone(),
            vertex_map: (0..tree.len()).collect(),
        }
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.vertex_map[v]
    }

    /// `other` after `self`.
    pub fn then(&self, other: &RrtSurjection) -> RrtSurjection {
        assert_eq!(self.target, other.source);
        RrtSurjection {
            source: self.source.clone(),
            target: other.target.clone(),
            vertex_map: self.vertex_map.iter().map(|v| other.vertex_map[*v]).collect(),
        }
    }

    /// The vertices of the source sent to `w`.
    pub fn preimage(&self, w: VertexId) -> Vec<VertexId> {
        (0..self.source.len()).filter(|v| self.vertex_map[*v] == w).collect()
    }

    /// The preimage vertex of `w` closest to the root.
    pub fn top_of_preimage(&self, w: VertexId) -> Option<VertexId> {
        self.preimage(w).into_iter().min()
    }
}

/// Unique contraction map when one exists: the target's leaf brackets must be a subset of the source's.
pub fn rrt_surjection(source: &Rrt, target: &Rrt) -> Option<RrtSurjection> {
    if source.leaf_count() != target.leaf_count() {
        return None;
    }
    let mut target_by_span: BTreeMap<(usize, usize), VertexId> = BTreeMap::new();
    for w in target.interior() {
        target_by_span.entry(target.leaf_span(w)).or_insert(w);
    }
    let source_spans: BTreeSet<(usize, usize)> = source.interior().map(|v| source.leaf_span(v)).collect();
    if target_by_span.keys().any(|s| !source_spans.contains(s)) {
        return None;
    }
    let mut vertex_map = vec![0; source.len()];
    for v in 0..source.len() {
        if let Some(i) = source.leaf_number(v) {
            vertex_map[v] = target.leaf(i);
            continue;
        }
        let mut u = v;
        vertex_map[v] = loop {
            if let Some(w) = target_by_span.get(&source.leaf_span(u)) {
                break *w;
            }
            u = source.parent(u).unwrap();
        };
    }
    Some(RrtSurjection {
        source: source.clone(),
        target: target.clone(),
        vertex_map,
    })
}

pub fn rrt_surjections(source: &Rrt, target: &Rrt) -> Vec<RrtSurjection> {
    rrt_surjection(source, target).into_iter().collect()
}

/// All stable trees with `r` leaves up to isomorphism, by interior count then encoding.
pub fn enumerate_stable_rrts(r: usize) -> Vec<Rrt> {
    assert!(r >= 1, "a tree needs at least one leaf");
    if r == 1 {
        return vec![Rrt::parse("(.)").unwrap()];
    }
    let mut memo: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    let mut trees: Vec<Rrt> = encodings(r, &mut memo)
        .into_iter()
        .map(|s| Rrt::parse(&s).unwrap())
        .collect();
    trees.sort_by_key(|t| t.canonical_key());
    trees
}

fn encodings(r: usize, memo: &mut BTreeMap<usize, Vec<String>>) -> Vec<String> {
    if r == 1 {
        return vec![".".into()];
    }
    if let Some(v) = memo.get(&r) {
        return v.clone();
    }
    let mut out = Vec::new();
    for parts in compositions(r) {
        if parts.len() < 2 {
            continue;
        }
        let mut acc: Vec<String> = vec![String::new()];
        for p in parts {
            let sub = encodings(p, memo);
            acc = acc
                .iter()
                .flat_map(|a| sub.iter().map(move |s| format!("{a}{s}")))
                .collect();
        }
        out.extend(acc.into_iter().map(|s| format!("({s})")));
    }
    memo.insert(r, out.clone());
    out
}

fn compositions(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=r {
        for mut rest in compositions(r - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bfs_path(t: &Rrt, a: VertexId, b: VertexId) -> Vec<VertexId> {
        let n = t.len();
        let mut prev = vec![usize::MAX; n];
        let mut queue = alloc::collections::VecDeque::from([a]);
        prev[a] = a;
        while let Some(u) = queue.pop_front() {
            let mut nbrs: Vec<VertexId> = t.children(u).to_vec();
            nbrs.extend(t.parent(u));
            for w in nbrs {
                if prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let mut out = vec![b];
        while *out.last().unwrap() != a {
            out.push(prev[*out.last().unwrap()]);
        }
        out.reverse();
        out
    }

    #[test]
    fn validation_cases() {
        let corolla = RawTree { root: 10, incoming: vec![(10, vec![1, 2, 3])] };
        let t = Rrt::validate(&corolla).unwrap();
        assert_eq!(t.encoding(), "(...)");
        assert!(t.is_stable());

        let one = RawTree { root: 0, incoming: vec![(0, vec![1])] };
        assert!(Rrt::validate(&one).unwrap().is_stable());

        let chain = RawTree { root: 0, incoming: vec![(0, vec![1]), (1, vec![2])] };
        let t = Rrt::validate(&chain).unwrap();
        assert!(!t.is_stable());

        let single = RawTree { root: 0, incoming: vec![] };
        assert!(matches!(Rrt::validate(&single), Err(Error::UnorderedInList(..))));
        let cyc = RawTree { root: 0, incoming: vec![(0, vec![1]), (1, vec![2]), (2, vec![1])] };
        assert!(matches!(Rrt::validate(&cyc), Err(Error::CycleDetected(_))));
        let two = RawTree { root: 0, incoming: vec![(0, vec![1, 2]), (5, vec![6, 7])] };
        assert!(matches!(Rrt::validate(&two), Err(Error::MultipleRoots(0, 5))));
        let dup = RawTree { root: 0, incoming: vec![(0, vec![1, 1])] };
        assert!(matches!(Rrt::validate(&dup), Err(Error::UnorderedInList(..))));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["(.)", "(..)", "(.(..).)", "((..)(.(..)))"] {
            assert_eq!(Rrt::parse(s).unwrap().encoding(), s);
        }
        for bad in ["", ".", "(", "())", "(.))", "()", "(.)(.)", "(x)"] {
            assert!(Rrt::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn paths_and_subtrees() {
        let t = Rrt::parse("(..(..))").unwrap();
        let l: Vec<VertexId> = t.leaves().to_vec();
        let v = t.parent(l[3]).unwrap();
        assert_eq!(t.path(l[0], l[3]).unwrap(), vec![l[0], 0, v, l[3]]);
        assert_eq!(t.path(l[0], l[3]).unwrap(), bfs_path(&t, l[0], l[3]));
        assert_eq!(t.subtree_through(l[0], v).unwrap(), vec![v, l[2], l[3]]);
        let all_but: Vec<VertexId> = (0..t.len()).filter(|u| *u != l[0]).collect();
        assert_eq!(t.subtree_through(l[0], 0).unwrap(), all_but);
        assert_eq!(t.path(0, 0), Err(Error::IdenticalEndpoints));
        assert_eq!(t.path(0, 99), Err(Error::VertexNotFound(99)));
        let c = Rrt::corolla(3);
        assert_eq!(c.subtree_through(0, c.leaf(0)).unwrap(), vec![c.leaf(0)]);
        assert_eq!(c.path(0, c.leaf(1)).unwrap(), vec![0, c.leaf(1)]);
    }

    #[test]
    fn paths_match_bfs_everywhere() {
        for r in 1..=5 {
            for t in enumerate_stable_rrts(r) {
                for a in 0..t.len() {
                    for b in 0..t.len() {
                        if a == b {
                            continue;
                        }
                        let p = t.path(a, b).unwrap();
                        assert_eq!(p, bfs_path(&t, a, b));
                        let mut q = t.path(b, a).unwrap();
                        q.reverse();
                        assert_eq!(p, q);
                        let through: Vec<VertexId> = (0..t.len())
                            .filter(|x| *x == b || (*x != a && bfs_path(&t, a, *x).contains(&b)))
                            .collect();
                        assert_eq!(t.subtree_through(a, b).unwrap(), through);
                    }
                }
            }
        }
    }

    #[test]
    fn small_enumerations() {
        let counts: Vec<usize> = (1..=5).map(|r| enumerate_stable_rrts(r).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 11, 45]);
        for r in 1..=5 {
            let ts = enumerate_stable_rrts(r);
            assert!(ts.iter().all(|t| t.is_stable() && t.leaf_count() == r));
            let keys: Vec<_> = ts.iter().map(|t| t.canonical_key()).collect();
            let mut sorted = keys.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(keys, sorted);
        }
    }

    #[test]
    fn surjection_examples() {
        let c = Rrt::corolla(3);
        assert_eq!(rrt_surjections(&c, &c), vec![RrtSurjection::identity(&c)]);
        let b = Rrt::parse("((..).)").unwrap();
        let s = rrt_surjections(&b, &c);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].vertex_map[1], 0);
        assert!(rrt_surjections(&c, &b).is_empty());
        let one = Rrt::parse("(.)").unwrap();
        assert_eq!(rrt_surjections(&one, &one).len(), 1);
    }

    #[test]
    fn surjection_matches_contraction_reachability() {
        for r in 2..=5 {
            let ts = enumerate_stable_rrts(r);
            for a in &ts {
                let mut reach: BTreeSet<String> = BTreeSet::new();
                let mut frontier = vec![a.clone()];
                while let Some(t) = frontier.pop() {
                    if reach.insert(t.encoding()) {
                        frontier.extend(t.contractions());
                    }
                }
                for b in &ts {
                    assert_eq!(rrt_surjection(a, b).is_some(), reach.contains(&b.encoding()));
                }
            }
        }
    }
}
