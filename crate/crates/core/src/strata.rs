//! Stratification posets: associahedra of seam trees and 2-associahedra of tree-pairs.
//!
//! Degenerate strata are smaller: `a <= b` when `a` surjects onto `b`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::treepair::{all_tree_pairs, poset_leq, TreePair};
use crate::trees::{enumerate_stable_rrts, rrt_surjection, Rrt};

/// Largest `|n| + r` accepted by [`enumerate_w`].
pub const MAX_W_SIZE: usize = 8;
/// Largest leaf count accepted by [`enumerate_k`].
pub const MAX_K_LEAVES: usize = 8;

/// Dense square relation matrix, one bit row per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Relation { n, words, bits: vec![0; n * words] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    /// Builds from rows given as the set of columns related to each row.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Self {
        let mut rel = Relation::new(rows.len());
        for (a, row) in rows.into_iter().enumerate() {
            for b in row {
                rel.set(a, b);
            }
        }
        rel
    }
}

/// A finite poset with per-element dimension and its Hasse diagram.
#[derive(Clone, Debug)]
pub struct StratumPoset<T> {
    pub elements: Vec<T>,
    pub dimension: Vec<usize>,
    /// `covers[b]`: the elements covered by `b`, ascending.
    pub covers: Vec<Vec<usize>>,
    /// `above[a]` contains `b` iff `a <= b`.
    order: Relation,
}

impl<T> StratumPoset<T> {
    /// `order` must be reflexive, antisymmetric and transitive.
    pub fn from_order(elements: Vec<T>, dimension: Vec<usize>, order: Relation) -> Self {
        let n = elements.len();
        // below[b] as a strict relation, then remove anything reachable through another element.
        let mut covers = vec![Vec::new(); n];
        for (b, cov) in covers.iter_mut().enumerate() {
            let strictly_below: Vec<usize> = (0..n).filter(|a| *a != b && order.get(*a, b)).collect();
            for a in &strictly_below {
                let through = strictly_below
                    .iter()
                    .any(|c| c != a && order.get(*a, *c));
                if !through {
                    cov.push(*a);
                }
            }
        }
        StratumPoset { elements, dimension, covers, order }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.get(a, b)
    }

    pub fn order(&self) -> &Relation {
        &self.order
    }

    /// Elements covering `a`.
    pub fn covered_by(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|b| self.covers[*b].contains(&a)).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|a| (0..self.len()).all(|b| b == *a || !self.leq(*a, b)))
            .collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|b| self.covers[*b].is_empty()).collect()
    }

    /// Number of strata of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.dimension.iter().copied().max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for d in &self.dimension {
            f[*d] += 1;
        }
        f
    }

    pub fn grading(&self) -> GradingReport {
        let n = self.len();
        let maximal = self.maximal();
        // Longest and shortest cover-chain length from each element up to a maximal element.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|a| core::cmp::Reverse(self.dimension[*a]));
        let mut longest = vec![0usize; n];
        let mut shortest = vec![usize::MAX; n];
        for m in &maximal {
            shortest[*m] = 0;
        }
        // Process elements from the top down; every cover strictly lowers the position in this order
        // only if dimensions strictly drop, which is checked separately.
        let dims_drop = (0..n).all(|b| self.covers[b].iter().all(|a| self.dimension[*a] < self.dimension[b]));
        if dims_drop {
            for b in &order {
                for a in &self.covers[*b] {
                    longest[*a] = longest[*a].max(longest[*b] + 1);
                    shortest[*a] = shortest[*a].min(shortest[*b].saturating_add(1));
                }
            }
        }
        let minimal = self.minimal();
        let lengths: BTreeSet<usize> = minimal
            .iter()
            .flat_map(|m| [longest[*m], shortest[*m]])
            .collect();
        let covers_drop_by_one = (0..n).all(|b| self.covers[b].iter().all(|a| self.dimension[*a] + 1 == self.dimension[b]));
        GradingReport {
            unique_maximum: maximal.len() == 1,
            graded: dims_drop && lengths.len() == 1 && (0..n).all(|a| longest[a] == shortest[a]),
            covers_drop_dimension_by_one: covers_drop_by_one,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradingReport {
    pub unique_maximum: bool,
    /// All maximal chains through each element have the same length.
    pub graded: bool,
    pub covers_drop_dimension_by_one: bool,
}

pub fn k_dimension(t: &Rrt) -> usize {
    if t.leaf_count() <= 2 {
        0
    } else {
        t.leaf_count() - 1 - t.interior_count()
    }
}

pub fn enumerate_k(r: usize) -> Result<StratumPoset<Rrt>> {
    if r == 0 || r > MAX_K_LEAVES {
        return Err(Error::ScaleLimitExceeded(format!("leaf count {r} outside 1..={MAX_K_LEAVES}")));
    }
    let elements = enumerate_stable_rrts(r);
    let dimension = elements.iter().map(k_dimension).collect();
    let rows = elements
        .iter()
        .map(|a| {
            (0..elements.len())
                .filter(|b| rrt_surjection(a, &elements[*b]).is_some())
                .collect()
        })
        .collect();
    Ok(StratumPoset::from_order(elements, dimension, Relation::from_rows(rows)))
}

/// Rejects type vectors beyond desk scale.
pub fn check_w_scale(n: &[usize]) -> Result<()> {
    let size = n.iter().sum::<usize>() + n.len();
    if n.is_empty() || n.iter().all(|k| *k == 0) {
        return Err(Error::TypeVectorMismatch("type vector must be nonzero".into()));
    }
    if size > MAX_W_SIZE {
        return Err(Error::ScaleLimitExceeded(format!("|n| + r = {size} exceeds {MAX_W_SIZE}")));
    }
    Ok(())
}

/// Order row for `a`: every `b` with `a <= b`. Cheap necessary conditions are tested first.
pub fn w_order_row(elements: &[TreePair], dims: &[usize], a: usize) -> Vec<usize> {
    (0..elements.len())
        .filter(|b| {
            *b == a
                || (dims[a] < dims[*b]
                    && rrt_surjection(elements[a].seam_tree(), elements[*b].seam_tree()).is_some()
                    && poset_leq(&elements[a], &elements[*b]).unwrap())
        })
        .collect()
}

pub fn enumerate_w(n: &[usize]) -> Result<StratumPoset<TreePair>> {
    check_w_scale(n)?;
    let elements = all_tree_pairs(n);
    let dims: Vec<usize> = elements.iter().map(TreePair::dimension).collect();
    let rows = (0..elements.len()).map(|a| w_order_row(&elements, &dims, a)).collect();
    Ok(StratumPoset::from_order(elements, dims, Relation::from_rows(rows)))
}

/// The seam tree of a tree-pair.
pub fn forgetful(p: &TreePair) -> Rrt {
    p.seam_tree().clone()
}

/// Whether `map` (indices of `p` to indices of `q`) is an order isomorphism.
pub fn is_isomorphism<S, T>(p: &StratumPoset<S>, q: &StratumPoset<T>, map: &[usize]) -> bool {
    if p.len() != q.len() || map.len() != p.len() {
        return false;
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    if image.len() != p.len() || image.iter().any(|b| *b >= q.len()) {
        return false;
    }
    (0..p.len()).all(|a| (0..p.len()).all(|b| p.leq(a, b) == q.leq(map[a], map[b])))
}

/// Backtracking search for an order isomorphism, pruned by dimension and up/down degrees.
pub fn find_isomorphism<S, T>(p: &StratumPoset<S>, q: &StratumPoset<T>) -> Option<Vec<usize>> {
    let n = p.len();
    if n != q.len() {
        return None;
    }
    let sig = |leq: &dyn Fn(usize, usize) -> bool, a: usize| {
        let down = (0..n).filter(|x| leq(*x, a)).count();
        let up = (0..n).filter(|x| leq(a, *x)).count();
        (down, up)
    };
    let sp: Vec<_> = (0..n).map(|a| sig(&|x, y| p.leq(x, y), a)).collect();
    let sq: Vec<_> = (0..n).map(|a| sig(&|x, y| q.leq(x, y), a)).collect();
    let mut ps: Vec<_> = sp.clone();
    let mut qs: Vec<_> = sq.clone();
    ps.sort();
    qs.sort();
    if ps != qs {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|a| core::cmp::Reverse(sp[*a].1 + sp[*a].0));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go<S, T>(
        k: usize,
        order: &[usize],
        p: &StratumPoset<S>,
        q: &StratumPoset<T>,
        sp: &[(usize, usize)],
        sq: &[(usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let a = order[k];
        for b in 0..q.len() {
            if used[b] || sp[a] != sq[b] {
                continue;
            }
            let consistent = order[..k].iter().all(|c| {
                p.leq(a, *c) == q.leq(b, map[*c]) && p.leq(*c, a) == q.leq(map[*c], b)
            });
            if !consistent {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if go(k + 1, order, p, q, sp, sq, map, used) {
                return true;
            }
            used[b] = false;
            map[a] = usize::MAX;
        }
        false
    }
    go(0, &order, p, q, &sp, &sq, &mut map, &mut used).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_associahedra() {
        assert_eq!(enumerate_k(2).unwrap().len(), 1);
        let k3 = enumerate_k(3).unwrap();
        assert_eq!(k3.len(), 3);
        assert_eq!(k3.minimal().len(), 2);
        assert_eq!(k3.maximal().len(), 1);
        let k4 = enumerate_k(4).unwrap();
        assert_eq!(k4.f_vector(), vec![5, 5, 1]);
        assert_eq!(k4.grading(), GradingReport { unique_maximum: true, graded: true, covers_drop_dimension_by_one: true });
        // Pentagon: every vertex lies on exactly two edges.
        for v in k4.minimal() {
            assert_eq!(k4.covered_by(v).len(), 2);
        }
        assert!(enumerate_k(0).is_err());
        assert!(enumerate_k(9).is_err());
    }

    #[test]
    fn single_seam_posets_match_associahedra() {
        for k in 1..=4 {
            let w = enumerate_w(&[k]).unwrap();
            let kk = enumerate_k(k.max(1)).unwrap();
            assert!(find_isomorphism(&w, &kk).is_some(), "n = ({k})");
        }
        let w3 = enumerate_w(&[3]).unwrap();
        let mins = w3.minimal();
        assert_eq!(mins.len(), 2);
        assert!(!w3.leq(mins[0], mins[1]) && !w3.leq(mins[1], mins[0]));
    }

    #[test]
    fn one_point_posets_match_via_disk_trees() {
        for r in 2..=4 {
            let k = enumerate_k(r).unwrap();
            let mut n = vec![0; r];
            n[r - 1] = 1;
            let w = enumerate_w(&n).unwrap();
            let map: Vec<usize> = k
                .elements
                .iter()
                .map(|t| {
                    let p = TreePair::from_disk_tree(t, r - 1);
                    w.elements.iter().position(|q| *q == p).unwrap()
                })
                .collect();
            assert!(is_isomorphism(&k, &w, &map));
        }
    }

    #[test]
    fn two_seam_small_posets() {
        let w = enumerate_w(&[1, 1]).unwrap();
        assert_eq!(w.f_vector(), vec![2, 1]);
        let w = enumerate_w(&[2, 1]).unwrap();
        let g = w.grading();
        assert!(g.unique_maximum);
        assert!(g.graded);
        assert!(g.covers_drop_dimension_by_one);
        assert!(matches!(enumerate_w(&[2, 2, 2, 2]), Err(Error::ScaleLimitExceeded(_))));
    }

    #[test]
    fn euler_characteristic_and_grading() {
        for n in [vec![2, 1], vec![1, 2], vec![1, 1, 1], vec![3, 1], vec![2, 2], vec![1, 0, 1], vec![0, 2, 1]] {
            let w = enumerate_w(&n).unwrap();
            let chi: isize = w
                .f_vector()
                .iter()
                .enumerate()
                .map(|(d, f)| if d % 2 == 0 { *f as isize } else { -(*f as isize) })
                .sum();
            assert_eq!(chi, 1, "{n:?}");
            let g = w.grading();
            assert!(g.unique_maximum && g.graded && g.covers_drop_dimension_by_one, "{n:?}");
        }
        assert_eq!(enumerate_w(&[2, 1]).unwrap().f_vector(), enumerate_w(&[1, 2]).unwrap().f_vector());
    }

    #[test]
    fn isomorphism_search_rejects_different_posets() {
        let k4 = enumerate_k(4).unwrap();
        let k3 = enumerate_k(3).unwrap();
        let w11 = enumerate_w(&[1, 1]).unwrap();
        assert!(find_isomorphism(&k3, &w11).is_some());
        assert!(find_isomorphism(&k4, &k3).is_none());
    }
}
