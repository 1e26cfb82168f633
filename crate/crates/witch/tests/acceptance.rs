//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use witch::corpus::{Corpus, CorpusShape};
use witch_core::laurent::Laurent;
use witch_core::limits::{
    check_gromov_convergence, classification_candidates, gromov_limit, gromov_limit_with, limit_disk_tree, GromovLimit,
    LimitOptions, SmoothFamily,
};
use witch_core::metric::{chordal, family_witness, mu_eps, mu_eps_with_data, Ext2, MuOptions};
use witch_core::number::{int, rat, Extended};
use witch_core::optimize::Gaussian;
use witch_core::strata::{enumerate_k, enumerate_w, find_isomorphism, forgetful, is_isomorphism};
use witch_core::treepair::TreePair;
use witch_core::trees::{enumerate_stable_rrts, Rrt};
use witch_core::Error;

const CORPUS_SIZE: usize = 500;
const CORPUS_SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn timed(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took < limit {
        Ok(format!("{detail} in {:.2?}", took))
    } else {
        Err(format!("{detail}, but took {took:.2?} (limit {limit:?})"))
    }
}

/// Faces of K_r as families of pairwise nested-or-disjoint proper leaf intervals,
/// found by testing every subset of intervals.
fn bracketing_oracle(r: usize) -> BTreeSet<BTreeSet<(usize, usize)>> {
    let intervals: Vec<(usize, usize)> =
        (0..r).flat_map(|i| (i + 2..=r).map(move |j| (i, j))).filter(|&(i, j)| j - i < r).collect();
    let compatible = |a: (usize, usize), b: (usize, usize)| {
        a.1 <= b.0 || b.1 <= a.0 || (a.0 <= b.0 && b.1 <= a.1) || (b.0 <= a.0 && a.1 <= b.1)
    };
    let mut faces = BTreeSet::new();
    for mask in 0u32..(1 << intervals.len()) {
        let chosen: Vec<_> = (0..intervals.len()).filter(|k| mask >> k & 1 == 1).map(|k| intervals[k]).collect();
        if chosen.iter().enumerate().all(|(x, a)| chosen[x + 1..].iter().all(|b| compatible(*a, *b))) {
            faces.insert(chosen.into_iter().collect());
        }
    }
    faces
}

fn brackets(t: &Rrt) -> BTreeSet<(usize, usize)> {
    t.interior().filter(|v| *v != t.root()).map(|v| t.leaf_span(v)).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    for r in 1..=5 {
        let trees = enumerate_stable_rrts(r);
        let oracle = bracketing_oracle(r);
        let ours: BTreeSet<_> = trees.iter().map(brackets).collect();
        if trees.len() != oracle.len() || ours != oracle {
            return Err(format!("r = {r}: {} trees, oracle has {} faces", trees.len(), oracle.len()));
        }
        counts.push(trees.len());
    }
    if counts != [1, 1, 3, 11, 45] {
        return Err(format!("counts {counts:?}"));
    }
    timed(Duration::from_secs(10), start, format!("counts {counts:?} agree with the bracketing oracle"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for n in 1..=4 {
        let w = enumerate_w(&[n]).map_err(|e| e.to_string())?;
        let k = enumerate_k(n).map_err(|e| e.to_string())?;
        if find_isomorphism(&w, &k).is_none() {
            return Err(format!("W_({n}) is not isomorphic to K_{n}"));
        }
    }
    for r in 1..=5 {
        let k = enumerate_k(r).map_err(|e| e.to_string())?;
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            let w = enumerate_w(&e).map_err(|e| e.to_string())?;
            let ok = if r == 1 {
                find_isomorphism(&k, &w).is_some()
            } else {
                // The map from disk trees must itself be the isomorphism.
                let map: Option<Vec<usize>> = k
                    .elements
                    .iter()
                    .map(|t| {
                        let p = TreePair::from_disk_tree(t, i);
                        w.elements.iter().position(|q| *q == p)
                    })
                    .collect();
                map.is_some_and(|m| is_isomorphism(&k, &w, &m))
            };
            if !ok {
                return Err(format!("W_{e:?} is not K_{r} via disk trees"));
            }
        }
    }
    timed(Duration::from_secs(60), start, "W_(n) = K_n for n <= 4 and W_(e_i) = K_r for r <= 5".into())
}

struct Instance {
    family: SmoothFamily,
    limit: GromovLimit,
}

fn corpus() -> Result<Vec<Instance>, String> {
    let mut gen = Corpus::new(CORPUS_SEED, CorpusShape { max_seams: 3, max_points: 4 });
    (0..CORPUS_SIZE)
        .map(|k| {
            let family = gen.family();
            let limit = gromov_limit(&family).map_err(|e| format!("family {k}: {e}"))?;
            Ok(Instance { family, limit })
        })
        .collect()
}

fn criterion_3(items: &[Instance]) -> Outcome {
    let mut gen = Corpus::new(CORPUS_SEED + 1, CorpusShape::default());
    let mut tags = BTreeSet::new();
    let mut tested = 0;
    for (k, item) in items.iter().enumerate() {
        let mut done = false;
        while !done {
            let (_, zx, zy) = gen.new_point(&item.family, tested % 5 == 4);
            match classification_candidates(&item.limit, &item.family, &zx, &zy) {
                Err(Error::CoincidentPoint(..)) => continue,
                Err(e) => return Err(format!("family {k}: {e}")),
                Ok((cases, _)) if cases.len() != 1 => {
                    return Err(format!("family {k}, point ({zx}, {zy}): {} cases {cases:?}", cases.len()))
                }
                Ok((cases, _)) => {
                    tags.insert(cases[0].tag());
                    tested += 1;
                    done = true;
                }
            }
        }
    }
    Ok(format!("{tested} families with a new point, exactly one case each; cases seen {tags:?}"))
}

fn criterion_4(items: &[Instance], start: Instant) -> Outcome {
    let mut checks = 0;
    for (k, item) in items.iter().enumerate() {
        let report = check_gromov_convergence(&item.limit, &item.family).map_err(|e| format!("family {k}: {e}"))?;
        if !report.all_passed() {
            return Err(format!("family {k}: {report:?}"));
        }
        checks += report.axioms().iter().map(|(_, r)| r.checked).sum::<usize>();
    }
    timed(Duration::from_secs(300), start, format!("{} limits, {checks} axiom instances, zero failures", items.len()))
}

fn criterion_5(items: &[Instance]) -> Outcome {
    let mut gen = Corpus::new(CORPUS_SEED + 2, CorpusShape::default());
    for (k, item) in items.iter().enumerate() {
        let gauge = gen.gauge();
        let moved = item.family.apply_gauge(&gauge).map_err(|e| format!("family {k}: {e}"))?;
        let gauged = gromov_limit(&moved).map_err(|e| format!("family {k}: {e}"))?;
        if item.limit.curve.is_isomorphic(&gauged.curve).is_none() {
            return Err(format!("family {k}: gauge {gauge:?} changes the limit"));
        }
        let options = LimitOptions { tie_order: Some(gen.tie_order(&item.family)) };
        let reordered = gromov_limit_with(&item.family, &options).map_err(|e| format!("family {k}: {e}"))?;
        if item.limit.curve.is_isomorphic(&reordered.curve).is_none() {
            return Err(format!("family {k}: tie order {:?} changes the limit", options.tie_order));
        }
    }
    Ok(format!("{} families, gauged and reordered limits all isomorphic", items.len()))
}

fn type_vectors(max_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for r in 1..max_size {
        let mut n = vec![0; r];
        loop {
            let size = n.iter().sum::<usize>() + r;
            if size <= max_size && n.iter().any(|k| *k > 0) {
                out.push(n.clone());
            }
            // Odometer over 0..=max_size - r per entry.
            let mut i = 0;
            while i < r && n[i] == max_size - r {
                n[i] = 0;
                i += 1;
            }
            if i == r {
                break;
            }
            n[i] += 1;
        }
    }
    out
}

fn criterion_6(items: &[Instance]) -> Outcome {
    for (k, item) in items.iter().enumerate() {
        let disk = limit_disk_tree(item.family.x()).map_err(|e| format!("family {k}: {e}"))?;
        if forgetful(item.limit.pair()) != *disk.tree.tree() || item.limit.curve.disk_tree().is_isomorphic(&disk.tree).is_none()
        {
            return Err(format!("family {k}: forgetful image differs from the disk-tree limit"));
        }
    }
    let mut pairs = 0usize;
    let vectors = type_vectors(7);
    for n in &vectors {
        let w = enumerate_w(n).map_err(|e| e.to_string())?;
        let kr = enumerate_k(n.len()).map_err(|e| e.to_string())?;
        let index: Vec<usize> = w
            .elements
            .iter()
            .map(|p| kr.elements.iter().position(|t| *t == forgetful(p)).expect("seam trees are stable"))
            .collect();
        for a in 0..w.len() {
            for b in 0..w.len() {
                if w.leq(a, b) {
                    pairs += 1;
                    if !kr.leq(index[a], index[b]) {
                        return Err(format!("n = {n:?}: order not preserved between strata {a} and {b}"));
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} limits match their disk trees; order preserved on {pairs} relations over {} type vectors",
        items.len(),
        vectors.len()
    ))
}

fn nested_family() -> SmoothFamily {
    let l = |terms: &[(i32, i64)]| Laurent::from_terms(terms.iter().map(|(e, c)| (*e, int(*c))));
    SmoothFamily::new(
        vec![l(&[]), l(&[(2, 1)]), l(&[(2, 1), (4, 1)]), l(&[(2, 1), (3, 1)]), l(&[(0, 1)])],
        vec![vec![l(&[])], vec![], vec![], vec![l(&[(1, 1)])], vec![]],
    )
    .expect("valid family")
}

fn criterion_7() -> Outcome {
    let f = nested_family();
    let lim = gromov_limit(&f).map_err(|e| e.to_string())?;
    let (interior, comps) = (lim.pair().seam_tree().interior_count(), lim.pair().component_count());
    let passed = check_gromov_convergence(&lim, &f).map_err(|e| e.to_string())?.all_passed();
    if f.type_vector() != [1, 0, 0, 1, 0] || interior != 4 || comps != 5 || !passed {
        return Err(format!("{interior} interior vertices, {comps} components, checker passed: {passed}"));
    }
    Ok(format!("type (1,0,0,1,0): 4 interior vertices, 5 components, stratum {}", lim.pair().encoding()))
}

fn criterion_8(items: &[Instance]) -> Outcome {
    let chosen: Vec<&Instance> = items.iter().filter(|i| !i.limit.pair().is_smooth()).take(10).collect();
    if chosen.len() < 10 {
        return Err("fewer than 10 degenerating families in the corpus".into());
    }
    let mut worst_last: f64 = 0.0;
    let mut latest_k0 = 0;
    for (k, item) in chosen.iter().enumerate() {
        for eps in [0.25, 0.1] {
            let mut values = Vec::new();
            for j in 5..=20 {
                let (wt, witness) =
                    family_witness(&item.limit, &item.family, &rat(1, 1 << j)).map_err(|e| format!("family {k}: {e}"))?;
                values.push(mu_eps_with_data(&item.limit.curve, &wt, &witness, eps).map_err(|e| format!("family {k}: {e}"))?);
            }
            let last = *values.last().unwrap();
            // First k from which the sequence is strictly decreasing.
            let mut k0 = values.len() - 1;
            while k0 > 0 && values[k0 - 1] > values[k0] {
                k0 -= 1;
            }
            if last >= 1e-3 || k0 >= values.len() - 1 {
                return Err(format!("family {k}, eps {eps}: {values:?}"));
            }
            worst_last = worst_last.max(last);
            latest_k0 = latest_k0.max(k0 + 5);
        }
        let identity = mu_eps(&item.limit.curve, &item.limit.curve, 0.25, &MuOptions::default()).map_err(|e| e.to_string())?;
        if identity.value > 1e-9 {
            return Err(format!("family {k}: mu(W, W) = {}", identity.value));
        }
    }
    Ok(format!(
        "10 families, eps 1/4 and 1/10: largest value at k = 20 is {worst_last:.2e}, strictly decreasing from k = {latest_k0}; mu(W, W) <= 1e-9"
    ))
}

fn criterion_9() -> Outcome {
    let mut g = Gaussian::new(9);
    let points: Vec<Ext2> = (0..10_000)
        .map(|k| {
            if k % 50 == 0 {
                Extended::Infinity
            } else {
                let scale = 10f64.powf(3.0 * g.sample());
                Extended::Finite([scale * g.sample(), scale * g.sample()])
            }
        })
        .collect();
    let mut worst: f64 = 0.0;
    for k in 0..points.len() {
        let (a, b, c) = (&points[k], &points[(k * 7 + 1) % points.len()], &points[(k * 13 + 5) % points.len()]);
        if chordal(a, a) != 0.0 {
            return Err(format!("d(z, z) != 0 at {a:?}"));
        }
        worst = worst.max((chordal(a, b) - chordal(b, a)).abs());
        worst = worst.max(chordal(a, c) - chordal(a, b) - chordal(b, c));
    }
    if worst > 1e-12 {
        return Err(format!("symmetry or triangle violated by {worst:e}"));
    }
    let zero_inf = chordal(&Extended::Finite([0.0, 0.0]), &Extended::Infinity);
    if zero_inf != 2.0 {
        return Err(format!("d(0, inf) = {zero_inf}"));
    }
    Ok(format!("10^4 points: worst violation {worst:.1e}, d(0, inf) = 2"))
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(&str, Outcome)> = vec![
        ("associahedron counts", criterion_1()),
        ("W-vs-K reductions", criterion_2()),
    ];
    let corpus_start = Instant::now();
    match corpus() {
        Err(e) => {
            for name in ["new-point classification", "limit correctness", "uniqueness", "forgetful compatibility"] {
                results.push((name, Err(format!("corpus limits failed: {e}"))));
            }
            results.push(("nested family", criterion_7()));
            results.push(("mu convergence", Err("no corpus".into())));
        }
        Ok(items) => {
            results.push(("new-point classification", criterion_3(&items)));
            results.push(("limit correctness", criterion_4(&items, corpus_start)));
            results.push(("uniqueness", criterion_5(&items)));
            results.push(("forgetful compatibility", criterion_6(&items)));
            results.push(("nested family", criterion_7()));
            results.push(("mu convergence", criterion_8(&items)));
        }
    }
    results.push(("metric sanity", criterion_9()));

    let mut failed = 0;
    for (k, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed in {:.2?}", results.len() - failed, results.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
