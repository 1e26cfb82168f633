use super::*;
use crate::laurent::Laurent;
use crate::limits::{gromov_limit, Reparam2Family};
use crate::number::{int, rat};
use alloc::collections::BTreeMap;
use proptest::prelude::*;

fn fin(x: f64, y: f64) -> Ext2 {
    Extended::Finite([x, y])
}

#[test]
fn chordal_values() {
    assert_eq!(chordal(&fin(0.0, 0.0), &Extended::Infinity), 2.0);
    assert_eq!(chordal(&Extended::Infinity, &Extended::Infinity), 0.0);
    assert!((chordal(&fin(1.0, 0.0), &fin(-1.0, 0.0)) - 2.0).abs() < 1e-15);
    assert!((chordal(&fin(0.0, 1.0), &fin(1.0, 0.0)) - libm::sqrt(2.0)).abs() < 1e-15);
    assert!(chordal(&fin(1e300, 0.0), &Extended::Infinity) < 1e-299);
    assert_eq!(chordal_d1(&Extended::Finite(int(0)), &Extended::Infinity), 2.0);
}

#[test]
fn lift_is_isometric() {
    for z in [fin(0.3, -2.0), fin(1e120, 3.0), fin(0.0, 0.0), Extended::Infinity] {
        let w = fin(-0.7, 0.1);
        let (p, q) = (lift(&z), lift(&w));
        let chord = norm(&[p[0] - q[0], p[1] - q[1], p[2] - q[2]]);
        assert!((chord - chordal(&z, &w)).abs() < 1e-12);
        assert!((norm(&p) - 1.0).abs() < 1e-12);
    }
}

fn ext2() -> impl Strategy<Value = Ext2> {
    prop_oneof![
        1 => Just(Extended::Infinity),
        9 => (-20.0..20.0f64, -20.0..20.0f64).prop_map(|(x, y)| fin(x, y)),
    ]
}

fn affine() -> impl Strategy<Value = Affine> {
    (-3.0..3.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(la, bx, by)| Affine { a: libm::exp(la), b: [bx, by] })
}

/// Brute-force supremum: the boundary circle sampled densely, random points of the domain,
/// and the antipode of the target whenever the domain reaches it.
fn sampled_sup(tau: &Affine, centre: &Ext2, eps: f64, target: &Ext2, domain: Domain, seed: u64) -> f64 {
    let w = lift(centre);
    let h = 1.0 - eps * eps / 2.0;
    // Orthonormal frame around w, restricted to the X_2 = 0 circle on the line.
    let (u, v) = match domain {
        Domain::Line => ([w[2], 0.0, -w[0]], [0.0, 0.0, 0.0]),
        Domain::Plane => {
            let helper = if w[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
            let u = cross(&w, &helper);
            let u = scale(&u, 1.0 / norm(&u));
            (u, cross(&w, &u))
        }
    };
    let r = libm::sqrt((1.0 - h * h).max(0.0));
    let mut best: f64 = 0.0;
    let mut consider = |p: Vec3| {
        let z = unlift(&p, domain);
        if chordal(&z, centre) >= eps - 1e-12 {
            best = best.max(chordal(&tau.apply(&z), target));
        }
    };
    for k in 0..4096 {
        let th = core::f64::consts::TAU * k as f64 / 4096.0;
        let (c, s) = (libm::cos(th), libm::sin(th));
        consider([h * w[0] + r * (c * u[0] + s * v[0]), h * w[1] + r * (c * u[1] + s * v[1]), h * w[2] + r * (c * u[2] + s * v[2])]);
    }
    let mut g = crate::optimize::Gaussian::new(seed);
    for _ in 0..2000 {
        let p = match domain {
            Domain::Line => [g.sample(), 0.0, g.sample()],
            Domain::Plane => [g.sample(), g.sample(), g.sample()],
        };
        consider(scale(&p, 1.0 / norm(&p)));
    }
    let far = tau.inverse().apply(&antipode(target));
    if chordal(&far, centre) >= eps {
        best = best.max(chordal(&tau.apply(&far), target));
    }
    best
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn scale(a: &Vec3, k: f64) -> Vec3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn unlift(p: &Vec3, domain: Domain) -> Ext2 {
    if domain == Domain::Line {
        return unlift_line(p[0], p[2]);
    }
    let d = 1.0 - p[2];
    if d <= 0.0 {
        Extended::Infinity
    } else {
        fin(p[0] / d, p[1] / d)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn chordal_is_a_metric(z in ext2(), w in ext2(), u in ext2()) {
        let (zw, wu, zu) = (chordal(&z, &w), chordal(&w, &u), chordal(&z, &u));
        prop_assert!((zw - chordal(&w, &z)).abs() < 1e-15);
        prop_assert!(zu <= zw + wu + 1e-12);
        prop_assert!((0.0..=2.0 + 1e-15).contains(&zw));
        prop_assert_eq!(chordal(&z, &z), 0.0);
    }

    #[test]
    fn plane_sup_matches_sampling(tau in affine(), centre in ext2(), target in ext2(), eps in 0.05..1.99f64, seed in any::<u64>()) {
        let exact = sup_outside_ball(&tau, &centre, eps, &target, Domain::Plane);
        let sampled = sampled_sup(&tau, &centre, eps, &target, Domain::Plane, seed);
        prop_assert!(sampled <= exact + 1e-9, "{sampled} > {exact}");
        prop_assert!(exact - sampled < 1e-3, "{exact} vs {sampled}");
    }

    #[test]
    fn line_sup_matches_sampling(la in -3.0..3.0f64, b in -5.0..5.0f64, c in prop_oneof![1 => Just(Extended::Infinity), 9 => (-20.0..20.0f64).prop_map(|x| fin(x, 0.0))],
                                 t in prop_oneof![1 => Just(Extended::Infinity), 9 => (-20.0..20.0f64).prop_map(|x| fin(x, 0.0))],
                                 eps in 0.05..1.99f64, seed in any::<u64>()) {
        let tau = Affine { a: libm::exp(la), b: [b, 0.0] };
        let exact = sup_outside_ball(&tau, &c, eps, &t, Domain::Line);
        let sampled = sampled_sup(&tau, &c, eps, &t, Domain::Line, seed);
        prop_assert!(sampled <= exact + 1e-9, "{sampled} > {exact}");
        prop_assert!(exact - sampled < 1e-3, "{exact} vs {sampled}");
    }
}

#[test]
fn empty_domain_and_full_reach() {
    assert_eq!(sup_outside_ball(&Affine::IDENTITY, &fin(0.0, 0.0), 2.5, &fin(0.0, 0.0), Domain::Plane), 0.0);
    // Far from 0 the identity reaches ∞, the antipode of 0.
    assert_eq!(sup_outside_ball(&Affine::IDENTITY, &fin(0.0, 0.0), 0.5, &fin(0.0, 0.0), Domain::Plane), 2.0);
    // Outside the unit ball around ∞ lies the disk |z| ≤ √3.
    let v = sup_outside_ball(&Affine::IDENTITY, &Extended::Infinity, 1.0, &fin(0.0, 0.0), Domain::Plane);
    assert!((v - libm::sqrt(3.0)).abs() < 1e-12, "{v}");
}

fn l(terms: &[(i32, i64)]) -> Laurent {
    Laurent::from_terms(terms.iter().map(|(e, c)| (*e, int(*c))))
}

fn identity_witness(w: &WitchCurve) -> MuWitness {
    MuWitness {
        surjection: TreePairSurjection::identity(w.pair()),
        phi: w.pair().seam_tree().interior().map(|v| (v, Reparam1::identity())).collect(),
        psi: w.pair().components().map(|a| (a, Reparam2::identity())).collect(),
    }
}

fn nested_limit() -> (GromovLimit, SmoothFamily) {
    let f = crate::limits::tests::nested_family();
    (gromov_limit(&f).unwrap(), f)
}

#[test]
fn identity_witness_gives_zero() {
    let (lim, _) = nested_limit();
    let w = &lim.curve;
    assert_eq!(mu_eps_with_data(w, w, &identity_witness(w), 0.25).unwrap(), 0.0);
    let est = mu_eps(w, w, 0.25, &MuOptions::default()).unwrap();
    assert!(est.value <= 1e-9, "{est:?}");
}

#[test]
fn witness_errors() {
    let (lim, f) = nested_limit();
    let w = &lim.curve;
    let wt = f.at(&rat(1, 100)).unwrap();
    assert!(matches!(mu_eps_with_data(w, &wt, &identity_witness(w), 0.25), Err(Error::SurjectionMismatch(_))));
    let (wt, mut witness) = family_witness(&lim, &f, &rat(1, 100)).unwrap();
    assert!(matches!(mu_eps_with_data(w, &wt, &witness, 0.0), Err(Error::InvalidRadius(_))));
    let multi = w.pair().components().find(|a| !w.pair().is_single_seam(*a)).unwrap();
    witness.psi.get_mut(&multi).unwrap().b.x += int(1);
    assert_eq!(mu_eps_with_data(w, &wt, &witness, 0.25), Err(Error::ProjectionMismatch(multi)));
}

#[test]
fn no_surjection_means_infinite_distance() {
    let (lim, f) = nested_limit();
    let wt = f.at(&rat(1, 100)).unwrap();
    // The smooth curve does not degenerate to the nodal one.
    let est = mu_eps(&wt, &lim.curve, 0.25, &MuOptions::default()).unwrap();
    assert_eq!(est.value, f64::INFINITY);
    assert!(est.witness.is_none());
}

#[test]
fn mu_tends_to_zero_along_the_family() {
    let (lim, f) = nested_limit();
    for eps in [0.25, 0.1] {
        let values: Vec<f64> = (5..=20)
            .map(|k| {
                let (wt, witness) = family_witness(&lim, &f, &rat(1, 1 << k)).unwrap();
                mu_eps_with_data(&lim.curve, &wt, &witness, eps).unwrap()
            })
            .collect();
        assert!(values[15] < 1e-3, "{values:?}");
        assert!(values.windows(2).skip(3).all(|p| p[1] < p[0]), "{values:?}");
    }
}

#[test]
fn bubbles_below_float_resolution_still_converge() {
    // The two heights differ by 3t³, far below one ulp of 1 for small t.
    let l = |terms: &[(i32, i64)]| Laurent::from_terms(terms.iter().map(|(e, c)| (*e, int(*c))));
    let f = SmoothFamily::new(
        vec![l(&[(1, 2), (2, -2)]), l(&[(1, 4), (2, -1)])],
        vec![vec![], vec![l(&[(0, 1)]), l(&[(0, 1), (3, 3), (5, 1)])]],
    )
    .unwrap();
    let lim = gromov_limit(&f).unwrap();
    let values: Vec<f64> = (17..=22)
        .map(|k| {
            let (wt, witness) = family_witness(&lim, &f, &rat(1, 1 << k)).unwrap();
            mu_eps_with_data(&lim.curve, &wt, &witness, 0.25).unwrap()
        })
        .collect();
    assert!(values.windows(2).all(|p| p[1] < p[0]), "{values:?}");
    assert!(values[5] < 1e-5, "{values:?}");
}

#[test]
fn rho_is_bounded_by_mu() {
    let (lim, f) = nested_limit();
    for k in [3, 6, 9] {
        let (wt, witness) = family_witness(&lim, &f, &rat(1, 1 << k)).unwrap();
        let mu = mu_eps_with_data(&lim.curve, &wt, &witness, 0.25).unwrap();
        let rho = rho_eps_with_data(&lim.curve.disk_tree(), &wt.disk_tree(), &witness.surjection.seam_map, &witness.phi, 0.25)
            .unwrap();
        assert!(rho <= mu, "{rho} > {mu}");
        assert!(rho > 0.0);
    }
}

#[test]
fn witness_gauge_invariance() {
    let (lim, f) = nested_limit();
    let (wt, witness) = family_witness(&lim, &f, &rat(1, 64)).unwrap();
    let before = mu_eps_with_data(&lim.curve, &wt, &witness, 0.25).unwrap();
    let g2 = Reparam2Family::new(l(&[(0, 3)]), l(&[(0, -2)]), l(&[(0, 5)])).unwrap().at(&int(1)).unwrap();
    let g1 = g2.horizontal();
    let ts = wt.pair().seam_tree();
    let phi: SeamMaps = ts.interior().map(|v| (v, g1.clone())).collect();
    let psi: ComponentMaps = wt.pair().components().map(|a| (a, g2.clone())).collect();
    let moved = wt.apply_reparam(&phi, &psi).unwrap();
    let composed = MuWitness {
        surjection: witness.surjection.clone(),
        phi: witness.phi.iter().map(|(v, f)| (*v, g1.compose(f))).collect::<BTreeMap<_, _>>(),
        psi: witness.psi.iter().map(|(a, f)| (*a, g2.compose(f))).collect::<BTreeMap<_, _>>(),
    };
    let after = mu_eps_with_data(&lim.curve, &moved, &composed, 0.25).unwrap();
    assert_eq!(before, after);
}

#[test]
fn optimizer_does_not_lose_to_the_family_witness() {
    let (lim, f) = nested_limit();
    let (wt, witness) = family_witness(&lim, &f, &rat(1, 32)).unwrap();
    let given = mu_eps_with_data(&lim.curve, &wt, &witness, 0.25).unwrap();
    let options = MuOptions { start: Some(witness), ..Default::default() };
    let est = mu_eps(&lim.curve, &wt, 0.25, &options).unwrap();
    assert!(est.value <= given + 1e-12, "{} > {given}", est.value);
    let found = est.witness.unwrap();
    assert_eq!(mu_eps_with_data(&lim.curve, &wt, &found, 0.25).unwrap(), est.value);
}
