//! Verifies that reparametrization families realize a claimed Gromov limit.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::family::SmoothFamily;
use super::GromovLimit;
use crate::error::{Error, Result};
use crate::moduli::{BubbleTarget, SeamTarget};
use crate::number::{ExtPoint1, ExtPoint2, Point2, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomResult {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AxiomResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Outcome per axiom. The primed entries run over all pairs rather than contiguous ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub disk_tree: AxiomResult,
    pub restriction: AxiomResult,
    pub rescaling: AxiomResult,
    pub special_point: AxiomResult,
    pub rescaling_all: AxiomResult,
    pub special_point_all: AxiomResult,
    pub v1_x_limits: AxiomResult,
}

impl ConvergenceReport {
    pub fn axioms(&self) -> [(&'static str, &AxiomResult); 7] {
        [
            ("disk tree", &self.disk_tree),
            ("restriction", &self.restriction),
            ("rescaling", &self.rescaling),
            ("special point", &self.special_point),
            ("rescaling'", &self.rescaling_all),
            ("special point'", &self.special_point_all),
            ("single-seam x-limits", &self.v1_x_limits),
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.axioms().iter().all(|(_, r)| r.passed())
    }
}

fn on_line(p: ExtPoint1) -> ExtPoint2 {
    p.map(|x| Point2::new(x, Rational::default()))
}

pub fn check_gromov_convergence(limit: &GromovLimit, family: &SmoothFamily) -> Result<ConvergenceReport> {
    let w = &limit.curve;
    let pair = w.pair();
    let ts = pair.seam_tree();
    if pair.type_vector() != family.type_vector().as_slice() || ts.leaf_count() != family.seam_count() {
        return Err(Error::SurjectionNotFound);
    }
    for v in ts.interior() {
        if !limit.phi.contains_key(&v) {
            return Err(Error::InvalidFamily(format!("no family at vertex {v}")));
        }
    }
    for a in pair.components() {
        if !limit.psi.contains_key(&a) {
            return Err(Error::InvalidFamily(format!("no family at component {a}")));
        }
    }
    let mut report = ConvergenceReport::default();

    let interior: Vec<_> = ts.interior().collect();
    for &rho in &interior {
        let f = &limit.phi[&rho];
        for i in 0..ts.leaf_count() {
            let want = w.derived_x_tree(rho, SeamTarget::Vertex(ts.leaf(i)))?;
            let got = f.pull(&family.x()[i]).limit();
            report.disk_tree.record(got == want, || format!("abscissa {i} at vertex {rho}: {got} != {want}"));
        }
        for &sigma in interior.iter().filter(|s| **s != rho) {
            let to = on_line(w.derived_x_tree(rho, SeamTarget::Vertex(sigma))?);
            let away = on_line(w.derived_x_tree(sigma, SeamTarget::Vertex(rho))?);
            let ok = f.relative(&limit.phi[&sigma]).converges_away(&to, &away);
            report.disk_tree.record(ok, || format!("vertices {rho}, {sigma} do not rescale to {to}"));
        }
    }

    let comps: Vec<_> = pair.components().collect();
    for &a in &comps {
        let f = &limit.psi[&a];
        if !pair.is_single_seam(a) {
            let rho = pair.label(a);
            let ok = f.horizontal() == limit.phi[&rho];
            report.restriction.record(ok, || format!("component {a} does not restrict to vertex {rho}"));
        } else {
            let h = f.horizontal();
            for i in 0..ts.leaf_count() {
                let want = w.derived_x_seam(a, SeamTarget::Vertex(ts.leaf(i)))?;
                let got = h.pull(&family.x()[i]).limit();
                report.v1_x_limits.record(got == want, || format!("component {a}, seam {i}: {got} != {want}"));
            }
        }
        for &b in comps.iter().filter(|b| **b != a) {
            let to = w.derived_z(a, BubbleTarget::Vertex(b))?;
            let away = w.derived_z(b, BubbleTarget::Vertex(a))?;
            let ok = f.relative(&limit.psi[&b]).converges_away(&to, &away);
            let what = || format!("components {a}, {b} do not rescale to {to}");
            if pair.contiguous(a, b)? {
                report.rescaling.record(ok, what);
            }
            report.rescaling_all.record(ok, what);
        }
        for m in pair.marks() {
            let (px, py) = family.point(pair.mark_key(m));
            let got = f.pull_limit(px, py);
            let want = w.derived_z(a, BubbleTarget::Vertex(m))?;
            let what = || format!("mark {m} on component {a}: {got} != {want}");
            if pair.parent_component(m) == Some(a) {
                report.special_point.record(got == want, what);
            }
            report.special_point_all.record(got == want, what);
        }
    }
    Ok(report)
}
