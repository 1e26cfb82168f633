//! Chordal distance on the Riemann sphere and the approximate distances `μ_ε`, `ρ_ε`
//! between a degenerate curve and a nearby one.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::limits::{GromovLimit, SmoothFamily};
use crate::moduli::{BubbleTarget, ComponentMaps, DiskTree, Reparam1, Reparam2, SeamMaps, SeamTarget, WitchCurve};
use crate::number::{from_f64, to_f64, ExtPoint1, ExtPoint2, Extended, Point2, Rational};
use crate::optimize::{multistart, NelderMead};
use crate::treepair::{tree_pair_surjections, BubbleId, TreePairSurjection};
use crate::trees::{rrt_surjection, RrtSurjection, VertexId};

/// A point of the extended plane in floating point.
pub type Ext2 = Extended<[f64; 2]>;

fn hypot(z: [f64; 2]) -> f64 {
    libm::hypot(z[0], z[1])
}

/// Chordal distance `2|z-w| / sqrt((1+|z|²)(1+|w|²))`, with `d(z, ∞) = 2 / sqrt(1+|z|²)`.
pub fn chordal(z: &Ext2, w: &Ext2) -> f64 {
    match (z, w) {
        (Extended::Infinity, Extended::Infinity) => 0.0,
        (Extended::Finite(p), Extended::Infinity) | (Extended::Infinity, Extended::Finite(p)) => {
            2.0 / libm::hypot(1.0, hypot(*p))
        }
        (Extended::Finite(p), Extended::Finite(q)) => {
            let diff = hypot([p[0] - q[0], p[1] - q[1]]);
            2.0 * diff / libm::hypot(1.0, hypot(*p)) / libm::hypot(1.0, hypot(*q))
        }
    }
}

pub fn ext2_from_exact(p: &ExtPoint2) -> Ext2 {
    p.clone().map(|p| [to_f64(&p.x), to_f64(&p.y)])
}

pub fn ext2_from_line(p: &ExtPoint1) -> Ext2 {
    p.clone().map(|x| [to_f64(&x), 0.0])
}

/// Chordal distance between exact points, evaluated in floating point.
pub fn chordal_d(z: &ExtPoint2, w: &ExtPoint2) -> f64 {
    chordal(&ext2_from_exact(z), &ext2_from_exact(w))
}

pub fn chordal_d1(x: &ExtPoint1, y: &ExtPoint1) -> f64 {
    chordal(&ext2_from_line(x), &ext2_from_line(y))
}

/// `z ↦ a z + b` with `a > 0`, acting on the extended plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub a: f64,
    pub b: [f64; 2],
}

impl Affine {
    pub const IDENTITY: Affine = Affine { a: 1.0, b: [0.0, 0.0] };

    pub fn apply(&self, z: &Ext2) -> Ext2 {
        match z {
            Extended::Finite(p) => Extended::Finite([self.a * p[0] + self.b[0], self.a * p[1] + self.b[1]]),
            Extended::Infinity => Extended::Infinity,
        }
    }

    pub fn inverse(&self) -> Affine {
        Affine { a: 1.0 / self.a, b: [-self.b[0] / self.a, -self.b[1] / self.a] }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Affine) -> Affine {
        Affine {
            a: self.a * inner.a,
            b: [self.a * inner.b[0] + self.b[0], self.a * inner.b[1] + self.b[1]],
        }
    }

    pub fn from_reparam1(f: &Reparam1) -> Affine {
        Affine { a: to_f64(&f.a), b: [to_f64(&f.b), 0.0] }
    }

    pub fn from_reparam2(f: &Reparam2) -> Affine {
        Affine { a: to_f64(&f.a), b: [to_f64(&f.b.x), to_f64(&f.b.y)] }
    }
}

/// Whether a supremum runs over the real line or the whole plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Line,
    Plane,
}

type Vec3 = [f64; 3];

fn dot(u: &Vec3, v: &Vec3) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn norm(u: &Vec3) -> f64 {
    libm::sqrt(dot(u, u))
}

/// Inverse stereographic projection onto the unit sphere, `∞` at the north pole.
fn lift(z: &Ext2) -> Vec3 {
    let p = match z {
        Extended::Infinity => return [0.0, 0.0, 1.0],
        Extended::Finite(p) => *p,
    };
    let r = hypot(p);
    if r > 1e100 {
        // Invert through the unit circle, which flips the third coordinate.
        let q = [p[0] / r / r, p[1] / r / r];
        let s = 1.0 + q[0] * q[0] + q[1] * q[1];
        return [2.0 * q[0] / s, 2.0 * q[1] / s, (1.0 - (s - 1.0)) / s];
    }
    let s = 1.0 + r * r;
    [2.0 * p[0] / s, 2.0 * p[1] / s, (r * r - 1.0) / s]
}

/// Stereographic projection of a point on the circle `X_2 = 0` back to the extended line.
fn unlift_line(x1: f64, x3: f64) -> Ext2 {
    if libm::fabs(1.0 - x3) >= libm::fabs(x1) {
        Extended::Finite([x1 / (1.0 - x3), 0.0])
    } else if x1 != 0.0 {
        Extended::Finite([(1.0 + x3) / x1, 0.0])
    } else {
        Extended::Infinity
    }
}

fn antipode(z: &Ext2) -> Ext2 {
    match z {
        Extended::Infinity => Extended::Finite([0.0, 0.0]),
        Extended::Finite(p) if p[0] == 0.0 && p[1] == 0.0 => Extended::Infinity,
        Extended::Finite(p) => {
            let r = hypot(*p);
            Extended::Finite([-p[0] / r / r, -p[1] / r / r])
        }
    }
}

/// The generalized circle `a|z|² + 2 n·z + c = 0`.
#[derive(Clone, Copy, Debug)]
struct GenCircle {
    a: f64,
    n: [f64; 2],
    c: f64,
}

impl GenCircle {
    /// The circle `{X : X·N = h}` on the sphere, seen in the plane.
    fn from_plane(normal: &Vec3, h: f64) -> GenCircle {
        GenCircle { a: normal[2] - h, n: [normal[0], normal[1]], c: -(normal[2] + h) }
    }

    fn image(&self, tau: &Affine) -> GenCircle {
        let (s, b) = (tau.a, tau.b);
        let nb = self.n[0] * b[0] + self.n[1] * b[1];
        let out = GenCircle {
            a: self.a,
            n: [s * self.n[0] - self.a * b[0], s * self.n[1] - self.a * b[1]],
            c: self.a * (b[0] * b[0] + b[1] * b[1]) - 2.0 * s * nb + self.c * s * s,
        };
        let m = [out.a, out.n[0], out.n[1], out.c].iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
        if m > 0.0 && m.is_finite() {
            GenCircle { a: out.a / m, n: [out.n[0] / m, out.n[1] / m], c: out.c / m }
        } else {
            out
        }
    }

    /// Unit normal and offset of the plane cutting this circle out of the sphere.
    fn plane(&self) -> (Vec3, f64) {
        let normal = [2.0 * self.n[0], 2.0 * self.n[1], self.a - self.c];
        let h = -(self.a + self.c);
        let len = norm(&normal);
        ([normal[0] / len, normal[1] / len, normal[2] / len], h / len)
    }
}

/// Largest chordal distance from `p` to the circle `{X : X·n = h}` (`n` a unit vector).
fn farthest_on_circle(n: &Vec3, h: f64, p: &Vec3) -> f64 {
    let h = h.clamp(-1.0, 1.0);
    let along = dot(n, p);
    let perp = [p[0] - along * n[0], p[1] - along * n[1], p[2] - along * n[2]];
    let radius = libm::sqrt(1.0 - h * h);
    let lowest = h * along - radius * norm(&perp);
    libm::sqrt((2.0 - 2.0 * lowest).max(0.0))
}

/// `sup { d(τ(z), target) : d(z, centre) ≥ ε }` over the line or the plane.
///
/// The farthest point from `target` is its antipode; when that lies in the image of the
/// domain the answer is 2, and otherwise the supremum is attained on the boundary.
pub fn sup_outside_ball(tau: &Affine, centre: &Ext2, eps: f64, target: &Ext2, domain: Domain) -> f64 {
    if eps > 2.0 {
        return 0.0;
    }
    let far = tau.inverse().apply(&antipode(target));
    if chordal(&far, centre) >= eps {
        return 2.0;
    }
    let w = lift(centre);
    let h = 1.0 - eps * eps / 2.0;
    match domain {
        Domain::Plane => {
            let (n, h) = GenCircle::from_plane(&w, h).image(tau).plane();
            farthest_on_circle(&n, h, &lift(target))
        }
        Domain::Line => {
            // The boundary is the pair of points on the great circle X_2 = 0 at height h over w.
            let len = libm::hypot(w[0], w[2]);
            let (u1, u3) = (w[0] / len, w[2] / len);
            let r = libm::sqrt((1.0 - h * h).max(0.0));
            [1.0, -1.0]
                .iter()
                .map(|sign| {
                    let x1 = h * u1 - sign * r * u3;
                    let x3 = h * u3 + sign * r * u1;
                    chordal(&tau.apply(&unlift_line(x1, x3)), target)
                })
                .fold(0.0, f64::max)
        }
    }
}

fn check_radius(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidRadius(format!("{eps}")))
    }
}

/// Data of the sums that make up `ρ_ε` and `μ_ε` for a fixed surjection. Anchor images
/// are kept exact so that exact frames can be applied before rounding.
#[derive(Clone, Debug, Default)]
struct Terms {
    /// `(ρ, σ, x_{ρσ}, x_{σρ})` for distinct interior vertices with the same image.
    seam_sups: Vec<(VertexId, VertexId, Ext2, Ext2)>,
    /// `(ρ, x̃_{f(ρ)f(σ)}, x_{ρσ})` for vertices with different images.
    seam_anchors: Vec<(VertexId, Anchor<ExtPoint1>)>,
    /// `(α, β, z_{αβ}, z_{βα})` for distinct components with the same image.
    bubble_sups: Vec<(BubbleId, BubbleId, Ext2, Ext2)>,
    /// `(α, z̃_{f(α)f(β)}, z_{αβ})` for components and marks with different images.
    bubble_anchors: Vec<(BubbleId, Anchor<ExtPoint2>)>,
}

#[derive(Clone, Debug)]
struct Anchor<P> {
    image: P,
    image_f64: Ext2,
    own: Ext2,
}

/// Frames of the source curve in those of the target, either as floats for the optimizer
/// or exact, in which case pullbacks and compositions are rounded only once.
enum Frames<'a> {
    Float { phi: &'a [Affine], psi: &'a [Affine] },
    Exact { phi: &'a SeamMaps, psi: &'a ComponentMaps },
}

impl Frames<'_> {
    fn seam_change(&self, rho: VertexId, sigma: VertexId) -> Affine {
        match self {
            Frames::Float { phi, .. } => phi[sigma].inverse().compose(&phi[rho]),
            Frames::Exact { phi, .. } => Affine::from_reparam1(&phi[&sigma].inverse().compose(&phi[&rho])),
        }
    }

    fn seam_pull(&self, rho: VertexId, a: &Anchor<ExtPoint1>) -> Ext2 {
        match self {
            Frames::Float { phi, .. } => phi[rho].inverse().apply(&a.image_f64),
            Frames::Exact { phi, .. } => ext2_from_line(&phi[&rho].inverse().apply_ext(&a.image)),
        }
    }

    fn bubble_change(&self, a: BubbleId, b: BubbleId) -> Affine {
        match self {
            Frames::Float { psi, .. } => psi[b].inverse().compose(&psi[a]),
            Frames::Exact { psi, .. } => Affine::from_reparam2(&psi[&b].inverse().compose(&psi[&a])),
        }
    }

    fn bubble_pull(&self, alpha: BubbleId, a: &Anchor<ExtPoint2>) -> Ext2 {
        match self {
            Frames::Float { psi, .. } => psi[alpha].inverse().apply(&a.image_f64),
            Frames::Exact { psi, .. } => ext2_from_exact(&psi[&alpha].inverse().apply_ext(&a.image)),
        }
    }
}

impl Terms {
    fn seams(d: &DiskTree, dt: &DiskTree, fs: &RrtSurjection) -> Result<Terms> {
        let ts = d.tree();
        let interior: Vec<VertexId> = ts.interior().collect();
        let mut terms = Terms::default();
        for &rho in &interior {
            for &sigma in interior.iter().filter(|s| **s != rho && fs.apply(**s) == fs.apply(rho)) {
                let to = ext2_from_line(&d.derived_x(rho, SeamTarget::Vertex(sigma))?);
                let back = ext2_from_line(&d.derived_x(sigma, SeamTarget::Vertex(rho))?);
                terms.seam_sups.push((rho, sigma, to, back));
            }
            for sigma in (0..ts.len()).filter(|s| fs.apply(*s) != fs.apply(rho)) {
                let image = dt.derived_x(fs.apply(rho), SeamTarget::Vertex(fs.apply(sigma)))?;
                let own = ext2_from_line(&d.derived_x(rho, SeamTarget::Vertex(sigma))?);
                terms.seam_anchors.push((rho, Anchor { image_f64: ext2_from_line(&image), image, own }));
            }
        }
        Ok(terms)
    }

    fn full(w: &WitchCurve, wt: &WitchCurve, f: &TreePairSurjection) -> Result<Terms> {
        let mut terms = Terms::seams(&w.disk_tree(), &wt.disk_tree(), &f.seam_map)?;
        let pair = w.pair();
        let comps: Vec<BubbleId> = pair.components().collect();
        for &a in &comps {
            for &b in comps.iter().filter(|b| **b != a && f.apply(**b) == f.apply(a)) {
                let to = ext2_from_exact(&w.derived_z(a, BubbleTarget::Vertex(b))?);
                let back = ext2_from_exact(&w.derived_z(b, BubbleTarget::Vertex(a))?);
                terms.bubble_sups.push((a, b, to, back));
            }
            let others = comps.iter().copied().chain(pair.marks());
            for b in others.filter(|b| f.apply(*b) != f.apply(a)) {
                let image = wt.derived_z(f.apply(a), BubbleTarget::Vertex(f.apply(b)))?;
                let own = ext2_from_exact(&w.derived_z(a, BubbleTarget::Vertex(b))?);
                terms.bubble_anchors.push((a, Anchor { image_f64: ext2_from_exact(&image), image, own }));
            }
        }
        Ok(terms)
    }

    fn evaluate(&self, frames: &Frames<'_>, eps: f64) -> f64 {
        let mut total = 0.0;
        for (rho, sigma, to, back) in &self.seam_sups {
            total += sup_outside_ball(&frames.seam_change(*rho, *sigma), to, eps, back, Domain::Line);
        }
        for (rho, anchor) in &self.seam_anchors {
            total += chordal(&frames.seam_pull(*rho, anchor), &anchor.own);
        }
        for (a, b, to, back) in &self.bubble_sups {
            total += sup_outside_ball(&frames.bubble_change(*a, *b), to, eps, back, Domain::Plane);
        }
        for (a, anchor) in &self.bubble_anchors {
            total += chordal(&frames.bubble_pull(*a, anchor), &anchor.own);
        }
        total
    }
}

fn check_seam_maps(d: &DiskTree, phi: &SeamMaps) -> Result<Vec<Affine>> {
    let ts = d.tree();
    let mut out = vec![Affine::IDENTITY; ts.len()];
    for v in ts.interior() {
        let f = phi.get(&v).ok_or_else(|| Error::InvalidCoordinates(format!("no map at vertex {v}")))?;
        if f.a <= Rational::default() {
            return Err(Error::InvalidCoordinates(format!("map at vertex {v} does not preserve orientation")));
        }
        out[v] = Affine::from_reparam1(f);
    }
    Ok(out)
}

/// `ρ_ε` of two disk trees for a given contraction and seam maps.
pub fn rho_eps_with_data(d: &DiskTree, dt: &DiskTree, fs: &RrtSurjection, phi: &SeamMaps, eps: f64) -> Result<f64> {
    check_radius(eps)?;
    if rrt_surjection(d.tree(), dt.tree()).as_ref() != Some(fs) {
        return Err(Error::SurjectionMismatch("not the contraction between these seam trees".into()));
    }
    check_seam_maps(d, phi)?;
    Ok(Terms::seams(d, dt, fs)?.evaluate(&Frames::Exact { phi, psi: &ComponentMaps::new() }, eps))
}

/// A tree-pair surjection with reparametrizations from the frames of the source curve
/// to those of the target curve.
#[derive(Clone, Debug, PartialEq)]
pub struct MuWitness {
    pub surjection: TreePairSurjection,
    pub phi: SeamMaps,
    pub psi: ComponentMaps,
}

fn check_witness(w: &WitchCurve, wt: &WitchCurve, witness: &MuWitness) -> Result<(Vec<Affine>, Vec<Affine>)> {
    let f = &witness.surjection;
    if f.seam_map.source != *w.pair().seam_tree() || f.seam_map.target != *wt.pair().seam_tree() {
        return Err(Error::SurjectionMismatch("seam trees differ from those of the curves".into()));
    }
    if !tree_pair_surjections(w.pair(), wt.pair())?.contains(f) {
        return Err(Error::SurjectionMismatch("not a surjection between these tree-pairs".into()));
    }
    let phi = check_seam_maps(&w.disk_tree(), &witness.phi)?;
    let pair = w.pair();
    let mut psi = vec![Affine::IDENTITY; pair.len()];
    for a in pair.components() {
        let g = witness.psi.get(&a).ok_or_else(|| Error::InvalidCoordinates(format!("no map at component {a}")))?;
        if g.a <= Rational::default() {
            return Err(Error::InvalidCoordinates(format!("map at component {a} does not preserve orientation")));
        }
        if !pair.is_single_seam(a) && g.horizontal() != witness.phi[&pair.label(a)] {
            return Err(Error::ProjectionMismatch(a));
        }
        psi[a] = Affine::from_reparam2(g);
    }
    Ok((phi, psi))
}

/// `μ_ε` evaluated at a given witness.
pub fn mu_eps_with_data(w: &WitchCurve, wt: &WitchCurve, witness: &MuWitness, eps: f64) -> Result<f64> {
    check_radius(eps)?;
    check_witness(w, wt, witness)?;
    let frames = Frames::Exact { phi: &witness.phi, psi: &witness.psi };
    Ok(Terms::full(w, wt, &witness.surjection)?.evaluate(&frames, eps))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MuOptions {
    pub minimizer: NelderMead,
    /// Random restarts around the best start, per surjection.
    pub restarts: usize,
    pub seed: u64,
    /// An extra starting witness, used when its surjection is among the candidates.
    pub start: Option<MuWitness>,
}

impl Default for MuOptions {
    fn default() -> Self {
        MuOptions { minimizer: NelderMead::default(), restarts: 6, seed: 0, start: None }
    }
}

/// Best value found and the witness attaining it; `None` when no surjection exists,
/// in which case the value is infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct MuEstimate {
    pub value: f64,
    pub witness: Option<MuWitness>,
}

/// Least-squares `a, b` with `a z + b ≈ z̃` over the given pairs.
fn fit(pairs: &[([f64; 2], [f64; 2])]) -> Option<Affine> {
    let k = pairs.len() as f64;
    if pairs.is_empty() {
        return None;
    }
    let mean = |sel: fn(&([f64; 2], [f64; 2])) -> [f64; 2]| {
        let s = pairs.iter().map(sel).fold([0.0, 0.0], |s, p| [s[0] + p[0], s[1] + p[1]]);
        [s[0] / k, s[1] / k]
    };
    let (zm, tm) = (mean(|p| p.0), mean(|p| p.1));
    let (mut num, mut den) = (0.0, 0.0);
    for (z, t) in pairs {
        let dz = [z[0] - zm[0], z[1] - zm[1]];
        num += dz[0] * (t[0] - tm[0]) + dz[1] * (t[1] - tm[1]);
        den += dz[0] * dz[0] + dz[1] * dz[1];
    }
    let a = if den > 0.0 && num > 0.0 { num / den } else { 1.0 };
    let out = Affine { a, b: [tm[0] - a * zm[0], tm[1] - a * zm[1]] };
    (out.a.is_finite() && out.b.iter().all(|v| v.is_finite())).then_some(out)
}

fn finite_pairs<K: Copy + Eq, P>(anchors: &[(K, Anchor<P>)], key: K) -> Vec<([f64; 2], [f64; 2])> {
    anchors
        .iter()
        .filter(|(k, _)| *k == key)
        .filter_map(|(_, a)| match (&a.own, &a.image_f64) {
            (Extended::Finite(z), Extended::Finite(t)) => Some((*z, *t)),
            _ => None,
        })
        .collect()
}

/// Optimization coordinates: per interior vertex `(log a, b)`, per multi-seam component the
/// height of its centre, per single-seam component `(log a, b_x, b_y)`, all relative to a
/// reference witness and measured in units of its scale.
struct Layout {
    seams: Vec<VertexId>,
    comps: Vec<(BubbleId, Option<VertexId>)>,
    phi0: Vec<Affine>,
    psi0: Vec<Affine>,
}

impl Layout {
    fn dim(&self) -> usize {
        2 * self.seams.len() + self.comps.iter().map(|(_, l)| if l.is_some() { 1 } else { 3 }).sum::<usize>()
    }

    fn decode(&self, theta: &[f64]) -> (Vec<Affine>, Vec<Affine>) {
        let mut phi = self.phi0.clone();
        let mut psi = self.psi0.clone();
        let mut k = 0;
        for &v in &self.seams {
            let r = self.phi0[v];
            phi[v] = Affine { a: r.a * libm::exp(theta[k]), b: [r.b[0] + r.a * theta[k + 1], 0.0] };
            k += 2;
        }
        for &(a, label) in &self.comps {
            let r = self.psi0[a];
            psi[a] = match label {
                Some(v) => {
                    let k0 = k;
                    k += 1;
                    Affine { a: phi[v].a, b: [phi[v].b[0], r.b[1] + self.phi0[v].a * theta[k0]] }
                }
                None => {
                    k += 3;
                    Affine {
                        a: r.a * libm::exp(theta[k - 3]),
                        b: [r.b[0] + r.a * theta[k - 2], r.b[1] + r.a * theta[k - 1]],
                    }
                }
            };
        }
        (phi, psi)
    }

    fn encode(&self, phi: &[Affine], psi: &[Affine]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for &v in &self.seams {
            let r = self.phi0[v];
            out.push(libm::log(phi[v].a / r.a));
            out.push((phi[v].b[0] - r.b[0]) / r.a);
        }
        for &(a, label) in &self.comps {
            let r = self.psi0[a];
            match label {
                Some(v) => out.push((psi[a].b[1] - r.b[1]) / self.phi0[v].a),
                None => {
                    out.push(libm::log(psi[a].a / r.a));
                    out.push((psi[a].b[0] - r.b[0]) / r.a);
                    out.push((psi[a].b[1] - r.b[1]) / r.a);
                }
            }
        }
        out
    }

    /// Exact witness maps from floating ones; multi-seam components are rebuilt over
    /// their vertex so that the restriction condition holds exactly.
    fn exact(&self, w: &WitchCurve, phi: &[Affine], psi: &[Affine]) -> Option<(SeamMaps, ComponentMaps)> {
        let q = |v: f64| from_f64(v);
        let mut seam = SeamMaps::new();
        for &v in &self.seams {
            seam.insert(v, Reparam1::new(q(phi[v].a)?, q(phi[v].b[0])?).ok()?);
        }
        let mut comp = ComponentMaps::new();
        for &(a, label) in &self.comps {
            let g = match label {
                Some(v) => Reparam2::over(&seam[&v], q(psi[a].b[1])?),
                None => Reparam2::new(q(psi[a].a)?, Point2::new(q(psi[a].b[0])?, q(psi[a].b[1])?)).ok()?,
            };
            comp.insert(a, g);
        }
        debug_assert_eq!(comp.len(), w.pair().component_count());
        Some((seam, comp))
    }
}

fn fitted_reference(w: &WitchCurve, terms: &Terms) -> (Vec<Affine>, Vec<Affine>) {
    let pair = w.pair();
    let ts = pair.seam_tree();
    let mut phi = vec![Affine::IDENTITY; ts.len()];
    for v in ts.interior() {
        if let Some(f) = fit(&finite_pairs(&terms.seam_anchors, v)) {
            phi[v] = Affine { a: f.a, b: [f.b[0], 0.0] };
        }
    }
    let mut psi = vec![Affine::IDENTITY; pair.len()];
    for a in pair.components() {
        let pairs = finite_pairs(&terms.bubble_anchors, a);
        psi[a] = if pair.is_single_seam(a) {
            fit(&pairs).unwrap_or(Affine::IDENTITY)
        } else {
            let h = phi[pair.label(a)];
            let by = if pairs.is_empty() {
                0.0
            } else {
                pairs.iter().map(|(z, t)| t[1] - h.a * z[1]).sum::<f64>() / pairs.len() as f64
            };
            Affine { a: h.a, b: [h.b[0], by] }
        };
    }
    (phi, psi)
}

/// Approximate `inf μ_ε(W, W̃)` over surjections and reparametrizations by multi-start
/// Nelder–Mead. Infinite when `W` does not degenerate to `W̃`.
pub fn mu_eps(w: &WitchCurve, wt: &WitchCurve, eps: f64, options: &MuOptions) -> Result<MuEstimate> {
    check_radius(eps)?;
    let mut best = MuEstimate { value: f64::INFINITY, witness: None };
    let pair = w.pair();
    let seams: Vec<VertexId> = pair.seam_tree().interior().collect();
    let comps: Vec<(BubbleId, Option<VertexId>)> = pair
        .components()
        .map(|a| (a, (!pair.is_single_seam(a)).then(|| pair.label(a))))
        .collect();
    for (index, f) in tree_pair_surjections(pair, wt.pair())?.into_iter().enumerate() {
        let terms = Terms::full(w, wt, &f)?;
        let (phi0, psi0) = fitted_reference(w, &terms);
        let layout = Layout { seams: seams.clone(), comps: comps.clone(), phi0, psi0 };
        let mut seeds = vec![vec![0.0; layout.dim()]];
        let identity_psi: Vec<Affine> = vec![Affine::IDENTITY; pair.len()];
        seeds.push(layout.encode(&vec![Affine::IDENTITY; pair.seam_tree().len()], &identity_psi));
        if let Some(start) = options.start.as_ref().filter(|s| s.surjection == f) {
            let (phi, psi) = check_witness(w, wt, start)?;
            seeds.push(layout.encode(&phi, &psi));
        }
        seeds.retain(|s| s.iter().all(|v| v.is_finite()));
        let mut objective = |theta: &[f64]| {
            let (phi, psi) = layout.decode(theta);
            terms.evaluate(&Frames::Float { phi: &phi, psi: &psi }, eps)
        };
        let found = multistart(
            &options.minimizer,
            &mut objective,
            &seeds,
            options.restarts,
            1.0,
            options.seed.wrapping_add(index as u64),
        );
        let (phi, psi) = layout.decode(&found.x);
        let Some((seam, comp)) = layout.exact(w, &phi, &psi) else { continue };
        let witness = MuWitness { surjection: f, phi: seam, psi: comp };
        let value = mu_eps_with_data(w, wt, &witness, eps)?;
        if value < best.value {
            best = MuEstimate { value, witness: Some(witness) };
        }
    }
    Ok(best)
}

/// The curve of `family` at parameter `t`, with the witness read off the limit families.
pub fn family_witness(limit: &GromovLimit, family: &SmoothFamily, t: &Rational) -> Result<(WitchCurve, MuWitness)> {
    let wt = family.at(t)?;
    let surjection = tree_pair_surjections(limit.pair(), wt.pair())?
        .into_iter()
        .next()
        .ok_or(Error::SurjectionNotFound)?;
    let phi = limit.phi.iter().map(|(v, f)| Ok((*v, f.at(t)?))).collect::<Result<SeamMaps>>()?;
    let psi = limit.psi.iter().map(|(a, f)| Ok((*a, f.at(t)?))).collect::<Result<ComponentMaps>>()?;
    Ok((wt, MuWitness { surjection, phi, psi }))
}

#[cfg(test)]
mod tests;
