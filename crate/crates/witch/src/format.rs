//! JSON file formats.
//!
//! Rationals are `"p/q"` strings, the point at infinity is `"inf"`, and a Laurent
//! polynomial is a list of `[exponent, "p/q"]` terms. Seam trees are written in their
//! parenthesis encoding, whose pre-order numbering the vertex labels refer to.
//! Bubble-tree ids in curves, limits and witnesses use the canonical pre-order numbering
//! that this module emits; files with other ids are renumbered on reading.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use witch_core::laurent::Laurent;
use witch_core::limits::{ConvergenceReport, GromovLimit, NewPointCase, NewPointClassification, Reparam1Family, Reparam2Family, SmoothFamily};
use witch_core::metric::MuWitness;
use witch_core::moduli::{ComponentCoords, ComponentMaps, Reparam1, Reparam2, SeamMaps, WitchCurve};
use witch_core::number::{format_rational, parse_rational, ExtPoint2, Extended, Point2, Rational};
use witch_core::treepair::{BubbleId, BubbleKind, RawBubbleVertex, RawTreePair, TreePair, TreePairSurjection};
use witch_core::trees::{Rrt, RrtSurjection, VertexId};

use crate::error::{bad, Result};

pub fn rational(q: &Rational) -> String {
    format_rational(q)
}

pub fn read_rational(s: &str) -> Result<Rational> {
    Ok(parse_rational(s)?)
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational).collect()
}

fn read_rationals(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| read_rational(s)).collect()
}

/// `"inf"` or `["x", "y"]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDoc {
    Finite([String; 2]),
    Infinite(String),
}

impl PointDoc {
    pub fn from_point(p: &ExtPoint2) -> PointDoc {
        match p {
            Extended::Finite(p) => PointDoc::Finite([rational(&p.x), rational(&p.y)]),
            Extended::Infinity => PointDoc::Infinite("inf".into()),
        }
    }

    pub fn to_point(&self) -> Result<ExtPoint2> {
        match self {
            PointDoc::Finite([x, y]) => Ok(Extended::Finite(Point2::new(read_rational(x)?, read_rational(y)?))),
            PointDoc::Infinite(s) if s == "inf" => Ok(Extended::Infinity),
            PointDoc::Infinite(s) => Err(bad(format!("expected \"inf\" or a pair, got {s:?}"))),
        }
    }
}

/// `[[exponent, "p/q"], ...]` in increasing exponent order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentDoc(pub Vec<(i32, String)>);

impl LaurentDoc {
    pub fn from_laurent(f: &Laurent) -> LaurentDoc {
        LaurentDoc(f.terms().map(|(e, c)| (e, rational(c))).collect())
    }

    pub fn to_laurent(&self) -> Result<Laurent> {
        let terms = self.0.iter().map(|(e, c)| Ok((*e, read_rational(c)?))).collect::<Result<Vec<_>>>()?;
        Ok(Laurent::from_terms(terms))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub x: Vec<LaurentDoc>,
    pub y: Vec<Vec<LaurentDoc>>,
}

impl FamilyDoc {
    pub fn from_family(f: &SmoothFamily) -> FamilyDoc {
        FamilyDoc {
            x: f.x().iter().map(LaurentDoc::from_laurent).collect(),
            y: f.y().iter().map(|ys| ys.iter().map(LaurentDoc::from_laurent).collect()).collect(),
        }
    }

    pub fn to_family(&self) -> Result<SmoothFamily> {
        let x = self.x.iter().map(LaurentDoc::to_laurent).collect::<Result<_>>()?;
        let y = self
            .y
            .iter()
            .map(|ys| ys.iter().map(LaurentDoc::to_laurent).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Ok(SmoothFamily::new(x, y)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KindDoc {
    Component,
    Seam,
    Mark { seam: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: u64,
    #[serde(flatten)]
    pub kind: KindDoc,
    /// Incoming neighbours, in order.
    pub incoming: Vec<u64>,
}

/// A tree-pair: bubble-tree vertices with ordered adjacency, and `pi` sending each
/// bubble-tree vertex to its seam-tree vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreePairDoc {
    #[serde(rename = "type")]
    pub type_vector: Vec<usize>,
    pub seam_tree: String,
    pub root: u64,
    pub vertices: Vec<VertexDoc>,
    pub pi: BTreeMap<u64, VertexId>,
}

impl TreePairDoc {
    pub fn from_pair(p: &TreePair) -> TreePairDoc {
        let raw = p.to_raw();
        TreePairDoc {
            type_vector: raw.type_vector.clone(),
            seam_tree: raw.seam_tree.encoding(),
            root: raw.root,
            vertices: raw
                .vertices
                .iter()
                .map(|v| VertexDoc {
                    id: v.id,
                    kind: match v.kind {
                        BubbleKind::Component => KindDoc::Component,
                        BubbleKind::Seam => KindDoc::Seam,
                        BubbleKind::Mark { seam, index } => KindDoc::Mark { seam, index },
                    },
                    incoming: v.incoming.clone(),
                })
                .collect(),
            pi: raw.vertices.iter().map(|v| (v.id, v.label)).collect(),
        }
    }

    /// The validated pair and the canonical id of every id used in the file.
    pub fn to_pair(&self) -> Result<(TreePair, BTreeMap<u64, BubbleId>)> {
        let seam_tree = Rrt::parse(&self.seam_tree)?;
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let label = *self.pi.get(&v.id).ok_or_else(|| bad(format!("pi has no entry for vertex {}", v.id)))?;
            let kind = match v.kind {
                KindDoc::Component => BubbleKind::Component,
                KindDoc::Seam => BubbleKind::Seam,
                KindDoc::Mark { seam, index } => BubbleKind::Mark { seam, index },
            };
            vertices.push(RawBubbleVertex { id: v.id, kind, incoming: v.incoming.clone(), label });
        }
        if self.pi.len() != self.vertices.len() {
            return Err(bad("pi has entries for unknown vertices"));
        }
        let raw = RawTreePair { seam_tree, root: self.root, vertices, type_vector: self.type_vector.clone() };
        let pair = TreePair::validate(&raw)?;
        // Validation numbers vertices in pre-order of the file's adjacency.
        let incoming: BTreeMap<u64, &Vec<u64>> = self.vertices.iter().map(|v| (v.id, &v.incoming)).collect();
        let mut ids = BTreeMap::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            ids.insert(v, ids.len());
            stack.extend(incoming[&v].iter().rev());
        }
        Ok((pair, ids))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordsDoc {
    pub x: Vec<String>,
    pub y: Vec<Vec<String>>,
}

/// A witch curve: its tree-pair, the abscissas at each interior seam-tree vertex, and
/// the special points of each component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub tree_pair: TreePairDoc,
    pub x: BTreeMap<VertexId, Vec<String>>,
    pub z: BTreeMap<u64, CoordsDoc>,
}

impl CurveDoc {
    pub fn from_curve(w: &WitchCurve) -> CurveDoc {
        CurveDoc {
            tree_pair: TreePairDoc::from_pair(w.pair()),
            x: w.x().iter().map(|(v, xs)| (*v, rationals(xs))).collect(),
            z: w
                .z()
                .iter()
                .map(|(a, c)| {
                    let y = c.y.iter().map(|ys| rationals(ys)).collect();
                    (*a as u64, CoordsDoc { x: rationals(&c.x), y })
                })
                .collect(),
        }
    }

    pub fn to_curve(&self) -> Result<WitchCurve> {
        let (pair, ids) = self.tree_pair.to_pair()?;
        let x = self.x.iter().map(|(v, xs)| Ok((*v, read_rationals(xs)?))).collect::<Result<_>>()?;
        let mut z = BTreeMap::new();
        for (a, c) in &self.z {
            let id = *ids.get(a).ok_or_else(|| bad(format!("coordinates for unknown vertex {a}")))?;
            let y = c.y.iter().map(|ys| read_rationals(ys)).collect::<Result<_>>()?;
            z.insert(id, ComponentCoords { x: read_rationals(&c.x)?, y });
        }
        Ok(WitchCurve::new(pair, x, z)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Map1Doc<T> {
    pub a: T,
    pub b: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Map2Doc<T> {
    pub a: T,
    pub bx: T,
    pub by: T,
}

/// A Gromov limit: the limiting curve and the reparametrization families realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitDoc {
    pub curve: CurveDoc,
    pub phi: BTreeMap<VertexId, Map1Doc<LaurentDoc>>,
    pub psi: BTreeMap<BubbleId, Map2Doc<LaurentDoc>>,
}

impl LimitDoc {
    pub fn from_limit(l: &GromovLimit) -> LimitDoc {
        let lau = LaurentDoc::from_laurent;
        LimitDoc {
            curve: CurveDoc::from_curve(&l.curve),
            phi: l.phi.iter().map(|(v, f)| (*v, Map1Doc { a: lau(&f.a), b: lau(&f.b) })).collect(),
            psi: l
                .psi
                .iter()
                .map(|(a, f)| (*a, Map2Doc { a: lau(&f.a), bx: lau(&f.bx), by: lau(&f.by) }))
                .collect(),
        }
    }

    /// Family ids are canonical; the curve section must therefore be canonically numbered too.
    pub fn to_limit(&self) -> Result<GromovLimit> {
        let curve = self.curve.to_curve()?;
        if CurveDoc::from_curve(&curve).tree_pair != self.curve.tree_pair {
            return Err(bad("a limit file must use canonical vertex numbering"));
        }
        let phi = self
            .phi
            .iter()
            .map(|(v, f)| Ok((*v, Reparam1Family::new(f.a.to_laurent()?, f.b.to_laurent()?)?)))
            .collect::<Result<_>>()?;
        let psi = self
            .psi
            .iter()
            .map(|(a, f)| Ok((*a, Reparam2Family::new(f.a.to_laurent()?, f.bx.to_laurent()?, f.by.to_laurent()?)?)))
            .collect::<Result<_>>()?;
        Ok(GromovLimit { curve, phi, psi })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurjectionDoc {
    /// Image of each source seam-tree vertex.
    pub seam_map: Vec<VertexId>,
    /// Image of each source bubble-tree vertex.
    pub bubble_map: Vec<BubbleId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub surjection: SurjectionDoc,
    pub phi: BTreeMap<VertexId, Map1Doc<String>>,
    pub psi: BTreeMap<BubbleId, Map2Doc<String>>,
}

impl WitnessDoc {
    pub fn from_witness(w: &MuWitness) -> WitnessDoc {
        WitnessDoc {
            surjection: SurjectionDoc {
                seam_map: w.surjection.seam_map.vertex_map.clone(),
                bubble_map: w.surjection.bubble_map.clone(),
            },
            phi: w.phi.iter().map(|(v, f)| (*v, Map1Doc { a: rational(&f.a), b: rational(&f.b) })).collect(),
            psi: w
                .psi
                .iter()
                .map(|(a, f)| (*a, Map2Doc { a: rational(&f.a), bx: rational(&f.b.x), by: rational(&f.b.y) }))
                .collect(),
        }
    }

    /// Reads a witness between `source` and `target`; ids are canonical.
    pub fn to_witness(&self, source: &TreePair, target: &TreePair) -> Result<MuWitness> {
        let seam_map = RrtSurjection {
            source: source.seam_tree().clone(),
            target: target.seam_tree().clone(),
            vertex_map: self.surjection.seam_map.clone(),
        };
        let surjection = TreePairSurjection { seam_map, bubble_map: self.surjection.bubble_map.clone() };
        let phi: SeamMaps = self
            .phi
            .iter()
            .map(|(v, f)| Ok((*v, Reparam1::new(read_rational(&f.a)?, read_rational(&f.b)?)?)))
            .collect::<Result<_>>()?;
        let psi: ComponentMaps = self
            .psi
            .iter()
            .map(|(a, f)| {
                let b = Point2::new(read_rational(&f.bx)?, read_rational(&f.by)?);
                Ok((*a, Reparam2::new(read_rational(&f.a)?, b)?))
            })
            .collect::<Result<_>>()?;
        Ok(MuWitness { surjection, phi, psi })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomDoc {
    pub axiom: String,
    pub checked: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub all_passed: bool,
    pub axioms: Vec<AxiomDoc>,
}

impl ReportDoc {
    pub fn from_report(r: &ConvergenceReport) -> ReportDoc {
        ReportDoc {
            all_passed: r.all_passed(),
            axioms: r
                .axioms()
                .iter()
                .map(|(name, a)| AxiomDoc {
                    axiom: (*name).into(),
                    checked: a.checked,
                    passed: a.passed(),
                    failures: a.failures.clone(),
                })
                .collect(),
        }
    }
}

/// A new point given either by its abscissa or by the seam it lies on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    OnSeam { seam: usize, y: LaurentDoc },
    Free { x: LaurentDoc, y: LaurentDoc },
}

impl PointSpec {
    pub fn resolve(&self, family: &SmoothFamily) -> Result<(Laurent, Laurent)> {
        match self {
            PointSpec::OnSeam { seam, y } => {
                let x = family.x().get(*seam).ok_or_else(|| bad(format!("no seam {seam}")))?;
                Ok((x.clone(), y.to_laurent()?))
            }
            PointSpec::Free { x, y } => Ok((x.to_laurent()?, y.to_laurent()?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationDoc {
    pub case: String,
    /// Components and marks named by the case, in order.
    pub vertices: Vec<BubbleId>,
    pub limits: BTreeMap<BubbleId, PointDoc>,
}

impl ClassificationDoc {
    pub fn from_classification(c: &NewPointClassification) -> ClassificationDoc {
        let vertices = match &c.case {
            NewPointCase::Free { component } => vec![*component],
            NewPointCase::AtMark { component, mark } => vec![*component, *mark],
            NewPointCase::BelowRoot => vec![],
            NewPointCase::InNeck { lower, upper } => vec![*lower, *upper],
        };
        ClassificationDoc {
            case: c.case.tag().into(),
            vertices,
            limits: c.limits.iter().map(|(a, p)| (*a, PointDoc::from_point(p))).collect(),
        }
    }
}

/// Serializes with two-space indentation and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use witch_core::limits::gromov_limit;
    use witch_core::number::{int, rat};

    fn nested() -> SmoothFamily {
        let l = |terms: &[(i32, i64)]| Laurent::from_terms(terms.iter().map(|(e, c)| (*e, int(*c))));
        SmoothFamily::new(
            vec![l(&[]), l(&[(2, 1)]), l(&[(2, 1), (4, 1)]), l(&[(2, 1), (3, 1)]), l(&[(0, 1)])],
            vec![vec![l(&[])], vec![], vec![], vec![l(&[(1, 1)])], vec![]],
        )
        .unwrap()
    }

    #[test]
    fn laurent_terms_round_trip() {
        let f = Laurent::from_terms([(-1, rat(3, 4)), (2, int(-5))]);
        let doc = LaurentDoc::from_laurent(&f);
        assert_eq!(serde_json::to_string(&doc).unwrap(), r#"[[-1,"3/4"],[2,"-5/1"]]"#);
        assert_eq!(doc.to_laurent().unwrap(), f);
    }

    #[test]
    fn points() {
        let inf: PointDoc = serde_json::from_str(r#""inf""#).unwrap();
        assert_eq!(inf.to_point().unwrap(), Extended::Infinity);
        let p: PointDoc = serde_json::from_str(r#"["1/2", "3"]"#).unwrap();
        assert_eq!(p.to_point().unwrap(), Extended::Finite(Point2::new(rat(1, 2), int(3))));
        let nope: PointDoc = serde_json::from_str(r#""infinity""#).unwrap();
        assert!(nope.to_point().is_err());
    }

    #[test]
    fn limit_round_trip_is_byte_stable() {
        let lim = gromov_limit(&nested()).unwrap();
        let text = to_json(&LimitDoc::from_limit(&lim)).unwrap();
        let back: LimitDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_limit().unwrap(), lim);
        assert_eq!(to_json(&back).unwrap(), text);
    }

    #[test]
    fn renumbered_files_are_read_canonically() {
        let lim = gromov_limit(&nested()).unwrap();
        let mut doc = CurveDoc::from_curve(&lim.curve);
        let shift = |id: u64| id * 10 + 7;
        for v in &mut doc.tree_pair.vertices {
            v.id = shift(v.id);
            v.incoming = v.incoming.iter().map(|c| shift(*c)).collect();
        }
        doc.tree_pair.root = shift(doc.tree_pair.root);
        doc.tree_pair.pi = doc.tree_pair.pi.iter().map(|(k, v)| (shift(*k), *v)).collect();
        doc.z = doc.z.iter().map(|(k, c)| (shift(*k), c.clone())).collect();
        doc.tree_pair.vertices.reverse();
        assert_eq!(doc.to_curve().unwrap(), lim.curve);
    }

    #[test]
    fn invalid_pairs_are_rejected() {
        let pair = TreePair::smooth(&[2, 1]);
        let mut doc = TreePairDoc::from_pair(&pair);
        doc.pi.remove(&0);
        assert!(doc.to_pair().is_err());
        let mut doc = TreePairDoc::from_pair(&pair);
        doc.type_vector = vec![1, 1];
        assert!(doc.to_pair().is_err());
    }
}
