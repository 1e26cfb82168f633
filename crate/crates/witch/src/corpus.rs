//! Seeded random Laurent families, new points and gauges for corpus-scale testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use witch_core::laurent::Laurent;
use witch_core::limits::{PointKey, Reparam2Family, SmoothFamily};
use witch_core::number::{int, Rational};

/// Bounds on the generated families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusShape {
    pub max_seams: usize,
    pub max_points: usize,
}

impl Default for CorpusShape {
    fn default() -> Self {
        CorpusShape { max_seams: 3, max_points: 4 }
    }
}

pub struct Corpus {
    rng: ChaCha8Rng,
    shape: CorpusShape,
}

impl Corpus {
    pub fn new(seed: u64, shape: CorpusShape) -> Self {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed), shape }
    }

    fn coefficient(&mut self, lo: i64, hi: i64) -> Rational {
        int(self.rng.gen_range(lo..=hi))
    }

    /// Up to two terms with exponents in `lo..=3`; may be zero.
    pub fn laurent(&mut self, lo: i32) -> Laurent {
        let k = self.rng.gen_range(0..=2);
        let terms: Vec<(i32, Rational)> = (0..k).map(|_| (self.rng.gen_range(lo..=3), self.coefficient(-2, 2))).collect();
        Laurent::from_terms(terms)
    }

    /// An eventually positive step `c t^e + c' t^(e+d)`.
    fn step(&mut self) -> Laurent {
        let e = self.rng.gen_range(0..=3);
        let d = self.rng.gen_range(1..=2);
        Laurent::from_terms([(e, self.coefficient(1, 3)), (e + d, self.coefficient(-2, 2))])
    }

    fn increasing(&mut self, len: usize, lo: i32) -> Vec<Laurent> {
        let mut out: Vec<Laurent> = Vec::with_capacity(len);
        if len > 0 {
            out.push(self.laurent(lo));
        }
        while out.len() < len {
            let next = out.last().unwrap() + &self.step();
            out.push(next);
        }
        out
    }

    pub fn family(&mut self) -> SmoothFamily {
        loop {
            let r = self.rng.gen_range(1..=self.shape.max_seams);
            let n: Vec<usize> = (0..r).map(|_| self.rng.gen_range(0..=self.shape.max_points.min(2))).collect();
            let total: usize = n.iter().sum();
            if total == 0 || total > self.shape.max_points {
                continue;
            }
            let x = self.increasing(r, 0);
            let mut y: Vec<Vec<Laurent>> = n.iter().map(|k| self.increasing(*k, -1)).collect();
            // Copy heights across seams now and then so that ties occur.
            if r >= 2 && !y[0].is_empty() && !y[1].is_empty() && self.rng.gen_bool(0.5) {
                y[1][0] = y[0][0].clone();
                y[1].sort_by(|a, b| a.cmp_eventually(b));
                y[1].dedup();
            }
            if let Ok(f) = SmoothFamily::new(x, y) {
                return f;
            }
        }
    }

    /// A new point on a random seam of `family`, or off every seam when `off_seam`.
    pub fn new_point(&mut self, family: &SmoothFamily, off_seam: bool) -> (usize, Laurent, Laurent) {
        let seam = self.rng.gen_range(0..family.seam_count());
        let mut zx = family.x()[seam].clone();
        if off_seam {
            zx = &zx + &Laurent::constant(self.coefficient(1, 2));
        }
        let zy = match family.y()[seam].choose(&mut self.rng) {
            // Perturb an existing height so that collisions at every scale are exercised.
            Some(y) if self.rng.gen_bool(0.7) => y + &self.laurent(0),
            _ => self.laurent(-1),
        };
        (seam, zx, zy)
    }

    pub fn gauge(&mut self) -> Reparam2Family {
        let a = self.step();
        let (bx, by) = (self.laurent(-1), self.laurent(-1));
        Reparam2Family::new(a, bx, by).expect("steps are eventually positive")
    }

    /// A random order of the points of `family`, used to break ties.
    pub fn tie_order(&mut self, family: &SmoothFamily) -> Vec<PointKey> {
        let mut keys: Vec<PointKey> = family.keys().collect();
        keys.shuffle(&mut self.rng);
        keys
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_respect_the_shape() {
        let mut c = Corpus::new(3, CorpusShape::default());
        for _ in 0..200 {
            let f = c.family();
            assert!((1..=3).contains(&f.seam_count()));
            assert!((1..=4).contains(&f.point_count()));
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let mut a = Corpus::new(11, CorpusShape::default());
        let mut b = Corpus::new(11, CorpusShape::default());
        for _ in 0..20 {
            assert_eq!(a.family(), b.family());
        }
    }
}
