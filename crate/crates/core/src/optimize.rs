//! Derivative-free local minimization (Nelder–Mead) with seeded random restarts.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Clone, Debug, PartialEq)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Stop once the spread of simplex values drops below this.
    pub f_tol: f64,
    /// Initial simplex edge length.
    pub step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead { max_evals: 4000, f_tol: 1e-13, step: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

fn finite_or_max(v: f64) -> f64 {
    if v.is_nan() {
        f64::MAX
    } else {
        v
    }
}

impl NelderMead {
    pub fn minimize(&self, f: &mut impl FnMut(&[f64]) -> f64, start: &[f64]) -> Minimum {
        let n = start.len();
        let mut evals = 0;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            finite_or_max(f(x))
        };
        if n == 0 {
            let value = eval(start, &mut evals);
            return Minimum { x: Vec::new(), value, evals };
        }
        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((start.to_vec(), eval(start, &mut evals)));
        for i in 0..n {
            let mut x = start.to_vec();
            x[i] += self.step;
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }
        while evals < self.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            if (worst - best).abs() <= self.f_tol * (1.0 + best.abs()) {
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (w - c)).collect()
            };
            let xr = along(-alpha);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(-gamma);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < worst {
                    let xc = along(-rho);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(rho);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < worst.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for (x, v) in simplex.iter_mut().skip(1) {
                        for (xi, bi) in x.iter_mut().zip(&x0) {
                            *xi = bi + sigma * (*xi - bi);
                        }
                        *v = eval(x, &mut evals);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum { x, value, evals }
    }
}

/// Standard normal samples by the Box–Muller transform.
pub struct Gaussian {
    rng: ChaCha8Rng,
}

impl Gaussian {
    pub fn new(seed: u64) -> Self {
        Gaussian { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn sample(&mut self) -> f64 {
        let (u, v) = (self.uniform(), self.uniform());
        libm::sqrt(-2.0 * libm::log(u)) * libm::cos(core::f64::consts::TAU * v)
    }
}

/// Runs `minimizer` from every seed and from `restarts` perturbations of the best seed,
/// then polishes the winner once more.
pub fn multistart(
    minimizer: &NelderMead,
    f: &mut impl FnMut(&[f64]) -> f64,
    seeds: &[Vec<f64>],
    restarts: usize,
    spread: f64,
    seed: u64,
) -> Minimum {
    assert!(!seeds.is_empty(), "at least one seed is required");
    let mut best: Option<Minimum> = None;
    let mut evals = 0;
    let mut consider = |m: Minimum, best: &mut Option<Minimum>| {
        evals += m.evals;
        if best.as_ref().is_none_or(|b| m.value < b.value) {
            *best = Some(m);
        }
    };
    for s in seeds {
        consider(minimizer.minimize(f, s), &mut best);
    }
    let mut noise = Gaussian::new(seed);
    for _ in 0..restarts {
        let centre = best.as_ref().unwrap().x.clone();
        let start: Vec<f64> = centre.iter().map(|c| c + spread * noise.sample()).collect();
        consider(minimizer.minimize(f, &start), &mut best);
    }
    let winner = best.unwrap();
    let polished = minimizer.minimize(f, &winner.x);
    let mut out = if polished.value < winner.value { polished } else { winner };
    out.evals = evals;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = NelderMead { max_evals: 20000, ..Default::default() }.minimize(&mut f, &[-1.2, 1.0]);
        assert!(m.value < 1e-9, "{m:?}");
        assert!((m.x[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn restarts_escape_a_local_minimum() {
        // Double well with the deeper minimum at x = 2.
        let mut f = |x: &[f64]| (x[0] * x[0] - 4.0).powi(2) * 0.1 + (x[0] - 2.0).powi(2) * 0.01 - 0.0;
        let m = multistart(&NelderMead::default(), &mut f, &[vec![-2.0]], 20, 3.0, 7);
        assert!((m.x[0] - 2.0).abs() < 1e-4, "{m:?}");
    }

    #[test]
    fn gaussian_moments() {
        let mut g = Gaussian::new(1);
        let xs: Vec<f64> = (0..20000).map(|_| g.sample()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.03 && (var - 1.0).abs() < 0.05);
    }
}
