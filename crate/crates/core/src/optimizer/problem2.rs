use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::nelder_mead::{self, Options};
use super::OptimizationResult;
use crate::error::{Error, Result};

pub const DEFAULT_DIM: usize = 6;
pub const MAX_DIM: usize = 12;
const TINY: f64 = 1e-12;

/// A feasible Problem 2 point. The accepting subspace is spanned by the first
/// `accept_dim` coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Problem2Point {
    pub accept_dim: usize,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    pub v3: Vec<f64>,
    pub pa1: f64,
    pub pr1: f64,
    pub pa2: f64,
    pub pr2: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_sqr(a: &[f64]) -> f64 {
    dot(a, a)
}

fn unit(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm_sqr(a).sqrt();
    (n > TINY).then(|| a.iter().map(|x| x / n).collect())
}

fn axpy(t: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| t * xi + yi).collect()
}

fn accept_norm_sqr(x: &[f64], accept_dim: usize) -> f64 {
    norm_sqr(&x[..accept_dim.min(x.len())])
}

impl Problem2Point {
    pub fn s(&self) -> Vec<f64> {
        axpy(1.0, &axpy(1.0, &self.v1, &self.v2), &self.v3)
    }

    /// Sets the four probabilities to the best split for the current vectors.
    fn optimize_probabilities(&mut self) {
        let w = axpy(1.0, &self.v1, &self.v2);
        let a = accept_norm_sqr(&w, self.accept_dim);
        let b = 1.0 - accept_norm_sqr(&self.v1, self.accept_dim);
        let n3 = norm_sqr(&self.v3);
        self.pa1 = ((b - a) / 2.0).clamp(0.0, n3);
        self.pr1 = n3 - self.pa1;
        self.pa2 = 0.0;
        self.pr2 = norm_sqr(&self.v2);
    }
}

/// Maps unconstrained parameters `θ = [s; w; z]` (each of length `dim`) onto
/// the feasible set: `s` fixes the unit vector `v1 + v2 + v3`, `w` the
/// direction of `v3` and `z` (projected off `s`) the direction of `v2`.
/// Probabilities are set to their optimal split.
pub fn problem2_point(dim: usize, accept_dim: usize, theta: &[f64]) -> Problem2Point {
    assert_eq!(theta.len(), 3 * dim, "θ must hold three vectors");
    let (raw_s, rest) = theta.split_at(dim);
    let (raw_w, raw_z) = rest.split_at(dim);
    let s = unit(raw_s).unwrap_or_else(|| {
        let mut e = vec![0.0; dim];
        e[0] = 1.0;
        e
    });
    let v3 = match unit(raw_w) {
        Some(w) => w.iter().map(|x| x * dot(&s, &w)).collect(),
        None => vec![0.0; dim],
    };
    let u = axpy(-1.0, &v3, &s);
    let z_perp = axpy(-dot(raw_z, &s), &s, raw_z);
    let v2 = match unit(&z_perp) {
        Some(z) => z.iter().map(|x| x * dot(&u, &z)).collect(),
        None => vec![0.0; dim],
    };
    let v1 = axpy(-1.0, &v2, &u);
    let mut pt = Problem2Point {
        accept_dim,
        v1,
        v2,
        v3,
        pa1: 0.0,
        pr1: 0.0,
        pa2: 0.0,
        pr2: 0.0,
    };
    pt.optimize_probabilities();
    pt
}

/// Objective value and largest constraint violation of a point, using the
/// probabilities stored in it.
pub fn problem2_evaluate(pt: &Problem2Point) -> (f64, f64) {
    let s = pt.s();
    let w = axpy(1.0, &pt.v1, &pt.v2);
    let k = pt.accept_dim;
    let p = accept_norm_sqr(&s, k)
        .min(accept_norm_sqr(&w, k) + pt.pa1)
        .min(1.0 - accept_norm_sqr(&pt.v1, k) - pt.pa1 - pt.pa2);
    let negative = [pt.pa1, pt.pr1, pt.pa2, pt.pr2]
        .iter()
        .map(|x| (-x).max(0.0))
        .fold(0.0, f64::max);
    let residual = [
        (norm_sqr(&s).sqrt() - 1.0).abs(),
        dot(&pt.v1, &pt.v2).abs(),
        dot(&s, &pt.v2).abs(),
        dot(&w, &pt.v3).abs(),
        (pt.pa1 + pt.pr1 - norm_sqr(&pt.v3)).abs(),
        (pt.pa2 + pt.pr2 - norm_sqr(&pt.v2)).abs(),
        negative,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    (p, residual)
}

fn objective(dim: usize, accept_dim: usize, theta: &[f64]) -> f64 {
    problem2_evaluate(&problem2_point(dim, accept_dim, theta)).0
}

struct Restart {
    p: f64,
    accept_dim: usize,
    theta: Vec<f64>,
    evals: usize,
}

fn run_restart(dim: usize, index: usize, seed: u64) -> Restart {
    let accept_dim = if dim == 1 { 1 } else { 1 + index % (dim - 1) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta0: Vec<f64> = (0..3 * dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    let neg = |x: &[f64]| -objective(dim, accept_dim, x);
    let mut evals = 0;
    let mut best = nelder_mead::minimize(neg, &theta0, &Options::default());
    evals += best.evals;
    for step in [0.1, 0.01, 0.001] {
        let opts = Options {
            step,
            ..Options::default()
        };
        let polished = nelder_mead::minimize(neg, &best.x, &opts);
        evals += polished.evals;
        if polished.f < best.f {
            best = polished;
        }
    }
    Restart {
        p: -best.f,
        accept_dim,
        theta: best.x,
        evals,
    }
}

/// Multi-start Nelder-Mead over [`problem2_point`]. Restart seeds are drawn
/// in order from a generator seeded with `seed`, so results are reproducible
/// and never decrease when restarts are added.
pub fn solve_problem2(dim: usize, restarts: usize, seed: u64) -> Result<OptimizationResult<Problem2Point>> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "dim must be in 1..={MAX_DIM}, got {dim}"
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be positive".into()));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..restarts).map(|_| master.next_u64()).collect();
    let runs: Vec<Restart> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| run_restart(dim, i, s))
        .collect();
    let evals = runs.iter().map(|r| r.evals).sum();
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.p > best.p { r } else { best })
        .expect("restarts > 0");
    let witness = problem2_point(dim, best.accept_dim, &best.theta);
    let (p, residual) = problem2_evaluate(&witness);
    Ok(OptimizationResult {
        problem: 2,
        p,
        witness,
        residual,
        iterations: evals,
        seed,
        restarts,
        numeric: None,
    })
}
