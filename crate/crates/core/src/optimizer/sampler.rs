//! Random feasible points of the unreduced problems, for checking that no
//! sample beats the claimed optimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::problem2::{problem2_evaluate, problem2_point, Problem2Point, MAX_DIM};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    One,
    Two { dim: usize },
    Three,
}

/// Problem 1 instance: `E_a` is spanned by the first `accept_dim` coordinates
/// and `E_r` by the next `reject_dim`.
#[derive(Clone, Debug, Serialize)]
pub struct Problem1Instance {
    pub accept_dim: usize,
    pub reject_dim: usize,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    pub p2: f64,
}

/// Problem 3 instance with arbitrary (possibly overlapping) subspaces given
/// by orthonormal bases.
#[derive(Clone, Debug, Serialize)]
pub struct Problem3Instance {
    pub accept_basis: Vec<Vec<f64>>,
    pub reject_basis: Vec<Vec<f64>>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum SampledPoint {
    One(Problem1Instance),
    Two(Problem2Point),
    Three(Problem3Instance),
}

#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub point: SampledPoint,
    pub p: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sum(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| StandardNormal.sample(rng)).collect()
}

fn project_sqr(basis: &[Vec<f64>], x: &[f64]) -> f64 {
    basis.iter().map(|b| dot(b, x).powi(2)).sum()
}

fn coord_sqr(x: &[f64], from: usize, to: usize) -> f64 {
    x[from..to].iter().map(|v| v * v).sum()
}

/// Random `v1 ⊥ v2` with `‖v1 + v2‖ = 1`.
fn orthogonal_split(rng: &mut ChaCha8Rng, dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut w = gaussian(rng, dim);
    let n = dot(&w, &w).sqrt();
    w.iter_mut().for_each(|x| *x /= n);
    // v2 lies on the Thales sphere over w: v2 = t(w·u)u for a random unit u.
    let mut u = gaussian(rng, dim);
    let n = dot(&u, &u).sqrt();
    u.iter_mut().for_each(|x| *x /= n);
    let c = dot(&w, &u);
    let v2: Vec<f64> = u.iter().map(|x| c * x).collect();
    let v1: Vec<f64> = w.iter().zip(&v2).map(|(a, b)| a - b).collect();
    (v1, v2)
}

fn random_basis(rng: &mut ChaCha8Rng, dim: usize, k: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < k {
        let mut v = gaussian(rng, dim);
        for b in &basis {
            let c = dot(b, &v);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}

impl Problem1Instance {
    /// `min(‖P_a(v1+v2)‖², ‖P_r v1‖² + p2, 1 − p2)`.
    pub fn value(&self) -> f64 {
        let s = sum(&self.v1, &self.v2);
        let a = self.accept_dim;
        let r = a + self.reject_dim;
        coord_sqr(&s, 0, a)
            .min(coord_sqr(&self.v1, a, r) + self.p2)
            .min(1.0 - self.p2)
    }
}

impl Problem3Instance {
    /// Smallest of the four probabilities that must all reach `p`.
    pub fn value(&self) -> f64 {
        let s = sum(&self.v1, &self.v2);
        project_sqr(&self.accept_basis, &s)
            .min(project_sqr(&self.reject_basis, &s))
            .min(1.0 - project_sqr(&self.accept_basis, &self.v1) - self.p1)
            .min(1.0 - project_sqr(&self.reject_basis, &self.v1) - self.p2)
    }
}

fn sample_one(rng: &mut ChaCha8Rng) -> Problem1Instance {
    let dim = rng.random_range(2..=5);
    let accept_dim = rng.random_range(1..dim);
    let reject_dim = rng.random_range(1..=dim - accept_dim);
    let (v1, v2) = orthogonal_split(rng, dim);
    let p2 = rng.random::<f64>() * dot(&v2, &v2);
    Problem1Instance { accept_dim, reject_dim, v1, v2, p2 }
}

fn sample_two(rng: &mut ChaCha8Rng, dim: usize) -> Problem2Point {
    let accept_dim = if dim == 1 { 1 } else { rng.random_range(1..dim) };
    let theta = gaussian(rng, 3 * dim);
    let mut pt = problem2_point(dim, accept_dim, &theta);
    let n3 = pt.pa1 + pt.pr1;
    let n2 = pt.pa2 + pt.pr2;
    pt.pa1 = rng.random::<f64>() * n3;
    pt.pr1 = n3 - pt.pa1;
    pt.pa2 = rng.random::<f64>() * n2;
    pt.pr2 = n2 - pt.pa2;
    pt
}

fn sample_three(rng: &mut ChaCha8Rng) -> Problem3Instance {
    let dim = rng.random_range(2..=4);
    let (ka, kr) = (rng.random_range(1..=dim), rng.random_range(1..=dim));
    let accept_basis = random_basis(rng, dim, ka);
    let reject_basis = random_basis(rng, dim, kr);
    let (v1, v2) = orthogonal_split(rng, dim);
    let n2 = dot(&v2, &v2);
    let p1 = rng.random::<f64>() * n2;
    Problem3Instance {
        accept_basis,
        reject_basis,
        v1,
        v2,
        p1,
        p2: n2 - p1,
    }
}

/// Draws `count` random feasible points of the given problem together with
/// their objective values.
pub fn feasible_sampler(problem: Problem, count: usize, seed: u64) -> Result<Vec<Sample>> {
    if let Problem::Two { dim } = problem {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "dim must be in 1..={MAX_DIM}, got {dim}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..count)
        .map(|_| match problem {
            Problem::One => {
                let pt = sample_one(&mut rng);
                Sample { p: pt.value(), point: SampledPoint::One(pt) }
            }
            Problem::Two { dim } => {
                let pt = sample_two(&mut rng, dim);
                Sample { p: problem2_evaluate(&pt).0, point: SampledPoint::Two(pt) }
            }
            Problem::Three => {
                let pt = sample_three(&mut rng);
                Sample { p: pt.value(), point: SampledPoint::Three(pt) }
            }
        })
        .collect();
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (v1, v2) = orthogonal_split(&mut rng, 4);
            assert!(dot(&v1, &v2).abs() < 1e-12);
            let s = sum(&v1, &v2);
            assert!((dot(&s, &s) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_is_seeded() {
        let a = feasible_sampler(Problem::Three, 20, 5).unwrap();
        let b = feasible_sampler(Problem::Three, 20, 5).unwrap();
        let pa: Vec<f64> = a.iter().map(|s| s.p).collect();
        let pb: Vec<f64> = b.iter().map(|s| s.p).collect();
        assert_eq!(pa, pb);
        assert!(feasible_sampler(Problem::Two { dim: 0 }, 1, 0).is_err());
    }
}
