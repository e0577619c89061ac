//! The three accepting-probability optimization problems.
//!
//! Problems 1 and 3 have closed-form optima that are computed first and then
//! cross-checked against dense numeric scans. Problem 2 is solved numerically
//! by multi-start Nelder-Mead over an exact parametrization of its feasible
//! set.

pub mod nelder_mead;
mod problem1;
mod problem2;
mod problem3;
mod sampler;

use serde::Serialize;

pub use problem1::{problem1_numeric, problem1_objective, solve_problem1, Problem1Point};
pub use problem2::{
    problem2_evaluate, problem2_point, solve_problem2, Problem2Point, DEFAULT_DIM, MAX_DIM,
};
pub use problem3::{
    problem3_numeric, problem3_objectives, problem3_y_objective, problem3_y_scan, solve_problem3,
    Problem3Point,
};
pub use sampler::{
    feasible_sampler, Problem1Instance, Problem3Instance, Problem, Sample, SampledPoint,
};

/// Tolerance for closed form versus numeric scan agreement.
pub const CROSS_CHECK_TOL: f64 = 1e-7;

#[derive(Clone, Debug, Serialize)]
pub struct OptimizationResult<W> {
    pub problem: u8,
    pub p: f64,
    pub witness: W,
    /// Largest constraint violation at the witness.
    pub residual: f64,
    /// Objective evaluations spent.
    pub iterations: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Independent numeric optimum the closed form was checked against.
    pub numeric: Option<f64>,
}

impl<W: Serialize> OptimizationResult<W> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data always serializes")
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..iters {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        }
    }
    let candidates = [(lo, f(lo)), (a, fa), (b, fb), (hi, f(hi))];
    candidates
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
}

/// Maximizes `f` over a box by a dense grid followed by repeated zooming
/// around the incumbent. Returns the best point and value.
pub(crate) fn zoom_grid_max<const D: usize>(
    f: impl Fn([f64; D]) -> f64,
    lo: [f64; D],
    hi: [f64; D],
    coarse: usize,
    rounds: usize,
) -> ([f64; D], f64) {
    let scan = |lo: [f64; D], hi: [f64; D], steps: usize, best: &mut ([f64; D], f64)| {
        let total = (steps + 1).pow(D as u32);
        for idx in 0..total {
            let mut x = [0.0; D];
            let mut rest = idx;
            for d in 0..D {
                let i = rest % (steps + 1);
                rest /= steps + 1;
                x[d] = lo[d] + (hi[d] - lo[d]) * i as f64 / steps as f64;
            }
            let v = f(x);
            if v > best.1 {
                *best = (x, v);
            }
        }
    };
    let mut best = (lo, f64::NEG_INFINITY);
    scan(lo, hi, coarse, &mut best);
    let mut width: [f64; D] = std::array::from_fn(|d| 2.0 * (hi[d] - lo[d]) / coarse as f64);
    for _ in 0..rounds {
        let center = best.0;
        let wlo = std::array::from_fn(|d| (center[d] - width[d]).max(lo[d]));
        let whi = std::array::from_fn(|d| (center[d] + width[d]).min(hi[d]));
        scan(wlo, whi, 20, &mut best);
        for w in &mut width {
            *w *= 0.8;
        }
    }
    best
}
