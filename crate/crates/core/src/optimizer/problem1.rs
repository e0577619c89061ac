use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::{golden_max, OptimizationResult, CROSS_CHECK_TOL};
use crate::bounds;
use crate::error::{Error, Result};

/// Reduced Problem 1 variables: the directions of the isometric part and of
/// the accepting subspace, and the rejection probability of the decaying part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Problem1Point {
    pub alpha: f64,
    pub beta: f64,
    pub p2: f64,
}

/// `min(cos²(α − β), sin²α cos²β + p₂, 1 − p₂)`.
pub fn problem1_objective(pt: &Problem1Point) -> f64 {
    let t1 = (pt.alpha - pt.beta).cos().powi(2);
    let t2 = pt.alpha.sin().powi(2) * pt.beta.cos().powi(2) + pt.p2;
    let t3 = 1.0 - pt.p2;
    t1.min(t2).min(t3)
}

fn best_p2(alpha: f64, beta: f64) -> (f64, f64) {
    golden_max(
        |p2| problem1_objective(&Problem1Point { alpha, beta, p2 }),
        0.0,
        1.0,
        80,
    )
}

fn best_beta(alpha: f64, alpha_below_beta: bool) -> (f64, f64) {
    let lo = if alpha_below_beta { alpha } else { 0.0 };
    golden_max(|beta| best_p2(alpha, beta).1, lo, FRAC_PI_2, 80)
}

/// Numeric maximum of the reduced objective over `α, β ∈ [0, π/2]`.
/// For fixed `α` the objective is quasi-concave in `β` and in `p₂`, so both
/// are found by nested golden-section search; `α` is scanned on `grid`
/// points and then polished. With `alpha_below_beta` only `α < β` is searched.
pub fn problem1_numeric(grid: usize, alpha_below_beta: bool) -> (f64, Problem1Point) {
    let outer = |alpha: f64| best_beta(alpha, alpha_below_beta).1;
    let step = FRAC_PI_2 / grid as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=grid {
        let alpha = step * i as f64;
        let v = outer(alpha);
        if v > best.1 {
            best = (alpha, v);
        }
    }
    let (alpha, value) = golden_max(outer, (best.0 - step).max(0.0), (best.0 + step).min(FRAC_PI_2), 80);
    let (alpha, value) = if value >= best.1 { (alpha, value) } else { best };
    let (beta, _) = best_beta(alpha, alpha_below_beta);
    let (p2, _) = best_p2(alpha, beta);
    (value, Problem1Point { alpha, beta, p2 })
}

/// Closed-form optimum `(52 + 4√7)/81` at `sin²α = (4 + √7)/9`,
/// `β = π/2 − α`, `p₂ = (1 − sin⁴α)/2`, checked against [`problem1_numeric`].
pub fn solve_problem1() -> Result<OptimizationResult<Problem1Point>> {
    let y = (4.0 + 7f64.sqrt()) / 9.0;
    let alpha = y.sqrt().asin();
    let witness = Problem1Point {
        alpha,
        beta: FRAC_PI_2 - alpha,
        p2: (1.0 - y * y) / 2.0,
    };
    let p = bounds::one_cycle();
    let (numeric, _) = problem1_numeric(400, false);
    if (numeric - p).abs() > CROSS_CHECK_TOL {
        return Err(Error::CrossCheck(format!(
            "problem 1: closed form {p} vs numeric {numeric}"
        )));
    }
    Ok(OptimizationResult {
        problem: 1,
        p,
        residual: (problem1_objective(&witness) - p).abs(),
        witness,
        iterations: 0,
        seed: 0,
        restarts: 0,
        numeric: Some(numeric),
    })
}
