use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::{golden_max, zoom_grid_max, OptimizationResult, CROSS_CHECK_TOL};
use crate::bounds;
use crate::error::{Error, Result};

/// Reduced Problem 3 variables after fixing `β = 2α − π/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Problem3Point {
    /// `E²`, the squared norm carried by the two-dimensional part.
    pub e_sq: f64,
    pub alpha: f64,
}

impl Problem3Point {
    /// `y = −cos 2α`.
    pub fn y(&self) -> f64 {
        -(2.0 * self.alpha).cos()
    }
}

/// `f = 1 − E² sin²(3α)` and `g = (1 − E² cos³(2α)) / 2`.
pub fn problem3_objectives(pt: &Problem3Point) -> (f64, f64) {
    let f = 1.0 - pt.e_sq * (3.0 * pt.alpha).sin().powi(2);
    let g = (1.0 - pt.e_sq * (2.0 * pt.alpha).cos().powi(3)) / 2.0;
    (f, g)
}

/// `1/2 + y³ / (2(5y³ − 3y + 1))`, the objective along the `f = g` branch.
pub fn problem3_y_objective(y: f64) -> f64 {
    0.5 + y.powi(3) / (2.0 * (5.0 * y.powi(3) - 3.0 * y + 1.0))
}

/// Maximum of [`problem3_y_objective`] on `[√(3/5), 1]` by a dense scan and a
/// golden-section polish around the best sample.
pub fn problem3_y_scan(samples: usize) -> (f64, f64) {
    let lo = 0.6f64.sqrt();
    let step = (1.0 - lo) / samples as f64;
    let (mut y, mut v) = (lo, problem3_y_objective(lo));
    for i in 1..=samples {
        let t = lo + step * i as f64;
        if problem3_y_objective(t) > v {
            (y, v) = (t, problem3_y_objective(t));
        }
    }
    let (ya, va) = golden_max(problem3_y_objective, (y - step).max(lo), (y + step).min(1.0), 80);
    if va > v {
        (ya, va)
    } else {
        (y, v)
    }
}

/// Numeric maximum of `min(f, g)` over `E² ∈ [0, 1]`, `α ∈ [0, π/2]`.
pub fn problem3_numeric(grid: usize) -> (f64, Problem3Point) {
    let ([e_sq, alpha], v) = zoom_grid_max(
        |[e_sq, alpha]| {
            let (f, g) = problem3_objectives(&Problem3Point { e_sq, alpha });
            f.min(g)
        },
        [0.0, 0.0],
        [1.0, FRAC_PI_2],
        grid,
        150,
    );
    (v, Problem3Point { e_sq, alpha })
}

/// Closed-form optimum `1/2 + 3√15/50` at `E² = 1`, `cos²α = 1/2 − √15/10`
/// (`y = √(3/5)`), checked against both numeric scans.
pub fn solve_problem3() -> Result<OptimizationResult<Problem3Point>> {
    let p = bounds::incomparable_pair();
    let witness = Problem3Point {
        e_sq: 1.0,
        alpha: (0.5 - 15f64.sqrt() / 10.0).sqrt().acos(),
    };
    let (y_best, _) = problem3_y_scan(100_000);
    let y_value = problem3_y_objective(y_best);
    let (numeric, _) = problem3_numeric(400);
    for (name, v) in [("y-scan", y_value), ("2-D scan", numeric)] {
        if (v - p).abs() > CROSS_CHECK_TOL {
            return Err(Error::CrossCheck(format!(
                "problem 3: closed form {p} vs {name} {v}"
            )));
        }
    }
    let (f, g) = problem3_objectives(&witness);
    Ok(OptimizationResult {
        problem: 3,
        p,
        residual: (f.min(g) - p).abs(),
        witness,
        iterations: 0,
        seed: 0,
        restarts: 0,
        numeric: Some(numeric),
    })
}
