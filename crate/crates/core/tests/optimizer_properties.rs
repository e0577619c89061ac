use std::f64::consts::FRAC_PI_2;

use mmqfa::bounds;
use mmqfa::optimizer::{
    feasible_sampler, problem1_objective, problem2_evaluate, problem2_point, problem3_objectives,
    problem3_y_objective, solve_problem2, Problem, Problem1Point, Problem3Point,
};
use proptest::prelude::*;

/// Best Problem 2 value the solver reaches (dim 6, 200 restarts).
const PROBLEM2_BEST: f64 = 0.6890701667;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn problem1_never_beats_closed_form(alpha in 0.0..FRAC_PI_2, beta in 0.0..FRAC_PI_2, p2 in 0.0f64..1.0) {
        let v = problem1_objective(&Problem1Point { alpha, beta, p2 });
        prop_assert!(v <= bounds::one_cycle() + 1e-12);
        if alpha < beta {
            prop_assert!(v <= 0.625 + 1e-12);
        }
    }

    #[test]
    fn problem3_never_beats_closed_form(e_sq in 0.0f64..=1.0, alpha in 0.0..FRAC_PI_2) {
        let (f, g) = problem3_objectives(&Problem3Point { e_sq, alpha });
        prop_assert!(f.min(g) <= bounds::incomparable_pair() + 1e-12);
    }

    #[test]
    fn y_objective_peaks_at_left_end(y in 0.6f64.sqrt()..=1.0) {
        prop_assert!(problem3_y_objective(y) <= bounds::incomparable_pair() + 1e-12);
    }

    #[test]
    fn problem2_parametrization_is_feasible(
        theta in prop::collection::vec(-3.0f64..3.0, 18),
        accept_dim in 1usize..6,
    ) {
        let pt = problem2_point(6, accept_dim, &theta);
        let (p, residual) = problem2_evaluate(&pt);
        prop_assert!(residual <= 1e-12, "residual {}", residual);
        prop_assert!(p <= PROBLEM2_BEST + 1e-9, "p {}", p);
    }
}

#[test]
fn f_equals_g_exactly_on_the_branch_roots() {
    // At E² = 1, f = g iff (1 − 2c)(−10c² + 10c − 1) = 0 with c = cos²α.
    let roots = [0.5, 0.5 - 15f64.sqrt() / 10.0, 0.5 + 15f64.sqrt() / 10.0];
    for c in roots {
        let (f, g) = problem3_objectives(&Problem3Point { e_sq: 1.0, alpha: c.sqrt().acos() });
        assert!((f - g).abs() < 1e-12, "c {c}: {f} vs {g}");
    }
}

#[test]
fn samplers_never_beat_optima() {
    let cases = [
        (Problem::One, bounds::one_cycle()),
        (Problem::Two { dim: 6 }, PROBLEM2_BEST),
        (Problem::Three, bounds::incomparable_pair()),
    ];
    for (problem, optimum) in cases {
        let samples = feasible_sampler(problem, 100_000, 17).unwrap();
        assert_eq!(samples.len(), 100_000);
        let best = samples.iter().map(|s| s.p).fold(f64::NEG_INFINITY, f64::max);
        assert!(best <= optimum + 1e-9, "{problem:?}: {best} > {optimum}");
    }
}

#[test]
fn problem2_is_monotone_in_restarts() {
    let few = solve_problem2(4, 6, 3).unwrap();
    let more = solve_problem2(4, 12, 3).unwrap();
    assert!(more.p >= few.p);
    assert!(more.residual <= 1e-8);
}

#[test]
fn problem2_json_is_reproducible() {
    let a = solve_problem2(3, 5, 42).unwrap().to_json();
    let b = solve_problem2(3, 5, 42).unwrap().to_json();
    assert_eq!(a, b);
}
