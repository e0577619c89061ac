//! Solves the three optimization problems. Pass a restart count for problem 2.

use mmqfa::optimizer::{solve_problem1, solve_problem2, solve_problem3};

fn main() -> mmqfa::Result<()> {
    let restarts = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let p1 = solve_problem1()?;
    println!("problem 1: {:.12} (numeric {:.12})", p1.p, p1.numeric.unwrap_or(f64::NAN));
    let p3 = solve_problem3()?;
    println!("problem 3: {:.12} (numeric {:.12})", p3.p, p3.numeric.unwrap_or(f64::NAN));
    let p2 = solve_problem2(6, restarts, 7)?;
    println!(
        "problem 2: {:.10} after {restarts} restarts, residual {:.1e}, {} evaluations",
        p2.p, p2.residual, p2.iterations
    );
    println!("{}", p2.to_json());
    Ok(())
}
