//! Nelder-Mead simplex minimization with dimension-adaptive coefficients
//! (reflection 1, expansion `1 + 2/n`, contraction `3/4 − 1/(2n)`, shrink
//! `1 − 1/n`), which behaves much better than the classic constants once
//! `n` exceeds a handful of variables.

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub max_evals: usize,
    /// Stop once every vertex is within this distance of the best (max norm).
    pub x_tol: f64,
    /// ...and the objective spread over the simplex is below this.
    pub f_tol: f64,
    /// Edge length of the initial simplex.
    pub step: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_evals: 20_000,
            x_tol: 1e-10,
            f_tol: 1e-14,
            step: 0.5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
}

pub fn minimize<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: &Options) -> Minimum {
    let n = x0.len();
    let nf = n.max(1) as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.step;
        let fx = eval(&x);
        simplex.push((x, fx));
    }
    if n == 0 {
        let (x, f) = simplex.pop().expect("one vertex");
        return Minimum { x, f, evals: evals.get() };
    }

    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0];
        let spread = simplex[n].1 - best.1;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (diameter < opts.x_tol && spread.abs() < opts.f_tol) || diameter < opts.x_tol * 1e-3 {
            break;
        }
        if evals.get() >= opts.max_evals {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let (worst, f_worst) = simplex[n].clone();
        let f_second = simplex[n - 1].1;
        let f_best = simplex[0].1;

        let reflected = combine(&centroid, &worst, -alpha);
        let f_r = eval(&reflected);
        if f_r < f_best {
            let expanded = combine(&centroid, &worst, -gamma);
            let f_e = eval(&expanded);
            simplex[n] = if f_e < f_r { (expanded, f_e) } else { (reflected, f_r) };
            continue;
        }
        if f_r < f_second {
            simplex[n] = (reflected, f_r);
            continue;
        }
        let (contracted, f_c) = if f_r < f_worst {
            let x = combine(&centroid, &reflected, rho);
            let fx = eval(&x);
            (x, fx)
        } else {
            let x = combine(&centroid, &worst, rho);
            let fx = eval(&x);
            (x, fx)
        };
        if f_c < f_worst.min(f_r) {
            simplex[n] = (contracted, f_c);
            continue;
        }
        let best_x = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&best_x, &vertex.0, sigma);
            let fx = eval(&x);
            *vertex = (x, fx);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    Minimum { x, f, evals: evals.get() }
}
