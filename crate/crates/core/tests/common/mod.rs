#![allow(dead_code)]

use mmqfa::linalg::{CMatrix, CVector, Complex};
use mmqfa::qfa::QfaSpec;
use mmqfa::Alphabet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    let entries = (0..n)
        .map(|_| Complex::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    CVector::from_vec(entries).unwrap()
}

pub fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    gaussian_vector(rng, n).normalized().unwrap()
}

/// Haar-ish random unitary by Gram-Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let mut cols: Vec<CVector> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = gaussian_vector(rng, n);
        for _ in 0..2 {
            for c in &cols {
                v = &v - &c.scale(c.inner(&v));
            }
        }
        if let Some(u) = v.normalized() {
            cols.push(u);
        }
    }
    CMatrix::from_columns(&cols).unwrap()
}

/// `blockdiag(a, b)` with `a` placed on `first` and `b` on the remaining
/// indices.
pub fn block_embed(n: usize, first: &[usize], a: &CMatrix, b: &CMatrix) -> CMatrix {
    let rest: Vec<usize> = (0..n).filter(|i| !first.contains(i)).collect();
    let mut rows = vec![vec![Complex::new(0.0, 0.0); n]; n];
    for (i, &gi) in first.iter().enumerate() {
        for (j, &gj) in first.iter().enumerate() {
            rows[gi][gj] = a.get(i, j);
        }
    }
    for (i, &gi) in rest.iter().enumerate() {
        for (j, &gj) in rest.iter().enumerate() {
            rows[gi][gj] = b.get(i, j);
        }
    }
    CMatrix::from_rows(&rows).unwrap()
}

/// Random valid QFA: `non_halting` non-halting states first, then one
/// accepting and one rejecting state, alphabet {a, b}. With `planted`, each
/// letter maps the first non-halting state to itself up to phase, so `E1` is
/// nontrivial.
pub fn random_spec(rng: &mut ChaCha8Rng, non_halting: usize, planted: bool) -> QfaSpec {
    let n = non_halting + 2;
    let mut states: Vec<String> = (0..non_halting).map(|i| format!("q{i}")).collect();
    states.push("acc".into());
    states.push("rej".into());
    let letter = |rng: &mut ChaCha8Rng| {
        if planted {
            let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            let one = CMatrix::from_rows(&[vec![Complex::from_polar(1.0, phase)]]).unwrap();
            block_embed(n, &[0], &one, &random_unitary(rng, n - 1))
        } else {
            random_unitary(rng, n)
        }
    };
    let transitions = vec![letter(rng), letter(rng)];
    let right_end = letter(rng);
    let mut init = gaussian_vector(rng, non_halting).entries().to_vec();
    init.extend([Complex::new(0.0, 0.0); 2]);
    let initial = CVector::from_vec(init).unwrap().normalized().unwrap();
    QfaSpec {
        states,
        alphabet: Alphabet::new(["a", "b"]).unwrap(),
        transitions,
        left_end: CMatrix::identity(n),
        right_end,
        initial,
        accepting: vec!["acc".into()],
        rejecting: vec!["rej".into()],
    }
}

pub fn random_word(rng: &mut ChaCha8Rng, alphabet: usize, max_len: usize) -> Vec<usize> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| rng.random_range(0..alphabet)).collect()
}
