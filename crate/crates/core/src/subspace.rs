//! Splitting the non-halting space into an isometric part and a decaying part.
//!
//! For generator words `x_1 … x_k`, `E1` is the largest subspace of `E_non`
//! that every `V'_{x_i}` maps isometrically into itself, and `E2` is its
//! orthogonal complement in `E_non`. Amplitude in `E1` survives any number of
//! generators; amplitude in `E2` can be driven below any `ε` by a suitable
//! concatenation of generators ([`escape_word`]).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::alphabet::Word;
use crate::error::{Error, Result};
use crate::linalg::{self, Basis, CMatrix, CVector};
use crate::qfa::{Letter, QfaSpec};

/// Default singular-value threshold for [`decompose`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Singular values between the threshold and this value mark a near-isometric
/// direction that was classified into `E2`.
pub const BORDERLINE: f64 = 1e-6;

/// Node budget for [`escape_word`]'s exhaustive search.
pub const ESCAPE_NODE_LIMIT: usize = 20_000;

/// Nodes kept per length by the fallback search in [`escape_word`].
pub const ESCAPE_BEAM_WIDTH: usize = 64;

#[derive(Clone, Debug)]
pub struct SubspacePair {
    /// Vectors in full state-space coordinates, supported on non-halting states.
    pub e1: Basis,
    pub e2: Basis,
    /// `dim(E_non)`.
    pub ambient_dim: usize,
    /// Number of refinement rounds until the dimension stabilized.
    pub iterations: usize,
    /// Some direction had an isometry defect in `(tol, BORDERLINE)`.
    pub borderline: bool,
}

/// `V'_w` for a nonempty word over the input alphabet.
pub fn word_operator(spec: &QfaSpec, word: &[usize]) -> Result<CMatrix> {
    if word.is_empty() {
        return Err(Error::EmptyInput("generator word"));
    }
    spec.nonhalting_operator(&Letter::inputs(word))
}

fn generator_operators(spec: &QfaSpec, words: &[Word]) -> Result<Vec<CMatrix>> {
    if words.is_empty() {
        return Err(Error::EmptyInput("generator word list"));
    }
    words.iter().map(|w| word_operator(spec, w)).collect()
}

fn check_tol(name: &str, tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {tol}")))
    }
}

pub fn non_halting_basis(spec: &QfaSpec) -> Result<Basis> {
    let partition = spec.partition()?;
    Ok(Basis::coordinate(spec.dim(), partition.non_halting_indices()))
}

/// Decomposes `E_non` with respect to the generator words.
pub fn decompose(spec: &QfaSpec, words: &[Word], tol: f64) -> Result<SubspacePair> {
    let ambient = non_halting_basis(spec)?;
    decompose_within(spec, words, &ambient, tol)
}

/// Like [`decompose`], but starts the refinement from `start` instead of
/// all of `E_non`. The result's `e1` is the largest invariant isometric
/// subspace of `span(start)`; `e2` is still taken within `E_non`.
pub fn decompose_within(
    spec: &QfaSpec,
    words: &[Word],
    start: &Basis,
    tol: f64,
) -> Result<SubspacePair> {
    check_tol("tolerance", tol)?;
    let ops = generator_operators(spec, words)?;
    let n = spec.dim();
    let ambient = non_halting_basis(spec)?;
    let identity = CMatrix::identity(n);
    let defects: Vec<CMatrix> = ops
        .iter()
        .map(|a| &identity - &(&a.adjoint() * a))
        .collect();

    let mut current = start.clone();
    let mut iterations = 0;
    let mut borderline = false;
    while !current.is_empty() {
        iterations += 1;
        let q = current.as_matrix();
        let outside = &identity - &(&q * &q.adjoint());
        let mut blocks = Vec::with_capacity(2 * ops.len());
        for (a, d) in ops.iter().zip(&defects) {
            blocks.push(d * &q);
            blocks.push(&(&outside * a) * &q);
        }
        let stacked = CMatrix::vstack(&blocks)?;
        let null = linalg::nullspace_detailed(&stacked, tol);
        borderline |= null
            .singular_values
            .iter()
            .any(|&s| s > tol && s < BORDERLINE);
        if null.basis.len() == current.len() {
            break;
        }
        let next: Vec<CVector> = null
            .basis
            .vectors()
            .iter()
            .map(|c| linalg::mat_vec(&q, c))
            .collect::<Result<_>>()?;
        current = Basis::span_of(n, &next, 0.5)?;
    }
    let e2 = current.complement_within(&ambient)?;
    Ok(SubspacePair {
        e1: current,
        e2,
        ambient_dim: ambient.len(),
        iterations,
        borderline,
    })
}

impl SubspacePair {
    /// Largest violation of the `E1` invariants over the basis vectors and
    /// generators: `|‖V'_x v‖ − 1|` and the distance of `V'_x v` from `E1`.
    pub fn invariance_defect(&self, spec: &QfaSpec, words: &[Word]) -> Result<f64> {
        let ops = generator_operators(spec, words)?;
        let mut worst: f64 = 0.0;
        for v in self.e1.vectors() {
            for a in &ops {
                let image = linalg::mat_vec(a, v)?;
                let off = &image - &linalg::project(&image, &self.e1)?;
                worst = worst.max((image.norm() - 1.0).abs()).max(off.norm());
            }
        }
        Ok(worst)
    }
}

/// A concatenation of generators that shrinks a vector below `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct Escape {
    /// Indices into the generator list, in reading order.
    pub generators: Vec<usize>,
    /// The concatenated input word.
    pub word: Word,
    /// `‖V'_t ψ‖`.
    pub residual_norm: f64,
    /// False when the word came from the beam fallback and may not be the
    /// shortest one.
    pub shortest: bool,
}

/// Searches concatenations of generators, shortest total length first and
/// generator list order among equals, for `t` with `‖V'_t ψ‖ < ε`.
///
/// `ψ` must lie in `E2`. If [`ESCAPE_NODE_LIMIT`] nodes are expanded without
/// success, a beam search keeping the [`ESCAPE_BEAM_WIDTH`] smallest vectors
/// per length takes over. Returns `None` when neither finds a word of at most
/// `max_len` letters.
pub fn escape_word(
    spec: &QfaSpec,
    words: &[Word],
    psi: &CVector,
    eps: f64,
    max_len: usize,
) -> Result<Option<Escape>> {
    check_tol("eps", eps)?;
    let ops = generator_operators(spec, words)?;
    let pair = decompose(spec, words, DEFAULT_TOL)?;
    let off = psi - &linalg::project(psi, &pair.e2)?;
    if off.norm() > BORDERLINE * psi.norm().max(1.0) {
        return Err(Error::Precondition(format!(
            "vector is not in E2 (distance {:e})",
            off.norm()
        )));
    }
    struct Node {
        generators: Vec<usize>,
        state: CVector,
    }
    let mut nodes = vec![Node {
        generators: Vec::new(),
        state: psi.clone(),
    }];
    // (total length, insertion order) so ties follow generator order.
    let mut queue = BinaryHeap::from([Reverse((0usize, 0usize))]);
    let mut expanded = 0;
    while let Some(Reverse((len, id))) = queue.pop() {
        let norm = nodes[id].state.norm();
        if norm < eps {
            let generators = nodes[id].generators.clone();
            let word = generators.iter().flat_map(|&i| words[i].iter().copied()).collect();
            return Ok(Some(Escape {
                generators,
                word,
                residual_norm: norm,
                shortest: true,
            }));
        }
        expanded += 1;
        if expanded > ESCAPE_NODE_LIMIT {
            return beam_escape(&ops, words, psi, eps, max_len);
        }
        for (g, a) in ops.iter().enumerate() {
            let total = len + words[g].len();
            if total > max_len {
                continue;
            }
            let state = linalg::mat_vec(a, &nodes[id].state)?;
            let mut generators = nodes[id].generators.clone();
            generators.push(g);
            queue.push(Reverse((total, nodes.len())));
            nodes.push(Node { generators, state });
        }
    }
    Ok(None)
}

fn beam_escape(
    ops: &[CMatrix],
    words: &[Word],
    psi: &CVector,
    eps: f64,
    max_len: usize,
) -> Result<Option<Escape>> {
    let mut levels: Vec<Vec<(Vec<usize>, CVector)>> = vec![Vec::new(); max_len + 1];
    levels[0].push((Vec::new(), psi.clone()));
    for len in 0..=max_len {
        let mut level = std::mem::take(&mut levels[len]);
        level.sort_by(|a, b| a.1.norm().total_cmp(&b.1.norm()));
        level.truncate(ESCAPE_BEAM_WIDTH);
        if let Some((generators, state)) = level.first() {
            if state.norm() < eps {
                let word = generators.iter().flat_map(|&i| words[i].iter().copied()).collect();
                return Ok(Some(Escape {
                    generators: generators.clone(),
                    word,
                    residual_norm: state.norm(),
                    shortest: false,
                }));
            }
        }
        for (generators, state) in &level {
            for (g, a) in ops.iter().enumerate() {
                let total = len + words[g].len();
                if total <= max_len {
                    let mut next = generators.clone();
                    next.push(g);
                    levels[total].push((next, linalg::mat_vec(a, state)?));
                }
            }
        }
    }
    Ok(None)
}

/// Smallest `i` in `1..=max_iter` with `‖V'_{x^i} ψ − ψ‖ ≤ ε`, for `ψ` in
/// `E1` of the single generator `word`.
pub fn recurrence_exponent(
    spec: &QfaSpec,
    word: &[usize],
    psi: &CVector,
    eps: f64,
    max_iter: usize,
) -> Result<Option<usize>> {
    check_tol("eps", eps)?;
    let a = word_operator(spec, word)?;
    let pair = decompose(spec, &[word.to_vec()], DEFAULT_TOL)?;
    let off = psi - &linalg::project(psi, &pair.e1)?;
    if off.norm() > BORDERLINE * psi.norm().max(1.0) {
        return Err(Error::Precondition(format!(
            "vector is not in E1 (distance {:e})",
            off.norm()
        )));
    }
    let mut v = psi.clone();
    for i in 1..=max_iter {
        v = linalg::mat_vec(&a, &v)?;
        if (&v - psi).norm() <= eps {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    /// Two non-halting states rotated by `θ` on `a`; `b` halts everything.
    fn rotation(theta: f64) -> QfaSpec {
        let (s, c) = theta.sin_cos();
        let rot = CMatrix::from_real_rows(&[
            &[c, -s, 0.0, 0.0],
            &[s, c, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let halt = CMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
        ])
        .unwrap();
        QfaSpec {
            states: vec!["q0".into(), "q1".into(), "acc".into(), "rej".into()],
            alphabet: Alphabet::new(["a", "b"]).unwrap(),
            transitions: vec![rot, halt.clone()],
            left_end: CMatrix::identity(4),
            right_end: halt,
            initial: CVector::unit(4, 0),
            accepting: vec!["acc".into()],
            rejecting: vec!["rej".into()],
        }
    }

    #[test]
    fn unitary_generator_keeps_everything() {
        let q = rotation(0.3);
        let d = decompose(&q, &[vec![0]], DEFAULT_TOL).unwrap();
        assert_eq!((d.e1.len(), d.e2.len(), d.ambient_dim), (2, 0, 2));
        assert!(d.invariance_defect(&q, &[vec![0]]).unwrap() < 1e-12);
    }

    #[test]
    fn halting_generator_keeps_nothing() {
        let q = rotation(0.3);
        let d = decompose(&q, &[vec![1]], DEFAULT_TOL).unwrap();
        assert_eq!((d.e1.len(), d.e2.len()), (0, 2));
        let e = escape_word(&q, &[vec![1]], &CVector::unit(4, 1), 1e-6, 5)
            .unwrap()
            .unwrap();
        assert_eq!(e.word, vec![1]);
    }

    #[test]
    fn rotation_period_five() {
        let q = rotation(2.0 * std::f64::consts::PI / 5.0);
        let psi = CVector::from_real(&[0.6, 0.8, 0.0, 0.0]);
        assert_eq!(recurrence_exponent(&q, &[0], &psi, 1e-9, 20).unwrap(), Some(5));
        assert_eq!(recurrence_exponent(&q, &[0], &psi, 1e-9, 4).unwrap(), None);
    }

    #[test]
    fn bad_arguments() {
        let q = rotation(0.3);
        assert!(decompose(&q, &[], DEFAULT_TOL).is_err());
        assert!(decompose(&q, &[vec![]], DEFAULT_TOL).is_err());
        assert!(decompose(&q, &[vec![0]], 0.0).is_err());
        let psi = CVector::unit(4, 0);
        assert!(escape_word(&q, &[vec![0]], &psi, 0.0, 4).is_err());
        assert!(matches!(
            escape_word(&q, &[vec![0]], &psi, 1e-3, 4),
            Err(Error::Precondition(_))
        ));
        assert!(recurrence_exponent(&q, &[0], &psi, -1.0, 4).is_err());
    }

    #[test]
    fn zero_vector_escapes_immediately() {
        let q = rotation(0.3);
        let e = escape_word(&q, &[vec![1]], &CVector::zeros(4), 1e-6, 4)
            .unwrap()
            .unwrap();
        assert!(e.word.is_empty());
    }
}
