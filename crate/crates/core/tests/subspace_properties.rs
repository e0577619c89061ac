mod common;

use common::random_spec;
use mmqfa::automata::{build_aplus, build_construction5, build_kcycles};
use mmqfa::linalg::{mat_vec, project, CVector};
use mmqfa::qfa::QfaSpec;
use mmqfa::subspace::{decompose, decompose_within, escape_word, non_halting_basis, word_operator, DEFAULT_TOL};
use mmqfa::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Checks the decomposition invariants and returns the pair's dimensions.
fn check_invariants(spec: &QfaSpec, words: &[Word]) -> (usize, usize) {
    let pair = decompose(spec, words, DEFAULT_TOL).unwrap();
    let e_non = non_halting_basis(spec).unwrap();
    assert_eq!(pair.e1.len() + pair.e2.len(), e_non.len());
    assert!(pair.invariance_defect(spec, words).unwrap() < 1e-8);

    for a in pair.e1.vectors() {
        for b in pair.e2.vectors() {
            assert!(a.inner(b).norm() < 1e-9, "E1 and E2 not orthogonal");
        }
        // Supported on non-halting states.
        assert!((project(a, &e_non).unwrap().norm() - 1.0).abs() < 1e-9);
    }

    // Every E1 vector keeps its norm under every generator.
    for w in words {
        let op = word_operator(spec, w).unwrap();
        for v in pair.e1.vectors() {
            let image = mat_vec(&op, v).unwrap();
            assert!((image.norm() - 1.0).abs() < 1e-8);
            assert!((project(&image, &pair.e1).unwrap().norm() - 1.0).abs() < 1e-8);
        }
    }

    // E2 vectors escape below ε.
    let eps = 1e-3;
    for v in pair.e2.vectors() {
        let e = escape_word(spec, words, v, eps, 50 * spec.dim())
            .unwrap()
            .expect("escape word exists");
        assert!(e.residual_norm < eps);
        let op = word_operator(spec, &e.word);
        if let Ok(op) = op {
            assert!((mat_vec(&op, v).unwrap().norm() - e.residual_norm).abs() < 1e-9);
        }
    }

    // Starting from E1 gives E1 back.
    let again = decompose_within(spec, words, &pair.e1, DEFAULT_TOL).unwrap();
    assert_eq!(again.e1.len(), pair.e1.len());
    (pair.e1.len(), pair.e2.len())
}

fn words(spec: &QfaSpec, list: &[&str]) -> Vec<Word> {
    list.iter().map(|w| spec.alphabet.parse(w).unwrap()).collect()
}

#[test]
fn explicit_automata_satisfy_invariants() {
    let aplus = build_aplus().qfa;
    assert_eq!(check_invariants(&aplus, &words(&aplus, &["a"])), (1, 1));
    assert_eq!(check_invariants(&aplus, &words(&aplus, &["b"])), (0, 2));
    check_invariants(&aplus, &words(&aplus, &["a", "b"]));
    check_invariants(&aplus, &words(&aplus, &["ab", "aa"]));

    for k in 2..=4 {
        let kc = build_kcycles(k).unwrap().qfa;
        let gens: Vec<String> = (1..=k).map(|i| format!("b{i}")).collect();
        let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
        let (e1, _) = check_invariants(&kc, &words(&kc, &gens));
        assert!(e1 >= 1);
        check_invariants(&kc, &words(&kc, &["z1"]));
    }

    let c5 = build_construction5().qfa;
    check_invariants(&c5, &words(&c5, &["a"]));
    check_invariants(&c5, &words(&c5, &["b"]));
    check_invariants(&c5, &words(&c5, &["a", "b"]));
}

#[test]
fn kcycles_ergodic_part_contains_fixed_state() {
    let kc = build_kcycles(2).unwrap().qfa;
    let pair = decompose(&kc, &words(&kc, &["b1", "b2"]), DEFAULT_TOL).unwrap();
    let q2 = CVector::unit(kc.dim(), kc.state_index("q'2").unwrap());
    assert!((project(&q2, &pair.e1).unwrap().norm() - 1.0).abs() < 1e-9);
}

#[test]
fn random_specs_satisfy_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nontrivial = 0;
    for i in 0..100 {
        let planted = i % 2 == 0;
        let spec = random_spec(&mut rng, 2, planted);
        let gens: Vec<Word> = match rng.random_range(0..3) {
            0 => vec![vec![0]],
            1 => vec![vec![0], vec![1]],
            _ => vec![vec![0, 1], vec![1, 1, 0]],
        };
        let (e1, _) = check_invariants(&spec, &gens);
        if e1 > 0 {
            nontrivial += 1;
        }
        if planted {
            assert!(e1 >= 1, "planted invariant state lost");
        }
    }
    assert!(nontrivial >= 50);
}

#[test]
fn unitary_generators_keep_everything() {
    // All letters act unitarily on the non-halting block: E2 = {0}.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut spec = random_spec(&mut rng, 3, false);
    let id2 = mmqfa::linalg::CMatrix::identity(2);
    for t in spec.transitions.iter_mut() {
        *t = common::block_embed(5, &[0, 1, 2], &common::random_unitary(&mut rng, 3), &id2);
    }
    let pair = decompose(&spec, &[vec![0], vec![1]], DEFAULT_TOL).unwrap();
    assert_eq!((pair.e1.len(), pair.e2.len()), (3, 0));
}

#[test]
fn escape_requires_vector_in_e2() {
    let aplus = build_aplus().qfa;
    let gens = words(&aplus, &["a"]);
    let q0 = CVector::unit(aplus.dim(), 0);
    assert!(escape_word(&aplus, &gens, &q0, 1e-3, 10).is_err());
    let zero = CVector::zeros(aplus.dim());
    let e = escape_word(&aplus, &gens, &zero, 1e-3, 10).unwrap().unwrap();
    assert!(e.word.is_empty());
}
