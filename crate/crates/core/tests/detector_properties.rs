//! Checks against brute force over every two-letter DFA with at most three
//! states and a fixed stride through the four-state ones.

use std::collections::{BTreeSet, HashSet, VecDeque};

use mmqfa::alphabet::enumerate_words;
use mmqfa::detector::{analyze, detect_incomparable_pair, detect_one_cycle, detect_parallel_cycles, ConstructionKind};
use mmqfa::dfa::DfaSpec;
use mmqfa::Alphabet;
use rayon::prelude::*;

const FOUR_STATE_STRIDE: usize = 53;

fn dfa_from_index(n: usize, mut idx: usize) -> DfaSpec {
    let mut delta = vec![vec![0; 2]; n];
    for row in delta.iter_mut() {
        for cell in row.iter_mut() {
            *cell = idx % n;
            idx /= n;
        }
    }
    let accepting: Vec<usize> = (0..n).filter(|q| idx >> q & 1 == 1).collect();
    DfaSpec::from_table(Alphabet::new(["a", "b"]).unwrap(), 0, &accepting, delta).unwrap()
}

fn count(n: usize) -> usize {
    n.pow(2 * n as u32) << n
}

fn small_dfas() -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (1..=3).flat_map(|n| (0..count(n)).map(move |i| (n, i))).collect();
    out.extend((0..count(4)).step_by(FOUR_STATE_STRIDE).map(|i| (4, i)));
    out
}

/// Transformations `q ↦ δ(q, w)` for all nonempty words `w`.
fn transition_semigroup(m: &DfaSpec) -> Vec<Vec<usize>> {
    let n = m.len();
    let letters: Vec<Vec<usize>> = (0..2).map(|a| (0..n).map(|q| m.next(q, a)).collect()).collect();
    let mut seen: HashSet<Vec<usize>> = letters.iter().cloned().collect();
    let mut queue: VecDeque<Vec<usize>> = letters.iter().cloned().collect();
    while let Some(f) = queue.pop_front() {
        for l in &letters {
            let g: Vec<usize> = f.iter().map(|&q| l[q]).collect();
            if seen.insert(g.clone()) {
                queue.push_back(g);
            }
        }
    }
    seen.into_iter().collect()
}

fn open(m: &DfaSpec, q: usize) -> bool {
    let reach = reachable(m, q);
    reach.iter().any(|&p| m.is_accepting(p)) && reach.iter().any(|&p| !m.is_accepting(p))
}

fn reachable(m: &DfaSpec, q: usize) -> Vec<usize> {
    let mut seen = vec![q];
    let mut i = 0;
    while i < seen.len() {
        for a in 0..2 {
            let p = m.next(seen[i], a);
            if !seen.contains(&p) {
                seen.push(p);
            }
        }
        i += 1;
    }
    seen
}

/// Some word is accepted from `p` but not from `q`.
fn strictly_more(m: &DfaSpec, p: usize, q: usize) -> bool {
    let mut seen = vec![(p, q)];
    let mut i = 0;
    while i < seen.len() {
        let (x, y) = seen[i];
        if m.is_accepting(x) && !m.is_accepting(y) {
            return true;
        }
        for a in 0..2 {
            let next = (m.next(x, a), m.next(y, a));
            if !seen.contains(&next) {
                seen.push(next);
            }
        }
        i += 1;
    }
    false
}

fn check(n: usize, idx: usize) {
    let dfa = dfa_from_index(n, idx);
    let report = analyze(&dfa, 3).unwrap();
    let m = &report.minimal;
    let k = m.len();

    // Minimization: idempotent, language preserving, right number of classes.
    assert_eq!(&m.minimize(), m);
    let words = enumerate_words(2, 5);
    for w in &words {
        assert_eq!(m.accepts(w), dfa.accepts(w), "dfa {n}/{idx} word {w:?}");
    }
    let probe = enumerate_words(2, n);
    let classes: BTreeSet<Vec<bool>> = reachable(&dfa, dfa.initial())
        .into_iter()
        .map(|q| probe.iter().map(|w| dfa.accepts_from(q, w)).collect())
        .collect();
    assert_eq!(classes.len(), k, "dfa {n}/{idx}");

    // Soundness: every witness satisfies its definition.
    for w in &report.witnesses {
        assert!(w.replay(m), "dfa {n}/{idx}: {w:?}");
    }

    // Completeness against the transition semigroup.
    let semigroup = transition_semigroup(m);
    let cycle = |q1: usize, q2: usize| q1 != q2 && semigroup.iter().any(|f| f[q1] == q2 && f[q2] == q2);

    let expected: BTreeSet<(usize, usize)> = (0..k)
        .flat_map(|q1| (0..k).map(move |q2| (q1, q2)))
        .filter(|&(q1, q2)| cycle(q1, q2) && open(m, q2))
        .collect();
    let found: BTreeSet<(usize, usize)> =
        detect_one_cycle(m).iter().map(|w| (w.states[0], w.states[1])).collect();
    assert_eq!(found, expected, "one_cycle on dfa {n}/{idx}");
    assert_eq!(report.rfa_recognizable, expected.is_empty());

    let returns = expected.iter().any(|&(q1, q2)| reachable(m, q2).contains(&q1));
    assert_eq!(report.qfa_recognizable, !returns, "return_cycle on dfa {n}/{idx}");

    let expected: BTreeSet<(usize, usize)> = (0..k)
        .flat_map(|q1| (0..k).map(move |q2| (q1, q2)))
        .filter(|&(q1, q2)| cycle(q1, q2) && strictly_more(m, q1, q2) && strictly_more(m, q2, q1))
        .collect();
    let found: BTreeSet<(usize, usize)> =
        detect_incomparable_pair(m).iter().map(|w| (w.states[0], w.states[1])).collect();
    assert_eq!(found, expected, "incomparable_pair on dfa {n}/{idx}");

    for size in 2..=3 {
        let mut expected = BTreeSet::new();
        for q0 in 0..k {
            for mask in 0u32..1 << k {
                let set: Vec<usize> = (0..k).filter(|q| mask >> q & 1 == 1).collect();
                if set.len() != size || set.contains(&q0) || set.iter().any(|&q| m.is_all_rejecting(q)) {
                    continue;
                }
                let ok = set.iter().all(|&qi| {
                    semigroup.iter().any(|f| f[q0] == qi && set.iter().all(|&qj| f[qj] == qj))
                });
                if ok {
                    expected.insert((q0, set));
                }
            }
        }
        let found: BTreeSet<(usize, Vec<usize>)> = detect_parallel_cycles(m, size)
            .unwrap()
            .iter()
            .map(|w| (w.states[0], w.states[1..].to_vec()))
            .collect();
        assert_eq!(found, expected, "parallel_cycles({size}) on dfa {n}/{idx}");
    }

    // The reported bound is the minimum over the witnesses.
    let implied = report
        .witnesses
        .iter()
        .filter_map(|w| w.kind.bound())
        .fold(1.0, f64::min);
    assert_eq!(report.bound, implied);
    if report.of_kind(ConstructionKind::OneCycle).next().is_none() {
        assert_eq!(report.of_kind(ConstructionKind::ReturnCycle).count(), 0);
    }
}

#[test]
fn detectors_agree_with_brute_force_on_small_dfas() {
    let all = small_dfas();
    assert_eq!(all.len(), 2 + 16 * 4 + 729 * 8 + (65536 * 16usize).div_ceil(FOUR_STATE_STRIDE));
    all.par_iter().for_each(|&(n, idx)| check(n, idx));
}
