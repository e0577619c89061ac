//! Detection of non-reversible constructions in minimal DFAs.
//!
//! Each construction is a small pattern of states and words in the minimal
//! automaton of a language. Its presence caps the probability with which a
//! measure-many QFA can recognize the language (see [`crate::bounds`]).
//!
//! | kind               | states           | words             |
//! |--------------------|------------------|-------------------|
//! | `one_cycle`        | q1, q2           | x                 |
//! | `return_cycle`     | q1, q2           | x, y              |
//! | `two_cycles_row`   | q1, q2, q3       | x, y              |
//! | `parallel_cycles`  | q0, q1, …, qk    | x1, …, xk         |
//! | `incomparable_pair`| q1, q2           | x, z1, z2         |
//!
//! All searches are breadth-first over product automata, so each witness word
//! is the shortest one and ties are broken by alphabet order.

use std::fmt;

use serde::Serialize;

use crate::alphabet::Word;
use crate::bounds;
use crate::dfa::{bfs, DfaSpec, Relation, State};
use crate::error::{Error, Result};

pub const DEFAULT_K_MAX: usize = 3;

/// Largest `k` accepted by [`detect_parallel_cycles`]; the search is
/// `O(|Q|^(k+1))`.
pub const K_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstructionKind {
    OneCycle,
    ReturnCycle,
    TwoCyclesRow,
    ParallelCycles(usize),
    IncomparablePair,
}

impl ConstructionKind {
    /// Upper bound on the QFA recognition probability implied by this kind.
    /// A return cycle rules out QFA recognition entirely and has no bound.
    pub fn bound(self) -> Option<f64> {
        match self {
            ConstructionKind::OneCycle => Some(bounds::one_cycle()),
            ConstructionKind::ReturnCycle => None,
            ConstructionKind::TwoCyclesRow => Some(bounds::TWO_CYCLES_ROW),
            ConstructionKind::ParallelCycles(k) => Some(bounds::parallel_cycles(k)),
            ConstructionKind::IncomparablePair => Some(bounds::incomparable_pair()),
        }
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionKind::OneCycle => write!(f, "one_cycle"),
            ConstructionKind::ReturnCycle => write!(f, "return_cycle"),
            ConstructionKind::TwoCyclesRow => write!(f, "two_cycles_row"),
            ConstructionKind::ParallelCycles(k) => write!(f, "parallel_cycles({k})"),
            ConstructionKind::IncomparablePair => write!(f, "incomparable_pair"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionWitness {
    pub kind: ConstructionKind,
    pub states: Vec<State>,
    pub words: Vec<Word>,
}

impl ConstructionWitness {
    /// Checks the defining conditions of the witness's kind by running its
    /// words through `dfa`.
    pub fn replay(&self, dfa: &DfaSpec) -> bool {
        let n = dfa.len();
        if self.states.iter().any(|&q| q >= n)
            || self.words.iter().flatten().any(|&a| a >= dfa.alphabet().len())
        {
            return false;
        }
        let run = |q, w: &Word| dfa.run_from(q, w);
        let cycle = |q1: State, q2: State, x: &Word| {
            q1 != q2 && run(q1, x) == q2 && run(q2, x) == q2
        };
        let open = |q| !dfa.is_all_accepting(q) && !dfa.is_all_rejecting(q);
        match (self.kind, self.states.as_slice(), self.words.as_slice()) {
            (ConstructionKind::OneCycle, &[q1, q2], [x]) => cycle(q1, q2, x) && open(q2),
            (ConstructionKind::ReturnCycle, &[q1, q2], [x, y]) => {
                cycle(q1, q2, x) && open(q2) && run(q2, y) == q1
            }
            (ConstructionKind::TwoCyclesRow, &[q1, q2, q3], [x, y]) => {
                q1 != q2
                    && q2 != q3
                    && run(q1, x) == q1
                    && run(q1, y) == q2
                    && run(q2, y) == q2
                    && run(q2, x) == q3
                    && run(q3, x) == q3
                    && run(q3, y) != q2
            }
            (ConstructionKind::ParallelCycles(k), states, words)
                if states.len() == k + 1 && words.len() == k =>
            {
                let q0 = states[0];
                let qs = &states[1..];
                let distinct = states.iter().enumerate().all(|(i, q)| !states[..i].contains(q));
                distinct
                    && qs.iter().all(|&q| !dfa.is_all_rejecting(q))
                    && words.iter().zip(qs).all(|(x, &qi)| {
                        run(q0, x) == qi && qs.iter().all(|&qj| run(qj, x) == qj)
                    })
            }
            (ConstructionKind::IncomparablePair, &[q1, q2], [x, z1, z2]) => {
                cycle(q1, q2, x)
                    && dfa.accepts_from(q1, z1)
                    && !dfa.accepts_from(q1, z2)
                    && !dfa.accepts_from(q2, z1)
                    && dfa.accepts_from(q2, z2)
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionReport {
    /// The minimized automaton all witnesses refer to.
    pub minimal: DfaSpec,
    pub witnesses: Vec<ConstructionWitness>,
    pub bound: f64,
    pub rfa_recognizable: bool,
    pub qfa_recognizable: bool,
    pub notes: Vec<String>,
}

/// Smallest bound implied by any witness, or 1 when none applies.
pub fn bound_for(witnesses: &[ConstructionWitness]) -> f64 {
    witnesses
        .iter()
        .filter_map(|w| w.kind.bound())
        .fold(1.0, f64::min)
}

fn pair_cycle(dfa: &DfaSpec, q1: State, q2: State) -> Option<Word> {
    bfs(
        (q1, q2),
        (q2, q2),
        |&(p, q), a| (dfa.next(p, a), dfa.next(q, a)),
        dfa.alphabet().len(),
    )
}

/// Pairs `q1 ≠ q2` with `q1 →x→ q2 →x→ q2` and `q2` neither all-accepting
/// nor all-rejecting. `dfa` should be minimal.
pub fn detect_one_cycle(dfa: &DfaSpec) -> Vec<ConstructionWitness> {
    let n = dfa.len();
    let mut out = Vec::new();
    for q2 in 0..n {
        if dfa.is_all_accepting(q2) || dfa.is_all_rejecting(q2) {
            continue;
        }
        for q1 in (0..n).filter(|&q1| q1 != q2) {
            if let Some(x) = pair_cycle(dfa, q1, q2) {
                out.push(ConstructionWitness {
                    kind: ConstructionKind::OneCycle,
                    states: vec![q1, q2],
                    words: vec![x],
                });
            }
        }
    }
    out.sort_by(|a, b| a.states.cmp(&b.states));
    out
}

/// One-cycle witnesses from which `q1` can be reached again from `q2`.
pub fn detect_return_cycle(dfa: &DfaSpec) -> Vec<ConstructionWitness> {
    detect_one_cycle(dfa)
        .into_iter()
        .filter_map(|w| {
            let (q1, q2) = (w.states[0], w.states[1]);
            let y = dfa.path(q2, q1)?;
            Some(ConstructionWitness {
                kind: ConstructionKind::ReturnCycle,
                states: w.states,
                words: vec![w.words[0].clone(), y],
            })
        })
        .collect()
}

/// Triples `(q1, q2, q3)` with words `x`, `y` such that `x` loops at `q1`,
/// `y` leads `q1` to `q2` and loops there, and `x` leads `q2` to `q3` and
/// loops there. A triple whose `q4 = δ(q3, y)` equals `q2` closes a return
/// cycle `(q2, q3, x, y)` and is reported with kind `return_cycle`.
pub fn detect_two_cycles_row(dfa: &DfaSpec) -> Vec<ConstructionWitness> {
    let n = dfa.len();
    let k = dfa.alphabet().len();
    let mut out = Vec::new();
    for q1 in 0..n {
        for q2 in (0..n).filter(|&q| q != q1) {
            let Some(y) = pair_cycle(dfa, q1, q2) else {
                continue;
            };
            for q3 in (0..n).filter(|&q| q != q2) {
                let x = bfs(
                    (q1, q2, q3),
                    (q1, q3, q3),
                    |&(a, b, c), s| (dfa.next(a, s), dfa.next(b, s), dfa.next(c, s)),
                    k,
                );
                let Some(x) = x else { continue };
                let q4 = dfa.run_from(q3, &y);
                out.push(if q4 == q2 {
                    ConstructionWitness {
                        kind: ConstructionKind::ReturnCycle,
                        states: vec![q2, q3],
                        words: vec![x, y.clone()],
                    }
                } else {
                    ConstructionWitness {
                        kind: ConstructionKind::TwoCyclesRow,
                        states: vec![q1, q2, q3],
                        words: vec![x, y.clone()],
                    }
                });
            }
        }
    }
    out
}

/// Ascending `k`-subsets of `items`.
fn subsets(items: &[State], k: usize) -> Vec<Vec<State>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// States `q0` and distinct `q1 … qk`, none of `q1 … qk` all-rejecting, with
/// words `x_i` leading `q0` to `q_i` while fixing every `q_j`.
pub fn detect_parallel_cycles(dfa: &DfaSpec, k: usize) -> Result<Vec<ConstructionWitness>> {
    if !(2..=K_LIMIT).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "parallel cycle count {k} outside 2..={K_LIMIT}"
        )));
    }
    let n = dfa.len();
    let letters = dfa.alphabet().len();
    let candidates: Vec<State> = (0..n).filter(|&q| !dfa.is_all_rejecting(q)).collect();
    let mut out = Vec::new();
    for set in subsets(&candidates, k) {
        for q0 in (0..n).filter(|q| !set.contains(q)) {
            let mut start = vec![q0];
            start.extend(&set);
            let words: Option<Vec<Word>> = set
                .iter()
                .map(|&qi| {
                    let mut target = start.clone();
                    target[0] = qi;
                    bfs(
                        start.clone(),
                        target,
                        |t: &Vec<State>, a| t.iter().map(|&q| dfa.next(q, a)).collect(),
                        letters,
                    )
                })
                .collect();
            if let Some(words) = words {
                out.push(ConstructionWitness {
                    kind: ConstructionKind::ParallelCycles(k),
                    states: start,
                    words,
                });
            }
        }
    }
    Ok(out)
}

/// Cycle pairs `(q1, q2, x)` whose state languages are incomparable, with
/// `z1 ∈ L(q1) \ L(q2)` and `z2 ∈ L(q2) \ L(q1)`.
pub fn detect_incomparable_pair(dfa: &DfaSpec) -> Vec<ConstructionWitness> {
    let n = dfa.len();
    let mut out = Vec::new();
    for q1 in 0..n {
        for q2 in (0..n).filter(|&q| q != q1) {
            let Some(x) = pair_cycle(dfa, q1, q2) else {
                continue;
            };
            let cmp = dfa
                .state_language_relation(q1, q2)
                .expect("states are in range");
            if let (Relation::Incomparable, Some(z1), Some(z2)) =
                (cmp.relation, cmp.only_a, cmp.only_b)
            {
                out.push(ConstructionWitness {
                    kind: ConstructionKind::IncomparablePair,
                    states: vec![q1, q2],
                    words: vec![x, z1, z2],
                });
            }
        }
    }
    out
}

/// Minimizes `dfa`, runs every detector and aggregates the implied bound.
pub fn analyze(dfa: &DfaSpec, k_max: usize) -> Result<ConstructionReport> {
    if !(2..=K_LIMIT).contains(&k_max) {
        return Err(Error::InvalidParameter(format!(
            "k_max {k_max} outside 2..={K_LIMIT}"
        )));
    }
    let m = dfa.minimize();
    let mut notes = Vec::new();

    let one = detect_one_cycle(&m);
    let mut returns = detect_return_cycle(&m);
    let mut two = Vec::new();
    for w in detect_two_cycles_row(&m) {
        if w.kind == ConstructionKind::TwoCyclesRow {
            two.push(w);
            continue;
        }
        notes.push(format!(
            "two-cycles candidate with q2 = q4 (q2 = {}, q3 = {}) reported as return_cycle",
            m.state_name(w.states[0]),
            m.state_name(w.states[1])
        ));
        if !returns.iter().any(|r| r.states == w.states) {
            returns.push(w);
        }
    }
    notes.dedup();
    if !two.is_empty() {
        notes.push(format!(
            "two_cycles_row bound {} is a numeric optimum, not a closed form",
            bounds::TWO_CYCLES_ROW
        ));
    }

    let mut witnesses = one;
    let rfa_recognizable = witnesses.is_empty();
    let qfa_recognizable = returns.is_empty();
    witnesses.extend(returns);
    witnesses.extend(two);
    for k in 2..=k_max {
        witnesses.extend(detect_parallel_cycles(&m, k)?);
    }
    witnesses.extend(detect_incomparable_pair(&m));

    Ok(ConstructionReport {
        bound: bound_for(&witnesses),
        minimal: m,
        witnesses,
        rfa_recognizable,
        qfa_recognizable,
        notes,
    })
}

#[derive(Serialize)]
struct WitnessJson {
    kind: String,
    states: Vec<String>,
    words: Vec<String>,
}

#[derive(Serialize)]
struct ReportJson {
    bound: f64,
    rfa_recognizable: bool,
    qfa_recognizable: bool,
    minimal_states: usize,
    witnesses: Vec<WitnessJson>,
    notes: Vec<String>,
}

impl ConstructionReport {
    pub fn of_kind(&self, kind: ConstructionKind) -> impl Iterator<Item = &ConstructionWitness> {
        self.witnesses.iter().filter(move |w| w.kind == kind)
    }

    pub fn to_json(&self) -> String {
        let m = &self.minimal;
        let report = ReportJson {
            bound: self.bound,
            rfa_recognizable: self.rfa_recognizable,
            qfa_recognizable: self.qfa_recognizable,
            minimal_states: m.len(),
            witnesses: self
                .witnesses
                .iter()
                .map(|w| WitnessJson {
                    kind: w.kind.to_string(),
                    states: w.states.iter().map(|&q| m.state_name(q).to_string()).collect(),
                    words: w.words.iter().map(|x| m.alphabet().format(x)).collect(),
                })
                .collect(),
            notes: self.notes.clone(),
        };
        serde_json::to_string_pretty(&report).expect("plain data always serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn one_state_dfa_has_nothing() {
        let d = DfaSpec::from_table(ab(), 0, &[0], vec![vec![0, 0]]).unwrap();
        let r = analyze(&d, DEFAULT_K_MAX).unwrap();
        assert!(r.witnesses.is_empty());
        assert_eq!(r.bound, 1.0);
        assert!(r.rfa_recognizable && r.qfa_recognizable);
    }

    #[test]
    fn ends_in_a_has_return_cycle() {
        let d = DfaSpec::from_table(ab(), 0, &[1], vec![vec![1, 0], vec![1, 0]]).unwrap();
        let r = analyze(&d, DEFAULT_K_MAX).unwrap();
        assert!(!r.qfa_recognizable);
        let w = r.of_kind(ConstructionKind::ReturnCycle).next().unwrap();
        assert_eq!(w.words, vec![vec![0], vec![1]]);
        assert!(r.witnesses.iter().all(|w| w.replay(&r.minimal)));
    }

    #[test]
    fn parallel_k_out_of_range() {
        let d = DfaSpec::from_table(ab(), 0, &[0], vec![vec![0, 0]]).unwrap();
        assert!(detect_parallel_cycles(&d, 1).is_err());
        assert!(analyze(&d, K_LIMIT + 1).is_err());
    }

    #[test]
    fn replay_rejects_tampered_witness() {
        let d = DfaSpec::from_table(ab(), 0, &[1], vec![vec![1, 0], vec![1, 0]]).unwrap();
        let mut w = detect_one_cycle(&d).remove(0);
        assert!(w.replay(&d));
        w.words[0] = vec![1];
        assert!(!w.replay(&d));
    }

    #[test]
    fn subsets_are_ascending() {
        assert_eq!(subsets(&[0, 1, 2], 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }
}
