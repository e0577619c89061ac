//! Complete deterministic finite automata.

use std::collections::{BTreeMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::qfa::LanguageOracle;

pub type State = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfaSpec {
    states: Vec<String>,
    alphabet: Alphabet,
    initial: State,
    accepting: Vec<bool>,
    /// `delta[q][a]`
    delta: Vec<Vec<State>>,
}

/// How the languages accepted from two states compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    Subset,
    Superset,
    Incomparable,
}

/// [`Relation`] with shortest witnesses for each nonempty difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageComparison {
    pub relation: Relation,
    /// Shortest word in `L(qa) \ L(qb)`.
    pub only_a: Option<Word>,
    /// Shortest word in `L(qb) \ L(qa)`.
    pub only_b: Option<Word>,
}

impl DfaSpec {
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        initial: State,
        accepting: Vec<bool>,
        delta: Vec<Vec<State>>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("DFA has no states".into()));
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(Error::InvalidAutomaton(format!("duplicate state `{s}`")));
            }
        }
        if initial >= n {
            return Err(Error::InvalidAutomaton("initial state out of range".into()));
        }
        if accepting.len() != n || delta.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: accepting.len().min(delta.len()),
            });
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidAutomaton(format!(
                    "transition function is not total at `{}`",
                    states[q]
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidAutomaton(format!("target {t} out of range")));
            }
        }
        Ok(DfaSpec {
            states,
            alphabet,
            initial,
            accepting,
            delta,
        })
    }

    /// Builds a DFA with states named `0..n` from a transition table.
    pub fn from_table(
        alphabet: Alphabet,
        initial: State,
        accepting: &[State],
        delta: Vec<Vec<State>>,
    ) -> Result<Self> {
        let n = delta.len();
        let mut acc = vec![false; n];
        for &q in accepting {
            *acc.get_mut(q)
                .ok_or_else(|| Error::InvalidAutomaton(format!("accepting state {q} out of range")))? = true;
        }
        DfaSpec::new((0..n).map(|q| q.to_string()).collect(), alphabet, initial, acc, delta)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Result<State> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: State, a: Symbol) -> State {
        self.delta[q][a]
    }

    pub fn run_from(&self, q: State, word: &[Symbol]) -> State {
        word.iter().fold(q, |q, &a| self.delta[q][a])
    }

    pub fn accepts_from(&self, q: State, word: &[Symbol]) -> bool {
        self.accepting[self.run_from(q, word)]
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.accepts_from(self.initial, word)
    }

    /// Membership oracle for the language of this DFA.
    pub fn oracle(&self, name: impl Into<String>) -> LanguageOracle {
        let dfa = self.clone();
        LanguageOracle::new(name, move |w| w.iter().all(|&a| a < dfa.alphabet.len()) && dfa.accepts(w))
    }

    /// States reachable from `q`, including `q`.
    pub fn reachable_from(&self, q: State) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![q];
        seen[q] = true;
        while let Some(p) = stack.pop() {
            for &t in &self.delta[p] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Every continuation from `q` is accepted.
    pub fn is_all_accepting(&self, q: State) -> bool {
        let reach = self.reachable_from(q);
        (0..self.len()).all(|p| !reach[p] || self.accepting[p])
    }

    /// Every continuation from `q` is rejected.
    pub fn is_all_rejecting(&self, q: State) -> bool {
        let reach = self.reachable_from(q);
        (0..self.len()).all(|p| !reach[p] || !self.accepting[p])
    }

    /// Shortest word (ties broken lexicographically) leading from `from` to `to`.
    pub fn path(&self, from: State, to: State) -> Option<Word> {
        bfs(from, to, |q, a| self.delta[*q][a], self.alphabet.len())
    }

    /// Minimal equivalent DFA. States are numbered in breadth-first order
    /// from the initial state, so equal languages give identical tables; each
    /// state keeps the name of the first original state in its class.
    pub fn minimize(&self) -> DfaSpec {
        let order = self.bfs_order(self.initial);
        let k = self.alphabet.len();

        // Moore refinement over reachable states.
        let mut class = vec![usize::MAX; self.len()];
        for &q in &order {
            class[q] = usize::from(self.accepting[q]);
        }
        let mut count = 0;
        loop {
            let mut ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next = vec![usize::MAX; self.len()];
            for &q in &order {
                let sig = (class[q], self.delta[q].iter().map(|&t| class[t]).collect());
                let fresh = ids.len();
                next[q] = *ids.entry(sig).or_insert(fresh);
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // Renumber classes in BFS order of their first member.
        let mut renumber = vec![usize::MAX; count.max(1)];
        let mut names = Vec::new();
        let mut reps = Vec::new();
        let quotient_order = {
            let mut seen = vec![false; count.max(1)];
            let mut out = Vec::new();
            let mut queue = VecDeque::from([self.initial]);
            seen[class[self.initial]] = true;
            while let Some(q) = queue.pop_front() {
                out.push(q);
                for a in 0..k {
                    let t = self.delta[q][a];
                    if !seen[class[t]] {
                        seen[class[t]] = true;
                        queue.push_back(t);
                    }
                }
            }
            out
        };
        for &q in &quotient_order {
            renumber[class[q]] = names.len();
            names.push(self.states[q].clone());
            reps.push(q);
        }
        let delta = reps
            .iter()
            .map(|&q| (0..k).map(|a| renumber[class[self.delta[q][a]]]).collect())
            .collect();
        let accepting = reps.iter().map(|&q| self.accepting[q]).collect();
        DfaSpec::new(names, self.alphabet.clone(), 0, accepting, delta)
            .expect("quotient of a valid DFA is valid")
    }

    fn bfs_order(&self, start: State) -> Vec<State> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(q) = queue.pop_front() {
            out.push(q);
            for &t in &self.delta[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        out
    }

    /// Compares `L(qa)` and `L(qb)` by searching the product automaton.
    pub fn state_language_relation(&self, qa: State, qb: State) -> Result<LanguageComparison> {
        if qa >= self.len() || qb >= self.len() {
            return Err(Error::UnknownState(format!("{}", qa.max(qb))));
        }
        let k = self.alphabet.len();
        let step = |&(p, q): &(State, State), a: Symbol| (self.delta[p][a], self.delta[q][a]);
        let only_a = bfs_where((qa, qb), |&(p, q)| self.accepting[p] && !self.accepting[q], step, k);
        let only_b = bfs_where((qa, qb), |&(p, q)| !self.accepting[p] && self.accepting[q], step, k);
        let relation = match (&only_a, &only_b) {
            (None, None) => Relation::Equal,
            (None, Some(_)) => Relation::Subset,
            (Some(_), None) => Relation::Superset,
            (Some(_), Some(_)) => Relation::Incomparable,
        };
        Ok(LanguageComparison {
            relation,
            only_a,
            only_b,
        })
    }
}

/// Breadth-first search for `target` over an implicit graph.
pub(crate) fn bfs<N, F>(start: N, target: N, step: F, letters: usize) -> Option<Word>
where
    N: Clone + Eq + std::hash::Hash,
    F: Fn(&N, Symbol) -> N,
{
    bfs_where(start, |n| *n == target, step, letters)
}

/// Breadth-first search for the first node satisfying `goal`. Letters are
/// tried in alphabet order, so the returned word is the shortest and, among
/// those, the lexicographically smallest.
pub(crate) fn bfs_where<N, G, F>(start: N, goal: G, step: F, letters: usize) -> Option<Word>
where
    N: Clone + Eq + std::hash::Hash,
    G: Fn(&N) -> bool,
    F: Fn(&N, Symbol) -> N,
{
    use std::collections::HashMap;
    if goal(&start) {
        return Some(Vec::new());
    }
    let mut parent: HashMap<N, (N, Symbol)> = HashMap::new();
    let mut queue = VecDeque::from([start.clone()]);
    let mut found = None;
    'search: while let Some(n) = queue.pop_front() {
        for a in 0..letters {
            let t = step(&n, a);
            if t == start || parent.contains_key(&t) {
                continue;
            }
            parent.insert(t.clone(), (n.clone(), a));
            if goal(&t) {
                found = Some(t);
                break 'search;
            }
            queue.push_back(t);
        }
    }
    let mut node = found?;
    let mut word = Vec::new();
    while node != start {
        let (prev, a) = parent.remove(&node).expect("parent chain reaches start");
        word.push(a);
        node = prev;
    }
    word.reverse();
    Some(word)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaFile {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    accepting: Vec<String>,
    transitions: BTreeMap<String, BTreeMap<String, String>>,
}

impl DfaSpec {
    pub fn to_json(&self) -> String {
        let transitions = (0..self.len())
            .map(|q| {
                let row = (0..self.alphabet.len())
                    .map(|a| (self.alphabet.name(a).to_string(), self.states[self.delta[q][a]].clone()))
                    .collect();
                (self.states[q].clone(), row)
            })
            .collect();
        let file = DfaFile {
            states: self.states.clone(),
            alphabet: self.alphabet.names().to_vec(),
            initial: self.states[self.initial].clone(),
            accepting: (0..self.len())
                .filter(|&q| self.accepting[q])
                .map(|q| self.states[q].clone())
                .collect(),
            transitions,
        };
        serde_json::to_string_pretty(&file).expect("plain data always serializes")
    }

    pub fn from_json(text: &str) -> Result<DfaSpec> {
        let file: DfaFile = serde_json::from_str(text)?;
        let alphabet = Alphabet::new(file.alphabet)?;
        let index = |name: &str| {
            file.states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::UnknownState(name.to_string()))
        };
        let initial = index(&file.initial)?;
        let mut accepting = vec![false; file.states.len()];
        for s in &file.accepting {
            accepting[index(s)?] = true;
        }
        for s in file.transitions.keys() {
            index(s)?;
        }
        let mut delta = Vec::with_capacity(file.states.len());
        for s in &file.states {
            let row = file
                .transitions
                .get(s)
                .ok_or_else(|| Error::InvalidAutomaton(format!("no transitions for `{s}`")))?;
            for letter in row.keys() {
                alphabet.symbol(letter)?;
            }
            let targets = alphabet
                .names()
                .iter()
                .map(|a| {
                    let t = row.get(a).ok_or_else(|| {
                        Error::InvalidAutomaton(format!("no transition from `{s}` on `{a}`"))
                    })?;
                    index(t)
                })
                .collect::<Result<Vec<_>>>()?;
            delta.push(targets);
        }
        DfaSpec::new(file.states.clone(), alphabet, initial, accepting, delta)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<DfaSpec> {
        DfaSpec::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::enumerate_words;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    /// a⁺ with a duplicated accepting state.
    fn aplus_redundant() -> DfaSpec {
        DfaSpec::from_table(ab(), 0, &[1, 3], vec![vec![1, 2], vec![3, 2], vec![2, 2], vec![1, 2]])
            .unwrap()
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        let d = aplus_redundant();
        let m = d.minimize();
        assert_eq!(m.len(), 3);
        for w in enumerate_words(2, 8) {
            assert_eq!(d.accepts(&w), m.accepts(&w));
        }
        assert_eq!(m.minimize(), m);
    }

    #[test]
    fn minimize_drops_unreachable() {
        let d = DfaSpec::from_table(ab(), 0, &[0, 1], vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(d.minimize().len(), 1);
    }

    #[test]
    fn relation_cases() {
        let m = aplus_redundant().minimize();
        // 0 = start, 1 = after a, 2 = dead
        assert_eq!(m.state_language_relation(1, 1).unwrap().relation, Relation::Equal);
        let c = m.state_language_relation(2, 1).unwrap();
        assert_eq!(c.relation, Relation::Subset);
        assert_eq!(c.only_b, Some(vec![]));
        assert!(m.state_language_relation(0, 9).is_err());
    }

    #[test]
    fn all_accepting_and_rejecting() {
        let m = aplus_redundant().minimize();
        assert!(m.is_all_rejecting(2));
        assert!(!m.is_all_rejecting(1));
        assert!(!m.is_all_accepting(1));
    }

    #[test]
    fn paths_are_shortest_then_lexicographic() {
        let m = aplus_redundant().minimize();
        assert_eq!(m.path(0, 2), Some(vec![1]));
        assert_eq!(m.path(0, 1), Some(vec![0]));
        assert_eq!(m.path(2, 0), None);
        assert_eq!(m.path(1, 1), Some(vec![]));
    }

    #[test]
    fn json_round_trip() {
        let d = aplus_redundant();
        let again = DfaSpec::from_json(&d.to_json()).unwrap();
        assert_eq!(d, again);
        let broken = d.to_json().replace("\"b\": \"2\"", "\"c\": \"2\"");
        assert!(DfaSpec::from_json(&broken).is_err());
    }
}
