//! Measure-many quantum finite automata.
//!
//! A QFA reads `κ w $`. Each letter applies its unitary and then measures the
//! state against the accepting / rejecting / non-halting subspaces; halting
//! outcomes end the computation, the non-halting part continues. Residual
//! states are kept unnormalized, so `‖residual‖²` is the probability that the
//! automaton is still running.

pub mod format;

use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, CONSTRUCTION_TOL, IDENTITY_TOL};

/// Letter of the working alphabet `Σ ∪ {κ, $}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Left endmarker `κ`.
    LeftEnd,
    Input(Symbol),
    /// Right endmarker `$`.
    RightEnd,
}

impl Letter {
    /// `κ · word · $`.
    pub fn framed(word: &[Symbol]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(word.len() + 2);
        out.push(Letter::LeftEnd);
        out.extend(word.iter().map(|&s| Letter::Input(s)));
        out.push(Letter::RightEnd);
        out
    }

    pub fn inputs(word: &[Symbol]) -> Vec<Letter> {
        word.iter().map(|&s| Letter::Input(s)).collect()
    }
}

/// Full description of a measure-many QFA.
#[derive(Clone, Debug, PartialEq)]
pub struct QfaSpec {
    pub states: Vec<String>,
    pub alphabet: Alphabet,
    /// One matrix per input letter, in alphabet order, acting on `states`.
    pub transitions: Vec<CMatrix>,
    pub left_end: CMatrix,
    pub right_end: CMatrix,
    pub initial: CVector,
    pub accepting: Vec<String>,
    pub rejecting: Vec<String>,
}

/// Coordinate masks of the accepting, rejecting and non-halting subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub accepting: Vec<bool>,
    pub rejecting: Vec<bool>,
    pub non_halting: Vec<bool>,
}

impl Partition {
    pub fn non_halting_indices(&self) -> Vec<usize> {
        (0..self.non_halting.len())
            .filter(|&i| self.non_halting[i])
            .collect()
    }
}

/// A broken [`QfaSpec`] invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    DuplicateState(String),
    UnknownState(String),
    /// State listed as both accepting and rejecting.
    OverlappingPartition(String),
    MissingTransition(String),
    WrongShape { letter: String, rows: usize, cols: usize },
    NonUnitary { letter: String, defect: f64 },
    InitialDimension { expected: usize, found: usize },
    InitialNotNormalized { norm: f64 },
    EndmarkerInAlphabet(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateState(s) => write!(f, "state `{s}` is listed twice"),
            Violation::UnknownState(s) => write!(f, "halting set names unknown state `{s}`"),
            Violation::OverlappingPartition(s) => {
                write!(f, "state `{s}` is both accepting and rejecting")
            }
            Violation::MissingTransition(l) => write!(f, "no transition matrix for `{l}`"),
            Violation::WrongShape { letter, rows, cols } => {
                write!(f, "transition for `{letter}` has shape {rows}x{cols}")
            }
            Violation::NonUnitary { letter, defect } => write!(
                f,
                "transition for `{letter}` is not unitary (max |V†V - I| = {defect:e})"
            ),
            Violation::InitialDimension { expected, found } => write!(
                f,
                "initial superposition has dimension {found}, expected {expected}"
            ),
            Violation::InitialNotNormalized { norm } => {
                write!(f, "initial superposition has norm {norm}, expected 1")
            }
            Violation::EndmarkerInAlphabet(l) => {
                write!(f, "input alphabet contains reserved endmarker `{l}`")
            }
        }
    }
}

/// Result of reading one letter.
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub p_acc_step: f64,
    pub p_rej_step: f64,
    /// Unnormalized non-halting part after the measurement.
    pub residual: CVector,
}

/// Cumulative result of reading a sequence of letters.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub p_acc: f64,
    pub p_rej: f64,
    /// Unnormalized non-halting part (`ψ_w` after `κ w`, or what is left after `$`).
    pub residual: CVector,
}

impl RunResult {
    pub fn p_continue(&self) -> f64 {
        self.residual.norm_sqr()
    }
}

/// Membership predicate for a language over a fixed alphabet.
#[derive(Clone)]
pub struct LanguageOracle {
    name: String,
    predicate: Arc<dyn Fn(&[Symbol]) -> bool + Send + Sync>,
}

impl LanguageOracle {
    pub fn new(
        name: impl Into<String>,
        predicate: impl Fn(&[Symbol]) -> bool + Send + Sync + 'static,
    ) -> Self {
        LanguageOracle {
            name: name.into(),
            predicate: Arc::new(predicate),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        (self.predicate)(word)
    }
}

impl fmt::Debug for LanguageOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LanguageOracle")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

pub const LEFT_END_NAMES: [&str; 2] = ["kappa", "κ"];
pub const RIGHT_END_NAME: &str = "$";

impl QfaSpec {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn letter_name(&self, letter: Letter) -> String {
        match letter {
            Letter::LeftEnd => "kappa".into(),
            Letter::RightEnd => RIGHT_END_NAME.into(),
            Letter::Input(s) if s < self.alphabet.len() => self.alphabet.name(s).into(),
            Letter::Input(s) => format!("#{s}"),
        }
    }

    pub fn matrix(&self, letter: Letter) -> Result<&CMatrix> {
        match letter {
            Letter::LeftEnd => Ok(&self.left_end),
            Letter::RightEnd => Ok(&self.right_end),
            Letter::Input(s) => self
                .transitions
                .get(s)
                .filter(|_| s < self.alphabet.len())
                .ok_or_else(|| Error::UnknownSymbol(format!("#{s}"))),
        }
    }

    pub fn partition(&self) -> Result<Partition> {
        let n = self.dim();
        let mut accepting = vec![false; n];
        let mut rejecting = vec![false; n];
        for s in &self.accepting {
            accepting[self.state_index(s)?] = true;
        }
        for s in &self.rejecting {
            rejecting[self.state_index(s)?] = true;
        }
        let non_halting = (0..n).map(|i| !accepting[i] && !rejecting[i]).collect();
        Ok(Partition {
            accepting,
            rejecting,
            non_halting,
        })
    }

    /// Every broken invariant; empty iff the automaton is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.dim();
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                out.push(Violation::DuplicateState(s.clone()));
            }
        }
        for s in self.accepting.iter().chain(&self.rejecting) {
            if !self.states.contains(s) {
                out.push(Violation::UnknownState(s.clone()));
            }
        }
        for s in &self.accepting {
            if self.rejecting.contains(s) {
                out.push(Violation::OverlappingPartition(s.clone()));
            }
        }
        for name in self.alphabet.names() {
            if LEFT_END_NAMES.contains(&name.as_str()) || name == RIGHT_END_NAME {
                out.push(Violation::EndmarkerInAlphabet(name.clone()));
            }
        }
        if self.initial.dim() != n {
            out.push(Violation::InitialDimension {
                expected: n,
                found: self.initial.dim(),
            });
        } else if (self.initial.norm() - 1.0).abs() > IDENTITY_TOL {
            out.push(Violation::InitialNotNormalized {
                norm: self.initial.norm(),
            });
        }
        for s in self.transitions.len()..self.alphabet.len() {
            out.push(Violation::MissingTransition(self.alphabet.name(s).into()));
        }
        let letters = (0..self.alphabet.len().min(self.transitions.len()))
            .map(Letter::Input)
            .chain([Letter::LeftEnd, Letter::RightEnd]);
        for letter in letters {
            let m = self.matrix(letter).expect("letter range checked above");
            let name = self.letter_name(letter);
            if m.rows() != n || m.cols() != n {
                out.push(Violation::WrongShape {
                    letter: name,
                    rows: m.rows(),
                    cols: m.cols(),
                });
                continue;
            }
            let defect = linalg::unitarity_defect(m).expect("square checked above");
            if defect > CONSTRUCTION_TOL {
                out.push(Violation::NonUnitary {
                    letter: name,
                    defect,
                });
            }
        }
        out
    }

    /// Applies `V_letter` to `state` and measures.
    pub fn step(&self, state: &CVector, letter: Letter) -> Result<StepOutcome> {
        let partition = self.partition()?;
        self.step_with(&partition, state, letter)
    }

    fn step_with(
        &self,
        partition: &Partition,
        state: &CVector,
        letter: Letter,
    ) -> Result<StepOutcome> {
        let evolved = linalg::mat_vec(self.matrix(letter)?, state)?;
        Ok(StepOutcome {
            p_acc_step: evolved.masked_norm_sqr(&partition.accepting),
            p_rej_step: evolved.masked_norm_sqr(&partition.rejecting),
            residual: evolved.restricted_to(&partition.non_halting),
        })
    }

    /// Reads `letters` starting from `start`, accumulating halting probabilities.
    pub fn read_letters(&self, start: &CVector, letters: &[Letter]) -> Result<RunResult> {
        let partition = self.partition()?;
        let mut acc = RunResult {
            p_acc: 0.0,
            p_rej: 0.0,
            residual: start.clone(),
        };
        for &letter in letters {
            let out = self.step_with(&partition, &acc.residual, letter)?;
            acc.p_acc += out.p_acc_step;
            acc.p_rej += out.p_rej_step;
            acc.residual = out.residual;
        }
        Ok(acc)
    }

    /// Reads `κ w` from the initial superposition; the residual is `ψ_w`.
    pub fn read_prefix(&self, word: &[Symbol]) -> Result<RunResult> {
        let mut letters = Letter::framed(word);
        letters.pop();
        self.read_letters(&self.initial, &letters)
    }

    /// Runs the automaton on `κ w $`.
    pub fn run(&self, word: &[Symbol]) -> Result<RunResult> {
        self.read_letters(&self.initial, &Letter::framed(word))
    }

    /// `V'_a = P_non V_a` for a single letter.
    pub fn letter_operator(&self, letter: Letter) -> Result<CMatrix> {
        let partition = self.partition()?;
        Ok(self.matrix(letter)?.project_rows(&partition.non_halting))
    }

    /// `V'_w = V'_{a_n} ⋯ V'_{a_1}` for a nonempty word over the working alphabet.
    pub fn nonhalting_operator(&self, letters: &[Letter]) -> Result<CMatrix> {
        if letters.is_empty() {
            return Err(Error::EmptyInput("word for V'_w"));
        }
        let partition = self.partition()?;
        let mut acc = CMatrix::identity(self.dim());
        for &letter in letters {
            let step = self.matrix(letter)?.project_rows(&partition.non_halting);
            acc = step.mul(&acc)?;
        }
        Ok(acc)
    }

    /// Probability of the correct answer on `word` with respect to `oracle`.
    pub fn correct_probability(&self, oracle: &LanguageOracle, word: &[Symbol]) -> Result<f64> {
        let r = self.run(word)?;
        Ok(if oracle.contains(word) { r.p_acc } else { r.p_rej })
    }

    /// Smallest correct-answer probability over `words`, with the word attaining it.
    pub fn worst_case(&self, oracle: &LanguageOracle, words: &[Word]) -> Result<(f64, Word)> {
        let mut best: Option<(f64, Word)> = None;
        for w in words {
            let p = self.correct_probability(oracle, w)?;
            if best.as_ref().is_none_or(|(b, _)| p < *b) {
                best = Some((p, w.clone()));
            }
        }
        best.ok_or(Error::EmptyInput("word list"))
    }

    /// Empirical recognition probability: the minimum over `words` of the
    /// probability of the correct answer.
    pub fn recognition_margin(&self, oracle: &LanguageOracle, words: &[Word]) -> Result<f64> {
        self.worst_case(oracle, words).map(|(p, _)| p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;

    /// Two non-halting states, one accepting, one rejecting. `a` swaps the
    /// non-halting states, `b` sends q0 to acc and q1 to rej.
    fn toy() -> QfaSpec {
        let swap = CMatrix::from_real_rows(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
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
            transitions: vec![swap, halt.clone()],
            left_end: CMatrix::identity(4),
            right_end: halt,
            initial: CVector::unit(4, 0),
            accepting: vec!["acc".into()],
            rejecting: vec!["rej".into()],
        }
    }

    #[test]
    fn toy_is_valid_and_runs() {
        let q = toy();
        assert!(q.validate().is_empty());
        let r = q.run(&[]).unwrap();
        assert_eq!((r.p_acc, r.p_rej), (1.0, 0.0));
        let r = q.run(&[0]).unwrap();
        assert_eq!((r.p_acc, r.p_rej), (0.0, 1.0));
        let r = q.run(&[0, 0, 1]).unwrap();
        assert_eq!((r.p_acc, r.p_rej), (1.0, 0.0));
    }

    #[test]
    fn validate_reports_each_violation() {
        let mut q = toy();
        q.transitions[0] = CMatrix::diagonal(&[1.0, 2.0, 1.0, 1.0]);
        q.rejecting.push("acc".into());
        let v = q.validate();
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::NonUnitary { letter, .. } if letter == "a")));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::OverlappingPartition(s) if s == "acc")));

        let mut q = toy();
        q.initial = CVector::from_real(&[1.0, 1.0, 0.0, 0.0]);
        q.transitions.pop();
        q.right_end = CMatrix::identity(3);
        let v = q.validate();
        assert!(v.contains(&Violation::MissingTransition("b".into())));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::InitialNotNormalized { .. })));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::WrongShape { letter, .. } if letter == "$")));
    }

    #[test]
    fn zero_state_gives_zero_outcome() {
        let q = toy();
        for letter in [Letter::LeftEnd, Letter::Input(0), Letter::Input(1), Letter::RightEnd] {
            let out = q.step(&CVector::zeros(4), letter).unwrap();
            assert_eq!(out.p_acc_step, 0.0);
            assert_eq!(out.p_rej_step, 0.0);
            assert_eq!(out.residual, CVector::zeros(4));
        }
    }

    #[test]
    fn unknown_letter_is_an_error() {
        let q = toy();
        assert!(matches!(
            q.step(&q.initial, Letter::Input(7)),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(q.run(&[0, 2]).is_err());
        assert!(matches!(
            q.nonhalting_operator(&[]),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn nonhalting_operator_kills_halting_letter() {
        let q = toy();
        let op = q.nonhalting_operator(&[Letter::Input(1)]).unwrap();
        for i in 0..2 {
            let image = linalg::mat_vec(&op, &CVector::unit(4, i)).unwrap();
            assert_eq!(image.norm(), 0.0);
        }
        let op = q.nonhalting_operator(&[Letter::Input(0), Letter::Input(0)]).unwrap();
        // Projected swap twice acts as the identity on the non-halting block.
        assert_eq!(op.get(0, 0), re(1.0));
        assert_eq!(op.get(1, 1), re(1.0));
        assert_eq!(op.get(2, 2), re(0.0));
    }

    #[test]
    fn margin_of_always_true_oracle_on_empty_word() {
        let q = toy();
        let all = LanguageOracle::new("all", |_| true);
        let m = q.recognition_margin(&all, &[vec![]]).unwrap();
        assert_eq!(m, q.run(&[]).unwrap().p_acc);
        assert!(q.recognition_margin(&all, &[]).is_err());
    }
}
