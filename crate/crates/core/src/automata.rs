//! Explicit QFAs attaining the optimal bounds, and a small catalog of
//! languages with both a DFA and an independent membership predicate.
//!
//! Every QFA here specifies its unitaries only on non-halting states; the
//! halting columns are filled in by [`complete_to_unitary`], and `V_κ` is the
//! identity.

use std::fmt;

use crate::alphabet::{Alphabet, Symbol};
use crate::bounds;
use crate::dfa::DfaSpec;
use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary, CMatrix, CVector, CONSTRUCTION_TOL};
use crate::qfa::{LanguageOracle, QfaSpec};

/// A QFA together with the language it is meant to recognize and the
/// probability it achieves.
#[derive(Clone, Debug)]
pub struct NamedAutomaton {
    pub name: String,
    pub qfa: QfaSpec,
    pub language: Language,
    pub oracle: LanguageOracle,
    pub claimed_probability: f64,
}

/// Columns for the non-halting states (listed first), completed to a unitary.
fn unitary(dim: usize, columns: &[Vec<(usize, f64)>]) -> CMatrix {
    let columns: Vec<CVector> = columns
        .iter()
        .map(|col| {
            let mut v = vec![0.0; dim];
            for &(i, x) in col {
                v[i] = x;
            }
            CVector::from_real(&v)
        })
        .collect();
    complete_to_unitary(&columns, CONSTRUCTION_TOL).expect("constructed columns are orthonormal")
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// `sin²α = (4 + √7) / 9`.
pub fn aplus_alpha() -> f64 {
    ((4.0 + 7f64.sqrt()) / 9.0).sqrt().asin()
}

/// Five-state QFA for `a⁺` over `{a, b}`.
pub fn build_aplus() -> NamedAutomaton {
    const Q0: usize = 0;
    const ACC: usize = 2;
    const REJ: usize = 3;
    const REJ1: usize = 4;
    let (s, c) = aplus_alpha().sin_cos();
    let v_a = unitary(5, &[vec![(Q0, 1.0)], vec![
        (ACC, ((1.0 + s * s) / 2.0).sqrt()),
        (REJ, c / 2f64.sqrt()),
    ]]);
    let v_b = unitary(5, &[vec![(REJ, 1.0)], vec![(REJ1, 1.0)]]);
    let v_end = unitary(5, &[vec![(ACC, s), (REJ, c)], vec![(ACC, -c), (REJ, s)]]);
    let language = Language::APlus;
    NamedAutomaton {
        name: "aplus".into(),
        qfa: QfaSpec {
            states: names(&["q0", "q1", "qacc", "qrej", "qrej1"]),
            alphabet: language.alphabet(),
            transitions: vec![v_a, v_b],
            left_end: CMatrix::identity(5),
            right_end: v_end,
            initial: CVector::from_real(&[s, c, 0.0, 0.0, 0.0]),
            accepting: names(&["qacc"]),
            rejecting: names(&["qrej", "qrej1"]),
        },
        oracle: language.oracle(),
        language,
        claimed_probability: bounds::one_cycle(),
    }
}

/// `b1 … bk z1 … zk`.
pub fn kcycles_alphabet(k: usize) -> Alphabet {
    let b = (1..=k).map(|i| format!("b{i}"));
    let z = (1..=k).map(|i| format!("z{i}"));
    Alphabet::new(b.chain(z)).expect("generated names are distinct")
}

/// `3k`-state QFA for `L₁(k)` with probability `k / (2k − 1)`.
///
/// Non-halting states are `q'0, q'2, …, q'k`; each has an accepting twin
/// `qa*` and a rejecting twin `qr*`.
pub fn build_kcycles(k: usize) -> Result<NamedAutomaton> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {k}, need k >= 2")));
    }
    // Position r in each block of k states holds index j = 0 (r = 0) or j = r + 1.
    let j_of = |r: usize| if r == 0 { 0 } else { r + 1 };
    let dim = 3 * k;
    let (non, acc, rej) = (0, k, 2 * k);
    let kf = k as f64;
    let mut transitions = Vec::with_capacity(2 * k);
    for i in 1..=k {
        let mut cols = vec![vec![
            (acc, ((kf + 1.0 - i as f64) / kf).sqrt()),
            (rej, ((i as f64 - 1.0) / kf).sqrt()),
        ]];
        cols.extend((1..k).map(|r| vec![(non + r, 1.0)]));
        transitions.push(unitary(dim, &cols));
    }
    for i in 1..=k {
        let cols: Vec<_> = (0..k)
            .map(|r| {
                let j = j_of(r);
                if r == 0 || i + j <= k + 1 {
                    vec![(acc + r, 1.0)]
                } else {
                    vec![(rej + r, 1.0)]
                }
            })
            .collect();
        transitions.push(unitary(dim, &cols));
    }
    let v_end = unitary(dim, &(0..k).map(|r| vec![(acc + r, 1.0)]).collect::<Vec<_>>());

    let denom = (2 * k - 1) as f64;
    let mut initial = vec![0.0; dim];
    initial[0] = (kf / denom).sqrt();
    for amp in &mut initial[1..k] {
        *amp = (1.0 / denom).sqrt();
    }
    let block = |prefix: &'static str| (0..k).map(move |r| format!("{prefix}{}", j_of(r)));
    let states: Vec<String> = block("q'").chain(block("qa")).chain(block("qr")).collect();
    let language = Language::L1(k);
    Ok(NamedAutomaton {
        name: format!("kcycles{k}"),
        qfa: QfaSpec {
            accepting: states[acc..rej].to_vec(),
            rejecting: states[rej..].to_vec(),
            states,
            alphabet: language.alphabet(),
            transitions,
            left_end: CMatrix::identity(dim),
            right_end: v_end,
            initial: CVector::from_real(&initial),
        },
        oracle: language.oracle(),
        language,
        claimed_probability: bounds::parallel_cycles(k),
    })
}

/// Root of `1 − 2cos²α = √(3/5)` in `[0, π/2]`.
pub fn construction5_alpha() -> f64 {
    ((1.0 - (0.6f64).sqrt()) / 2.0).sqrt().acos()
}

/// Four-state QFA for `{ε} ∪ a⁺b(a∨b)*`.
pub fn build_construction5() -> NamedAutomaton {
    const Q0: usize = 0;
    const Q1: usize = 1;
    const ACC: usize = 2;
    const REJ: usize = 3;
    let (s, c) = construction5_alpha().sin_cos();
    let r2 = 2f64.sqrt();
    let v_a = unitary(4, &[
        vec![(Q0, c * c), (Q1, c * s), (ACC, s / r2), (REJ, s / r2)],
        vec![(Q0, c * s), (Q1, s * s), (ACC, -c / r2), (REJ, -c / r2)],
    ]);
    let v_b = unitary(4, &[vec![(REJ, 1.0)], vec![(ACC, 1.0)]]);
    let v_end = unitary(4, &[vec![(ACC, 1.0)], vec![(REJ, 1.0)]]);
    let (s3, c3) = (3.0 * construction5_alpha()).sin_cos();
    let language = Language::EpsAPlusB;
    NamedAutomaton {
        name: "construction5".into(),
        qfa: QfaSpec {
            states: names(&["q0", "q1", "qacc", "qrej"]),
            alphabet: language.alphabet(),
            transitions: vec![v_a, v_b],
            left_end: CMatrix::identity(4),
            right_end: v_end,
            initial: CVector::from_real(&[c3, s3, 0.0, 0.0]),
            accepting: names(&["qacc"]),
            rejecting: names(&["qrej"]),
        },
        oracle: language.oracle(),
        language,
        claimed_probability: bounds::incomparable_pair(),
    }
}

/// Languages with a known minimal DFA.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    /// `a⁺`
    APlus,
    /// `a*b*`
    AStarBStar,
    /// `L₁(k)` over `b1 … bk z1 … zk`.
    L1(usize),
    /// `{ε} ∪ a⁺b(a∨b)*`
    EpsAPlusB,
    /// Words over `{a, b}` whose last letter is `a`.
    EndsInA,
    /// `{a, b}*`
    SigmaStar,
}

pub const CATALOG: [&str; 6] = ["aplus", "astar-bstar", "l1", "eps-aplus-b", "ends-in-a", "sigma-star"];

impl Language {
    /// `k` is only used by `l1`.
    pub fn from_name(name: &str, k: usize) -> Result<Language> {
        Ok(match name {
            "aplus" => Language::APlus,
            "astar-bstar" => Language::AStarBStar,
            "l1" if k >= 2 => Language::L1(k),
            "l1" => return Err(Error::InvalidParameter(format!("l1 needs k >= 2, got {k}"))),
            "eps-aplus-b" => Language::EpsAPlusB,
            "ends-in-a" => Language::EndsInA,
            "sigma-star" => Language::SigmaStar,
            other => return Err(Error::UnknownLanguage(other.to_string())),
        })
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            Language::L1(k) => kcycles_alphabet(k),
            _ => Alphabet::new(["a", "b"]).expect("static alphabet"),
        }
    }

    /// Direct membership test, written independently of [`Language::dfa`].
    pub fn contains(self, w: &[Symbol]) -> bool {
        const A: Symbol = 0;
        const B: Symbol = 1;
        match self {
            Language::APlus => !w.is_empty() && w.iter().all(|&s| s == A),
            Language::AStarBStar => !w.windows(2).any(|p| p == [B, A]),
            Language::L1(k) => {
                // Rejected exactly when the word is b_i b* z_j … with i ≥ 2 and i + j > k + 1.
                let Some(&first) = w.first() else { return true };
                if first >= k || first == 0 {
                    return true;
                }
                let i = first + 1;
                match w[1..].iter().find(|&&s| s >= k) {
                    Some(&z) => i + (z - k + 1) <= k + 1,
                    None => true,
                }
            }
            Language::EpsAPlusB => w.is_empty() || (w[0] == A && w.contains(&B)),
            Language::EndsInA => w.last() == Some(&A),
            Language::SigmaStar => true,
        }
    }

    pub fn oracle(self) -> LanguageOracle {
        LanguageOracle::new(self.to_string(), move |w| self.contains(w))
    }

    /// Complete DFA for the language, already minimal.
    pub fn dfa(self) -> DfaSpec {
        let named = |names: &[&str], accepting: &[usize], delta: Vec<Vec<usize>>| {
            let mut acc = vec![false; names.len()];
            for &q in accepting {
                acc[q] = true;
            }
            DfaSpec::new(crate::automata::names(names), self.alphabet(), 0, acc, delta)
                .expect("catalog DFAs are valid")
        };
        match self {
            Language::APlus => named(
                &["start", "seen_a", "dead"],
                &[1],
                vec![vec![1, 2], vec![1, 2], vec![2, 2]],
            ),
            Language::AStarBStar => named(
                &["a_phase", "b_phase", "dead"],
                &[0, 1],
                vec![vec![0, 1], vec![2, 1], vec![2, 2]],
            ),
            Language::EpsAPlusB => named(
                &["start", "a_run", "accept", "dead"],
                &[0, 2],
                vec![vec![1, 3], vec![1, 2], vec![2, 2], vec![3, 3]],
            ),
            Language::EndsInA => named(&["other", "last_a"], &[1], vec![vec![1, 0], vec![1, 0]]),
            Language::SigmaStar => named(&["all"], &[0], vec![vec![0, 0]]),
            Language::L1(k) => {
                // q0 … qk, then qrej.
                let rej = k + 1;
                let delta = (0..=rej)
                    .map(|q| {
                        let b = (1..=k).map(|i| match q {
                            0 => i,
                            q if q == rej => rej,
                            q => q,
                        });
                        let z = (1..=k).map(|j| match q {
                            0 => 1,
                            q if q == rej => rej,
                            q if q + j <= k + 1 => 1,
                            _ => rej,
                        });
                        b.chain(z).collect()
                    })
                    .collect();
                let state_names: Vec<String> = (0..=k)
                    .map(|q| format!("q{q}"))
                    .chain(["qrej".to_string()])
                    .collect();
                let mut acc = vec![true; rej + 1];
                acc[rej] = false;
                DfaSpec::new(state_names, self.alphabet(), 0, acc, delta)
                    .expect("catalog DFAs are valid")
            }
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Language::APlus => write!(f, "aplus"),
            Language::AStarBStar => write!(f, "astar-bstar"),
            Language::L1(k) => write!(f, "l1({k})"),
            Language::EpsAPlusB => write!(f, "eps-aplus-b"),
            Language::EndsInA => write!(f, "ends-in-a"),
            Language::SigmaStar => write!(f, "sigma-star"),
        }
    }
}

/// The DFA for a catalog language, by name.
pub fn build_language_dfa(name: &str, k: usize) -> Result<DfaSpec> {
    Language::from_name(name, k).map(Language::dfa)
}
