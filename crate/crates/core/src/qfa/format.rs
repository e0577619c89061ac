//! JSON encoding of [`QfaSpec`].
//!
//! ```json
//! {
//!   "states": ["q0", "acc", "rej"],
//!   "alphabet": ["a"],
//!   "initial": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
//!   "accepting": ["acc"],
//!   "rejecting": ["rej"],
//!   "transitions": { "kappa": [[[1.0, 0.0], ...], ...], "a": ..., "$": ... }
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major over the
//! `states` order.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{QfaSpec, LEFT_END_NAMES, RIGHT_END_NAME};
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, Complex};

type Pair = [f64; 2];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QfaFile {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: Vec<Pair>,
    accepting: Vec<String>,
    rejecting: Vec<String>,
    transitions: BTreeMap<String, Vec<Vec<Pair>>>,
}

fn to_pairs(entries: &[Complex]) -> Vec<Pair> {
    entries.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(pairs: &[Pair]) -> Vec<Complex> {
    pairs.iter().map(|&[re, im]| Complex::new(re, im)).collect()
}

fn matrix_from_file(letter: &str, rows: &[Vec<Pair>]) -> Result<CMatrix> {
    let rows: Vec<Vec<Complex>> = rows.iter().map(|r| from_pairs(r)).collect();
    CMatrix::from_rows(&rows)
        .map_err(|e| Error::InvalidAutomaton(format!("transition for `{letter}`: {e}")))
}

impl QfaSpec {
    pub fn to_json(&self) -> String {
        let mut transitions = BTreeMap::new();
        let mut put = |name: &str, m: &CMatrix| {
            let rows = m.to_rows().iter().map(|r| to_pairs(r)).collect();
            transitions.insert(name.to_string(), rows);
        };
        put(LEFT_END_NAMES[0], &self.left_end);
        for (name, m) in self.alphabet.names().iter().zip(&self.transitions) {
            put(name, m);
        }
        put(RIGHT_END_NAME, &self.right_end);
        let file = QfaFile {
            states: self.states.clone(),
            alphabet: self.alphabet.names().to_vec(),
            initial: to_pairs(self.initial.entries()),
            accepting: self.accepting.clone(),
            rejecting: self.rejecting.clone(),
            transitions,
        };
        serde_json::to_string_pretty(&file).expect("plain data always serializes")
    }

    /// Parses the JSON format. Only structural problems are errors here;
    /// semantic checks are left to [`QfaSpec::validate`].
    pub fn from_json(text: &str) -> Result<QfaSpec> {
        let mut file: QfaFile = serde_json::from_str(text)?;
        let alphabet = Alphabet::new(file.alphabet)?;
        let kappa = LEFT_END_NAMES
            .into_iter()
            .find(|n| file.transitions.contains_key(*n))
            .ok_or_else(|| Error::InvalidAutomaton("no transition for `kappa`".into()))?;
        let mut take = |name: &str| -> Result<CMatrix> {
            let rows = file
                .transitions
                .remove(name)
                .ok_or_else(|| Error::InvalidAutomaton(format!("no transition for `{name}`")))?;
            matrix_from_file(name, &rows)
        };
        let left_end = take(kappa)?;
        let right_end = take(RIGHT_END_NAME)?;
        let transitions = alphabet
            .names()
            .iter()
            .map(|n| take(n))
            .collect::<Result<Vec<_>>>()?;
        drop(take);
        if let Some(extra) = file.transitions.keys().next() {
            return Err(Error::UnknownSymbol(extra.clone()));
        }
        Ok(QfaSpec {
            states: file.states,
            alphabet,
            transitions,
            left_end,
            right_end,
            initial: CVector::from_vec(from_pairs(&file.initial))?,
            accepting: file.accepting,
            rejecting: file.rejecting,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<QfaSpec> {
        QfaSpec::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}
