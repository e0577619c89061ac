//! Input alphabets and words.
//!
//! Letters are opaque symbols identified by their position in the alphabet.
//! Their printable names are usually single characters (`a`, `b`) but may be
//! multi-character tokens (`b1`, `z2`) for families of automata over larger
//! alphabets; [`Alphabet::parse`] handles both.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a letter in its alphabet.
pub type Symbol = usize;

/// A word over an alphabet, as a sequence of letter indices.
pub type Word = Vec<Symbol>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(char::is_whitespace) || n.contains(',') {
                return Err(Error::InvalidAutomaton(format!("bad letter name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidAutomaton(format!("duplicate letter `{n}`")));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s]
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// True when every letter name is a single character.
    pub fn is_single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word. Single-character alphabets read the text character by
    /// character (whitespace ignored); otherwise letters are whitespace
    /// separated tokens.
    pub fn parse(&self, text: &str) -> Result<Word> {
        if self.is_single_char() {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| self.symbol(c.encode_utf8(&mut [0; 4])))
                .collect()
        } else {
            text.split_whitespace().map(|t| self.symbol(t)).collect()
        }
    }

    /// Inverse of [`Alphabet::parse`].
    pub fn format(&self, word: &[Symbol]) -> String {
        let sep = if self.is_single_char() { "" } else { " " };
        word.iter()
            .map(|&s| self.names[s].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Display wrapper that prints `ε` for the empty word.
    pub fn display<'a>(&'a self, word: &'a [Symbol]) -> DisplayWord<'a> {
        DisplayWord {
            alphabet: self,
            word,
        }
    }
}

pub struct DisplayWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a [Symbol],
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{}", self.alphabet.format(self.word))
        }
    }
}

/// All words over an alphabet of `size` letters with length `≤ max_len`, in
/// shortlex order (the empty word first).
pub fn enumerate_words(size: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * size);
        for w in &layer {
            for s in 0..size {
                let mut x = w.clone();
                x.push(s);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
