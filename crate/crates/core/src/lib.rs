pub mod alphabet;
pub mod automata;
pub mod cli;
pub mod bounds;
pub mod detector;
pub mod dfa;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod qfa;
pub mod reproduce;
pub mod subspace;

pub use alphabet::{Alphabet, Symbol, Word};
pub use error::{Error, Result};
