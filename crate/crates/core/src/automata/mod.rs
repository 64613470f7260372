//! Satisfiability and equivalence of first-order sentences over words.
//!
//! Formulas with free variables are read over annotated words: every
//! position carries a base letter together with one bit per free variable
//! (a *track*), and a valid annotation marks exactly one position on every
//! track. A formula is compiled bottom-up into an [`Nfa`] accepting exactly
//! the valid annotated words that satisfy it; quantifiers erase tracks and
//! negation complements via the subset construction.

mod compile;
mod nfa;

pub use compile::{
    formula_to_nfa, word_equiv, word_sat, Compiler, Equivalence, DEFAULT_STATE_CAP,
};
pub use nfa::{LayeredAlphabet, Letter, Nfa};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("symbol `{0}` is not part of a word vocabulary")]
    NotWordVocabulary(String),
    #[error("vocabulary is not a word vocabulary: {0}")]
    BadVocabulary(String),
    #[error("free variable `{0}` has no track")]
    MissingTrack(String),
    #[error("unknown track `{0}`")]
    UnknownTrack(String),
    #[error("track `{0}` is listed twice")]
    DuplicateTrack(String),
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("determinization exceeded the cap of {cap} states")]
    StateCap { cap: usize },
}
