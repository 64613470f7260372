//! A workbench for first-order logic over finite structures.
//!
//! The crate is organised bottom-up:
//!
//! - [`syntax`]: vocabularies, formulas, the parser/printer and a canonical
//!   enumeration of sentences.
//! - [`structure`]: finite relational structures, words and model checking.
//! - [`automata`]: compilation of formulas over words into finite automata,
//!   giving decision procedures for satisfiability and equivalence over words.
//! - [`machine`]: deterministic single-tape Turing machines and a simulator.
//! - [`reduction`]: sentences whose finite models are grid encodings of
//!   halting runs, plus decoding of such models back into runs.
//! - [`solver`]: bounded finite model finding by grounding and DPLL search.
//! - [`fragment`]: fragments of first-order logic as values, translation over
//!   words, and the power-conjunction fragment with decidable finite
//!   satisfiability.

pub mod automata;
pub mod fragment;
pub mod machine;
pub mod reduction;
pub mod solver;
pub mod structure;
pub mod syntax;

pub use syntax::{Formula, Sentence, Vocabulary};
