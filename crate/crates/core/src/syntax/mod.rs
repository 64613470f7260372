//! First-order syntax over a finite relational vocabulary.
//!
//! # Grammar
//!
//! ```text
//! formula := quant | impl
//! quant   := ("forall" | "exists") VAR "." formula
//! impl    := disj [ "->" formula ]
//! disj    := conj { "|" conj }
//! conj    := neg { "&" neg }
//! neg     := "!" neg | atom
//! atom    := "true" | "false" | "(" formula ")" | REL "(" VAR { "," VAR } ")"
//!          | VAR "<" VAR | VAR "<'" VAR | VAR "=" VAR | quant
//! VAR     := [a-z][a-z0-9_]*
//! REL     := [A-Za-z][A-Za-z0-9_<']*
//! ```
//!
//! Quantifiers extend as far to the right as possible. The binary symbols
//! `<` and `<'` are written infix; every other symbol is written in prefix
//! form.

mod enumerate;
mod formula;
mod parse;
mod print;
mod vocabulary;

pub use enumerate::{enumerate_sentences, SentenceEnumerator};
pub use formula::{mk_power, Formula, PowerError, Sentence, SentenceError};
pub use parse::{parse, parse_inferring, parse_sentence, ParseError};
pub use vocabulary::{is_valid_var, Vocabulary, VocabularyError, ORDER, ROW_ORDER};

/// Reserved words that can be neither variables nor relation symbols.
pub const KEYWORDS: [&str; 4] = ["exists", "false", "forall", "true"];
