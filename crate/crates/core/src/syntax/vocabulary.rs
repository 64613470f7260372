use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::KEYWORDS;

/// The binary symbol interpreted as the order of a word.
pub const ORDER: &str = "<";
/// The second order used by grid encodings.
pub const ROW_ORDER: &str = "<'";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VocabularyError {
    #[error("invalid relation symbol `{0}`")]
    InvalidName(String),
    #[error("symbol `{0}` is declared both unary and binary")]
    Overlap(String),
    #[error("infix symbol `{0}` can only be binary")]
    InfixUnary(String),
    #[error("symbol `{symbol}` is used with arities {first} and {second}")]
    ConflictingArity {
        symbol: String,
        first: usize,
        second: usize,
    },
}

/// A finite relational vocabulary of unary and binary symbols.
///
/// Names are kept in lexicographic order so that equal vocabularies compare
/// equal regardless of how they were built.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vocabulary {
    unary: BTreeSet<String>,
    binary: BTreeSet<String>,
}

pub(crate) fn is_infix(name: &str) -> bool {
    name == ORDER || name == ROW_ORDER
}

/// Names that can be written in prefix position `R(x, ...)`.
pub(crate) fn is_prefix_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '<' || c == '\'')
        && !KEYWORDS.contains(&name)
}

/// Whether `name` is a legal variable name.
pub fn is_valid_var(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && !KEYWORDS.contains(&name)
}

impl Vocabulary {
    pub fn new<U, B, S, T>(unary: U, binary: B) -> Result<Self, VocabularyError>
    where
        U: IntoIterator<Item = S>,
        B: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut vocab = Vocabulary::default();
        for name in unary {
            vocab.add_unary(name)?;
        }
        for name in binary {
            vocab.add_binary(name)?;
        }
        Ok(vocab)
    }

    /// A word vocabulary: the given letters plus the order `<`.
    pub fn word<I, S>(letters: I) -> Result<Self, VocabularyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(letters, [ORDER])
    }

    pub fn add_unary(&mut self, name: impl Into<String>) -> Result<(), VocabularyError> {
        let name = name.into();
        if is_infix(&name) {
            return Err(VocabularyError::InfixUnary(name));
        }
        if !is_prefix_name(&name) {
            return Err(VocabularyError::InvalidName(name));
        }
        if self.binary.contains(&name) {
            return Err(VocabularyError::Overlap(name));
        }
        self.unary.insert(name);
        Ok(())
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> Result<(), VocabularyError> {
        let name = name.into();
        if !is_infix(&name) && !is_prefix_name(&name) {
            return Err(VocabularyError::InvalidName(name));
        }
        if self.unary.contains(&name) {
            return Err(VocabularyError::Overlap(name));
        }
        self.binary.insert(name);
        Ok(())
    }

    pub fn unary(&self) -> &BTreeSet<String> {
        &self.unary
    }

    pub fn binary(&self) -> &BTreeSet<String> {
        &self.binary
    }

    /// Arity of `name`, if it belongs to the vocabulary.
    pub fn arity(&self, name: &str) -> Option<usize> {
        if self.unary.contains(name) {
            Some(1)
        } else if self.binary.contains(name) {
            Some(2)
        } else {
            None
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arity(name).is_some()
    }

    /// True when every symbol of `self` occurs in `other` with the same arity.
    pub fn is_subset(&self, other: &Vocabulary) -> bool {
        self.unary.is_subset(&other.unary) && self.binary.is_subset(&other.binary)
    }

    pub fn union(&self, other: &Vocabulary) -> Result<Vocabulary, VocabularyError> {
        let mut out = self.clone();
        for u in &other.unary {
            out.add_unary(u.clone())?;
        }
        for b in &other.binary {
            out.add_binary(b.clone())?;
        }
        Ok(out)
    }

    /// A word vocabulary has unary letters and exactly the binary symbol `<`.
    pub fn is_word_vocabulary(&self) -> bool {
        self.binary.len() == 1 && self.binary.contains(ORDER)
    }

    /// All symbols, unary and binary, in lexicographic order.
    pub fn symbols(&self) -> Vec<(&str, usize)> {
        let mut all: Vec<(&str, usize)> = self
            .unary
            .iter()
            .map(|s| (s.as_str(), 1))
            .chain(self.binary.iter().map(|s| (s.as_str(), 2)))
            .collect();
        all.sort();
        all
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unary: Vec<&str> = self.unary.iter().map(String::as_str).collect();
        let binary: Vec<&str> = self.binary.iter().map(String::as_str).collect();
        write!(f, "unary {{{}}} binary {{{}}}", unary.join(", "), binary.join(", "))
    }
}
