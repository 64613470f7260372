use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::vocabulary::{Vocabulary, VocabularyError};

/// First-order formula over a relational vocabulary with equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom { rel: String, args: Vec<String> },
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom<R, I, S>(rel: R, args: I) -> Formula
    where
        R: Into<String>,
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Formula::Atom {
            rel: rel.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn unary(rel: impl Into<String>, x: impl Into<String>) -> Formula {
        Formula::Atom {
            rel: rel.into(),
            args: vec![x.into()],
        }
    }

    pub fn binary(rel: impl Into<String>, x: impl Into<String>, y: impl Into<String>) -> Formula {
        Formula::Atom {
            rel: rel.into(),
            args: vec![x.into(), y.into()],
        }
    }

    pub fn eq(x: impl Into<String>, y: impl Into<String>) -> Formula {
        Formula::Eq(x.into(), y.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, f: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(f))
    }

    pub fn forall(v: impl Into<String>, f: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(f))
    }

    /// Quantifies `vars` existentially, outermost first.
    pub fn exists_many<I, S>(vars: I, f: Formula) -> Formula
    where
        I: IntoIterator<Item = S>,
        I::IntoIter: DoubleEndedIterator,
        S: Into<String>,
    {
        vars.into_iter().rev().fold(f, |acc, v| Formula::exists(v, acc))
    }

    /// Quantifies `vars` universally, outermost first.
    pub fn forall_many<I, S>(vars: I, f: Formula) -> Formula
    where
        I: IntoIterator<Item = S>,
        I::IntoIter: DoubleEndedIterator,
        S: Into<String>,
    {
        vars.into_iter().rev().fold(f, |acc, v| Formula::forall(v, acc))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn and_all<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn or_all<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut note = |v: &'a String, bound: &Vec<&'a str>| {
            if !bound.contains(&v.as_str()) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { args, .. } => {
                for a in args {
                    note(a, bound);
                }
            }
            Formula::Eq(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Relation symbols with the arities they are used at.
    pub fn symbols(&self) -> Result<BTreeMap<String, usize>, VocabularyError> {
        let mut out = BTreeMap::new();
        self.collect_symbols(&mut out)?;
        Ok(out)
    }

    fn collect_symbols(&self, out: &mut BTreeMap<String, usize>) -> Result<(), VocabularyError> {
        match self {
            Formula::Atom { rel, args } => match out.get(rel) {
                Some(&k) if k != args.len() => Err(VocabularyError::ConflictingArity {
                    symbol: rel.clone(),
                    first: k,
                    second: args.len(),
                }),
                _ => {
                    out.insert(rel.clone(), args.len());
                    Ok(())
                }
            },
            Formula::True | Formula::False | Formula::Eq(..) => Ok(()),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => {
                f.collect_symbols(out)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_symbols(out)?;
                b.collect_symbols(out)
            }
        }
    }

    /// The smallest vocabulary containing every symbol used in the formula.
    pub fn infer_vocabulary(&self) -> Result<Vocabulary, VocabularyError> {
        let mut vocab = Vocabulary::default();
        for (name, arity) in self.symbols()? {
            match arity {
                1 => vocab.add_unary(name)?,
                2 => vocab.add_binary(name)?,
                k => {
                    return Err(VocabularyError::ConflictingArity {
                        symbol: name,
                        first: k,
                        second: k,
                    })
                }
            }
        }
        Ok(vocab)
    }

    /// Whether every atom uses a symbol of `vocab` at its declared arity.
    pub fn fits(&self, vocab: &Vocabulary) -> bool {
        match self.symbols() {
            Ok(syms) => syms.iter().all(|(s, &k)| vocab.arity(s) == Some(k)),
            Err(_) => false,
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SentenceError {
    #[error("formula has free variables: {}", .0.iter().cloned().collect::<Vec<_>>().join(", "))]
    FreeVariables(BTreeSet<String>),
}

/// A formula without free variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sentence(Formula);

impl Sentence {
    pub fn new(formula: Formula) -> Result<Self, SentenceError> {
        let free = formula.free_vars();
        if free.is_empty() {
            Ok(Sentence(formula))
        } else {
            Err(SentenceError::FreeVariables(free))
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    /// Conjunction of two sentences is again a sentence.
    pub fn and(&self, other: &Sentence) -> Sentence {
        Sentence(Formula::and(self.0.clone(), other.0.clone()))
    }

    pub fn falsum() -> Sentence {
        Sentence(Formula::False)
    }

    pub fn verum() -> Sentence {
        Sentence(Formula::True)
    }
}

impl TryFrom<Formula> for Sentence {
    type Error = SentenceError;

    fn try_from(f: Formula) -> Result<Self, Self::Error> {
        Sentence::new(f)
    }
}

impl AsRef<Formula> for Sentence {
    fn as_ref(&self) -> &Formula {
        &self.0
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("power exponent must be at least 1")]
pub struct PowerError;

/// The left-nested `n`-fold conjunction `((phi & phi) & ...) & phi`.
pub fn mk_power(phi: &Sentence, n: usize) -> Result<Sentence, PowerError> {
    if n == 0 {
        return Err(PowerError);
    }
    let f = phi.formula();
    let mut acc = f.clone();
    for _ in 1..n {
        acc = Formula::and(acc, f.clone());
    }
    Ok(Sentence(acc))
}
