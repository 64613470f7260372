//! Fragments of first-order logic and the hardness pipeline.
//!
//! A fragment is a decidable set of sentences together with an enumeration
//! covering it and, optionally, a map realizing conjunction inside the
//! fragment. Given such a map, a halting instance `(M, w)` becomes a single
//! fragment sentence: the machine sentence is looked up once per machine,
//! and the input sentence is replaced by a word-equivalent fragment member.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::automata::{word_equiv, AutomataError, Equivalence};
use crate::machine::{Symbol, TmSpec};
use crate::reduction::{build_phi_m, build_phi_x, word_vocabulary};
use crate::solver::{find_model, FindOptions, SolverError};
use crate::structure::{satisfies, Structure};
use crate::syntax::{parse_inferring, Formula, Sentence, SentenceEnumerator, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FragmentError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("candidate power {n} exceeds the size bound {bound}")]
    SizeBound { n: usize, bound: usize },
    #[error("fragment `{0}` has no conjunction map")]
    MissingConjoin(String),
    #[error("no cached machine sentence for machine {0} and the fragment does not contain the machine sentence")]
    MissingCacheEntry(String),
    #[error("cache line {line}: {message}")]
    Cache { line: usize, message: String },
}

type Member = dyn Fn(&Sentence) -> Result<bool, FragmentError> + Send + Sync;
type Enumerate = dyn Fn() -> Box<dyn Iterator<Item = Sentence>> + Send + Sync;
type Conjoin = dyn Fn(&Sentence, &Sentence) -> Sentence + Send + Sync;

#[derive(Clone)]
pub struct FragmentSpec {
    pub name: String,
    member: Arc<Member>,
    enumerate: Arc<Enumerate>,
    conjoin: Option<Arc<Conjoin>>,
}

impl fmt::Debug for FragmentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FragmentSpec")
            .field("name", &self.name)
            .field("conjoin", &self.conjoin.is_some())
            .finish()
    }
}

impl FragmentSpec {
    pub fn new(
        name: impl Into<String>,
        member: impl Fn(&Sentence) -> Result<bool, FragmentError> + Send + Sync + 'static,
        enumerate: impl Fn() -> Box<dyn Iterator<Item = Sentence>> + Send + Sync + 'static,
        conjoin: Option<Arc<Conjoin>>,
    ) -> Self {
        FragmentSpec {
            name: name.into(),
            member: Arc::new(member),
            enumerate: Arc::new(enumerate),
            conjoin,
        }
    }

    /// All sentences over `vocab`, closed under `&`.
    pub fn full_fo(vocab: &Vocabulary) -> Self {
        let vocab = vocab.clone();
        FragmentSpec::new(
            "full-fo",
            |_| Ok(true),
            move || Box::new(SentenceEnumerator::new(&vocab)),
            Some(Arc::new(|a: &Sentence, b: &Sentence| a.and(b))),
        )
    }

    /// `false` together with every power `φ^n` of a sentence `φ` that has a
    /// model of size `n`. Membership fails with a resource error on powers
    /// above `size_bound`.
    pub fn counterexample(vocab: &Vocabulary, size_bound: usize) -> Self {
        let vocab = vocab.clone();
        FragmentSpec::new(
            "counterexample",
            move |s| Ok(counterexample_member(s, size_bound)?.is_member()),
            move || Box::new(SentenceEnumerator::new(&vocab)),
            None,
        )
    }

    /// The empty fragment.
    pub fn reject_all(vocab: &Vocabulary) -> Self {
        let vocab = vocab.clone();
        FragmentSpec::new(
            "reject-all",
            |_| Ok(false),
            move || Box::new(SentenceEnumerator::new(&vocab)),
            None,
        )
    }

    pub fn member(&self, s: &Sentence) -> Result<bool, FragmentError> {
        (self.member)(s)
    }

    pub fn enumerate(&self) -> Box<dyn Iterator<Item = Sentence>> {
        (self.enumerate)()
    }

    pub fn conjoin(&self, a: &Sentence, b: &Sentence) -> Option<Sentence> {
        self.conjoin.as_ref().map(|c| c(a, b))
    }

    pub fn has_conjoin(&self) -> bool {
        self.conjoin.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Translation {
    /// `index` is the enumeration position, or `None` when the input
    /// sentence was itself a member.
    Found { sentence: Sentence, index: Option<usize> },
    Exhausted,
}

/// A fragment sentence equivalent to `s` over nonempty words of `vocab`,
/// searching the first `budget` enumerated sentences.
pub fn translate_over_words(
    frag: &FragmentSpec,
    s: &Sentence,
    vocab: &Vocabulary,
    budget: usize,
) -> Result<Translation, FragmentError> {
    if frag.member(s)? && s.formula().fits(vocab) {
        return Ok(Translation::Found {
            sentence: s.clone(),
            index: None,
        });
    }
    for (i, psi) in frag.enumerate().take(budget).enumerate() {
        if !psi.formula().fits(vocab) || !frag.member(&psi)? {
            continue;
        }
        if word_equiv(&psi, s, vocab)? == Equivalence::Equivalent {
            return Ok(Translation::Found {
                sentence: psi,
                index: Some(i),
            });
        }
    }
    Ok(Translation::Exhausted)
}

/// Ways `s` can be written as `φ ∧ … ∧ φ` (left nested, `n` copies), largest
/// `n` first.
pub fn power_decompositions(s: &Sentence) -> Vec<(usize, Sentence)> {
    let mut spine = Vec::new();
    let mut cur = s.formula();
    while let Formula::And(a, b) = cur {
        spine.push(b.as_ref());
        cur = a;
    }
    // spine holds the right conjuncts from the top down
    let mut out = Vec::new();
    for n in (1..=spine.len() + 1).rev() {
        let mut base = s.formula();
        for _ in 1..n {
            let Formula::And(a, _) = base else { unreachable!() };
            base = a;
        }
        if spine[..n - 1].iter().all(|r| *r == base) {
            let phi = Sentence::new(base.clone()).expect("subformulas of the spine are closed");
            out.push((n, phi));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// `n = 0` marks `false`; otherwise `model` has size `n` and satisfies
    /// the base sentence.
    InFragment { n: usize, model: Option<Structure> },
    NotInFragment,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::InFragment { .. })
    }
}

pub fn counterexample_member(s: &Sentence, size_bound: usize) -> Result<Membership, FragmentError> {
    if *s.formula() == Formula::False {
        return Ok(Membership::InFragment { n: 0, model: None });
    }
    for (n, phi) in power_decompositions(s) {
        if n > size_bound {
            return Err(FragmentError::SizeBound { n, bound: size_bound });
        }
        let vocab = phi
            .formula()
            .infer_vocabulary()
            .expect("sentences have consistent arities");
        if let Some(model) = find_model(&phi, n, &vocab, &FindOptions::default())? {
            return Ok(Membership::InFragment {
                n,
                model: Some(model),
            });
        }
    }
    Ok(Membership::NotInFragment)
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiniteSat {
    Satisfiable(Structure),
    Unsatisfiable,
    NotInFragment,
}

/// Decides finite satisfiability on the counterexample fragment.
pub fn counterexample_finite_sat(s: &Sentence, size_bound: usize) -> Result<FiniteSat, FragmentError> {
    Ok(match counterexample_member(s, size_bound)? {
        Membership::InFragment { model: None, .. } => FiniteSat::Unsatisfiable,
        Membership::InFragment {
            model: Some(model), ..
        } => {
            // φ^n and φ are equivalent
            if !satisfies(&model, s).map_err(SolverError::from)? {
                return Err(SolverError::Unsound.into());
            }
            FiniteSat::Satisfiable(model)
        }
        Membership::NotInFragment => FiniteSat::NotInFragment,
    })
}

/// Hex SHA-256 of the canonical machine text.
pub fn machine_hash(m: &TmSpec) -> String {
    Sha256::digest(m.to_text().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Precomputed fragment sentences for machine sentences, keyed by
/// [`machine_hash`]. One entry per line: `hash<TAB>sentence`; `#` starts a
/// comment line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FragmentCache {
    entries: BTreeMap<String, Sentence>,
}

impl FragmentCache {
    pub fn parse(text: &str) -> Result<Self, FragmentError> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let err = |message: String| FragmentError::Cache {
                line: i + 1,
                message,
            };
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (hash, sentence) = line
                .split_once('\t')
                .ok_or_else(|| err("expected `hash<TAB>sentence`".into()))?;
            let (f, _) = parse_inferring(sentence).map_err(|e| err(e.to_string()))?;
            let s = Sentence::new(f).map_err(|e| err(e.to_string()))?;
            if entries.insert(hash.to_string(), s).is_some() {
                return Err(err(format!("duplicate entry for {hash}")));
            }
        }
        Ok(FragmentCache { entries })
    }

    pub fn insert(&mut self, m: &TmSpec, s: Sentence) {
        self.entries.insert(machine_hash(m), s);
    }

    pub fn get(&self, m: &TmSpec) -> Option<&Sentence> {
        self.entries.get(&machine_hash(m))
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(h, s)| format!("{h}\t{s}\n"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hardness {
    Instance(Sentence),
    Exhausted,
}

/// A fragment sentence that is finitely satisfiable exactly when `m` halts
/// on `input`.
pub fn hardness_instance(
    frag: &FragmentSpec,
    m: &TmSpec,
    input: &[Symbol],
    budget: usize,
    cache: Option<&FragmentCache>,
) -> Result<Hardness, FragmentError> {
    if !frag.has_conjoin() {
        return Err(FragmentError::MissingConjoin(frag.name.clone()));
    }
    let phi_m = match cache.and_then(|c| c.get(m)) {
        Some(s) => s.clone(),
        None => {
            let s = build_phi_m(m);
            if !frag.member(&s)? {
                return Err(FragmentError::MissingCacheEntry(machine_hash(m)));
            }
            s
        }
    };
    let phi_x = build_phi_x(input);
    match translate_over_words(frag, &phi_x, &word_vocabulary(), budget)? {
        Translation::Found { sentence, .. } => Ok(Hardness::Instance(
            frag.conjoin(&phi_m, &sentence).expect("checked above"),
        )),
        Translation::Exhausted => Ok(Hardness::Exhausted),
    }
}
