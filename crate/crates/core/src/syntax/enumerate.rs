//! Canonical enumeration of sentences.
//!
//! Sentences are listed by the character length of their printed form and,
//! within one length, in lexicographic (byte) order of that form. Every
//! sentence over the vocabulary appears exactly once. All sentences of one
//! length are generated and sorted before any of them is returned, so the
//! cost of reaching an index grows with the size of its length tier.

use std::collections::VecDeque;

use super::formula::{Formula, Sentence};
use super::print::{needs_parens, Slot};
use super::vocabulary::{is_infix, Vocabulary};
use super::KEYWORDS;

/// Shape classes sharing one parenthesization rule.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Constant,
    PrefixAtom,
    InfixAtom,
    Not,
    And,
    Or,
    Implies,
    Quantifier,
}

const KINDS: [Kind; 8] = [
    Kind::Constant,
    Kind::PrefixAtom,
    Kind::InfixAtom,
    Kind::Not,
    Kind::And,
    Kind::Or,
    Kind::Implies,
    Kind::Quantifier,
];

fn representative(kind: Kind) -> Formula {
    let x = || "x".to_string();
    let t = || Box::new(Formula::True);
    match kind {
        Kind::Constant => Formula::True,
        Kind::PrefixAtom => Formula::unary("P", "x"),
        Kind::InfixAtom => Formula::Eq(x(), x()),
        Kind::Not => Formula::Not(t()),
        Kind::And => Formula::And(t(), t()),
        Kind::Or => Formula::Or(t(), t()),
        Kind::Implies => Formula::Implies(t(), t()),
        Kind::Quantifier => Formula::Exists(x(), t()),
    }
}

/// Shortest printed form of any formula.
const MIN_LEN: usize = 4;

/// All variable names of exactly `len` characters, in lexicographic order.
fn names_of_len(len: usize) -> Vec<String> {
    if len == 0 {
        return Vec::new();
    }
    let first: Vec<char> = ('a'..='z').collect();
    let rest: Vec<char> = ('0'..='9').chain(std::iter::once('_')).chain('a'..='z').collect();
    let mut out: Vec<String> = first.iter().map(|c| c.to_string()).collect();
    for _ in 1..len {
        let mut next = Vec::with_capacity(out.len() * rest.len());
        for prefix in &out {
            for c in &rest {
                let mut s = prefix.clone();
                s.push(*c);
                next.push(s);
            }
        }
        out = next;
    }
    out.retain(|n| !KEYWORDS.contains(&n.as_str()));
    out
}

struct Generator<'a> {
    vocab: &'a Vocabulary,
    names: Vec<Vec<String>>,
}

impl<'a> Generator<'a> {
    fn new(vocab: &'a Vocabulary) -> Self {
        Generator {
            vocab,
            names: vec![Vec::new()],
        }
    }

    fn names(&mut self, len: usize) -> Vec<String> {
        while self.names.len() <= len {
            let n = self.names.len();
            self.names.push(names_of_len(n));
        }
        self.names[len].clone()
    }

    /// Formulas whose printed form in `slot` has exactly `len` characters and
    /// whose variables all come from `scope`.
    fn gen(&mut self, len: usize, slot: Slot, scope: &[String]) -> Vec<Formula> {
        let mut out = Vec::new();
        for kind in KINDS {
            let inner = if needs_parens(&representative(kind), slot) {
                match len.checked_sub(2) {
                    Some(l) => l,
                    None => continue,
                }
            } else {
                len
            };
            if inner < MIN_LEN {
                continue;
            }
            self.gen_raw(kind, inner, scope, &mut out);
        }
        out
    }

    fn gen_raw(&mut self, kind: Kind, len: usize, scope: &[String], out: &mut Vec<Formula>) {
        match kind {
            Kind::Constant => {
                if len == 4 {
                    out.push(Formula::True);
                }
                if len == 5 {
                    out.push(Formula::False);
                }
            }
            Kind::PrefixAtom => {
                for rel in self.vocab.unary() {
                    for v in scope {
                        if rel.len() + v.len() + 2 == len {
                            out.push(Formula::unary(rel.clone(), v.clone()));
                        }
                    }
                }
                for rel in self.vocab.binary().iter().filter(|r| !is_infix(r)) {
                    for v in scope {
                        for w in scope {
                            if rel.len() + v.len() + w.len() + 4 == len {
                                out.push(Formula::binary(rel.clone(), v.clone(), w.clone()));
                            }
                        }
                    }
                }
            }
            Kind::InfixAtom => {
                for v in scope {
                    for w in scope {
                        let base = v.len() + w.len() + 3;
                        if base == len {
                            out.push(Formula::eq(v.clone(), w.clone()));
                        }
                        for rel in self.vocab.binary().iter().filter(|r| is_infix(r)) {
                            if base + rel.len() - 1 == len {
                                out.push(Formula::binary(rel.clone(), v.clone(), w.clone()));
                            }
                        }
                    }
                }
            }
            Kind::Not => {
                for g in self.gen(len - 1, Slot::NotArg, scope) {
                    out.push(Formula::not(g));
                }
            }
            Kind::And | Kind::Or | Kind::Implies => {
                let (op, left_slot, right_slot) = match kind {
                    Kind::And => (3, Slot::AndLeft, Slot::AndRight),
                    Kind::Or => (3, Slot::OrLeft, Slot::OrRight),
                    _ => (4, Slot::ImpLeft, Slot::Free),
                };
                if len < op + 2 * MIN_LEN {
                    return;
                }
                for l in MIN_LEN..=len - op - MIN_LEN {
                    let lefts = self.gen(l, left_slot, scope);
                    if lefts.is_empty() {
                        continue;
                    }
                    let rights = self.gen(len - op - l, right_slot, scope);
                    for a in &lefts {
                        for b in &rights {
                            out.push(match kind {
                                Kind::And => Formula::and(a.clone(), b.clone()),
                                Kind::Or => Formula::or(a.clone(), b.clone()),
                                _ => Formula::implies(a.clone(), b.clone()),
                            });
                        }
                    }
                }
            }
            Kind::Quantifier => {
                // "forall " + v + ". " + body
                for vlen in 1..len.saturating_sub(9 + MIN_LEN - 1) {
                    let body_len = len - 9 - vlen;
                    for v in self.names(vlen) {
                        let mut inner = scope.to_vec();
                        if !inner.contains(&v) {
                            inner.push(v.clone());
                        }
                        let bodies = self.gen(body_len, Slot::Free, &inner);
                        for b in bodies {
                            out.push(Formula::exists(v.clone(), b.clone()));
                            out.push(Formula::forall(v.clone(), b));
                        }
                    }
                }
            }
        }
    }
}

/// Iterator over all sentences of a vocabulary in canonical order.
pub struct SentenceEnumerator {
    vocab: Vocabulary,
    next_len: usize,
    tier: VecDeque<Sentence>,
}

impl SentenceEnumerator {
    pub fn new(vocab: &Vocabulary) -> Self {
        SentenceEnumerator {
            vocab: vocab.clone(),
            next_len: MIN_LEN,
            tier: VecDeque::new(),
        }
    }

    /// Printed length of the tier currently being returned.
    pub fn current_length(&self) -> usize {
        self.next_len - 1
    }

    fn fill(&mut self) {
        while self.tier.is_empty() {
            let mut gen = Generator::new(&self.vocab);
            let mut tier: Vec<(String, Formula)> = gen
                .gen(self.next_len, Slot::Free, &[])
                .into_iter()
                .map(|f| (f.to_string(), f))
                .collect();
            tier.sort_by(|a, b| a.0.cmp(&b.0));
            debug_assert!(tier.iter().all(|(s, _)| s.len() == self.next_len));
            self.tier = tier
                .into_iter()
                .map(|(_, f)| Sentence::new(f).expect("generated formulas are closed"))
                .collect();
            self.next_len += 1;
        }
    }
}

impl Iterator for SentenceEnumerator {
    type Item = Sentence;

    fn next(&mut self) -> Option<Sentence> {
        self.fill();
        self.tier.pop_front()
    }
}

/// The sentence at position `index` of the canonical enumeration.
pub fn enumerate_sentences(vocab: &Vocabulary, index: usize) -> Sentence {
    SentenceEnumerator::new(vocab)
        .nth(index)
        .expect("the enumeration is infinite")
}
