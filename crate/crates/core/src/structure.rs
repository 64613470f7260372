//! Finite relational structures, words, and first-order satisfaction.
//!
//! Domains are `{0, ..., N-1}` with `N >= 1`. A [`Word`] is the special case
//! where `<` is a strict total order and every element carries exactly one
//! unary letter.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Formula, Sentence, Vocabulary, ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("structures must have a nonempty domain")]
    EmptyDomain,
    #[error("symbol `{0}` is not part of the structure")]
    UnknownSymbol(String),
    #[error("element {element} is outside a domain of size {size}")]
    OutOfRange { element: usize, size: usize },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("a word vocabulary needs exactly the binary symbol `<`, found {0}")]
    NotWordVocabulary(String),
    #[error("letter `{0}` is not a unary symbol of the vocabulary")]
    UnknownLetter(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` is free and unassigned")]
    UnboundVariable(String),
    #[error("symbol `{0}` is not interpreted by the structure")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has arity {expected} but is applied to {found} argument(s)")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{var}` is assigned {element}, outside a domain of size {size}")]
    OutOfRange {
        var: String,
        element: usize,
        size: usize,
    },
}

/// A finite structure over domain `{0, ..., size-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    size: usize,
    unary: BTreeMap<String, Vec<bool>>,
    // row-major size x size
    binary: BTreeMap<String, Vec<bool>>,
}

impl Structure {
    /// A structure with every relation of `vocab` empty.
    pub fn new(size: usize, vocab: &Vocabulary) -> Result<Self, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        Ok(Structure {
            size,
            unary: vocab
                .unary()
                .iter()
                .map(|u| (u.clone(), vec![false; size]))
                .collect(),
            binary: vocab
                .binary()
                .iter()
                .map(|b| (b.clone(), vec![false; size * size]))
                .collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary::new(self.unary.keys().cloned(), self.binary.keys().cloned())
            .expect("structure symbols form a vocabulary")
    }

    fn check(&self, e: usize) -> Result<(), StructureError> {
        if e < self.size {
            Ok(())
        } else {
            Err(StructureError::OutOfRange {
                element: e,
                size: self.size,
            })
        }
    }

    pub fn set_unary(&mut self, rel: &str, e: usize, value: bool) -> Result<(), StructureError> {
        self.check(e)?;
        let table = self
            .unary
            .get_mut(rel)
            .ok_or_else(|| StructureError::UnknownSymbol(rel.to_string()))?;
        table[e] = value;
        Ok(())
    }

    pub fn set_binary(
        &mut self,
        rel: &str,
        a: usize,
        b: usize,
        value: bool,
    ) -> Result<(), StructureError> {
        self.check(a)?;
        self.check(b)?;
        let n = self.size;
        let table = self
            .binary
            .get_mut(rel)
            .ok_or_else(|| StructureError::UnknownSymbol(rel.to_string()))?;
        table[a * n + b] = value;
        Ok(())
    }

    /// Membership of `e` in unary `rel`; false for unknown symbols.
    pub fn holds_unary(&self, rel: &str, e: usize) -> bool {
        self.unary.get(rel).is_some_and(|t| t.get(e) == Some(&true))
    }

    /// Membership of `(a, b)` in binary `rel`; false for unknown symbols.
    pub fn holds_binary(&self, rel: &str, a: usize, b: usize) -> bool {
        a < self.size
            && b < self.size
            && self
                .binary
                .get(rel)
                .is_some_and(|t| t[a * self.size + b])
    }

    pub fn unary_elements(&self, rel: &str) -> Option<Vec<usize>> {
        self.unary
            .get(rel)
            .map(|t| (0..self.size).filter(|&i| t[i]).collect())
    }

    pub fn binary_pairs(&self, rel: &str) -> Option<Vec<(usize, usize)>> {
        let n = self.size;
        self.binary.get(rel).map(|t| {
            (0..n * n)
                .filter(|&k| t[k])
                .map(|k| (k / n, k % n))
                .collect()
        })
    }

    /// The image of the structure under the bijection `i -> perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Structure {
        assert_eq!(perm.len(), self.size, "permutation has the wrong length");
        let n = self.size;
        let mut out = self.clone();
        for (name, table) in &self.unary {
            let dst = out.unary.get_mut(name).unwrap();
            for i in 0..n {
                dst[perm[i]] = table[i];
            }
        }
        for (name, table) in &self.binary {
            let dst = out.binary.get_mut(name).unwrap();
            for a in 0..n {
                for b in 0..n {
                    dst[perm[a] * n + perm[b]] = table[a * n + b];
                }
            }
        }
        out
    }

    /// Same domain, only the relations named in `vocab`.
    pub fn restrict(&self, vocab: &Vocabulary) -> Result<Structure, StructureError> {
        let mut out = Structure {
            size: self.size,
            unary: BTreeMap::new(),
            binary: BTreeMap::new(),
        };
        for u in vocab.unary() {
            let t = self
                .unary
                .get(u)
                .ok_or_else(|| StructureError::UnknownSymbol(u.clone()))?;
            out.unary.insert(u.clone(), t.clone());
        }
        for b in vocab.binary() {
            let t = self
                .binary
                .get(b)
                .ok_or_else(|| StructureError::UnknownSymbol(b.clone()))?;
            out.binary.insert(b.clone(), t.clone());
        }
        Ok(out)
    }

    /// Renders the line-based text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("size {}\n", self.size);
        for name in self.unary.keys() {
            let elems = self.unary_elements(name).unwrap();
            out.push_str(name);
            out.push(':');
            for e in elems {
                out.push_str(&format!(" {e}"));
            }
            out.push('\n');
        }
        for name in self.binary.keys() {
            let pairs = self.binary_pairs(name).unwrap();
            out.push_str(name);
            out.push(':');
            for (a, b) in pairs {
                out.push_str(&format!(" ({a},{b})"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format. Arities come from `vocab` when given; otherwise
    /// they are read off the entries, and an empty relation is binary only if
    /// it is `<` or `<'`.
    pub fn from_text(text: &str, vocab: Option<&Vocabulary>) -> Result<Structure, StructureError> {
        let bad = |line: usize, message: String| StructureError::Format { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (first_no, first) = lines
            .next()
            .ok_or_else(|| bad(1, "missing `size N` header".into()))?;
        let size: usize = first
            .strip_prefix("size ")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| bad(first_no, format!("expected `size N`, found `{first}`")))?;
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        let mut unary: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut binary: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
        for (no, line) in lines {
            let (name, rest) = line
                .split_once(':')
                .ok_or_else(|| bad(no, format!("expected `NAME: ...`, found `{line}`")))?;
            let name = name.trim().to_string();
            let rest = rest.trim();
            let arity = match vocab.and_then(|v| v.arity(&name)) {
                Some(k) => k,
                None if vocab.is_some() => {
                    return Err(StructureError::UnknownSymbol(name));
                }
                None if rest.starts_with('(') => 2,
                None if rest.is_empty() && (name == ORDER || name == crate::syntax::ROW_ORDER) => 2,
                None => 1,
            };
            if unary.contains_key(&name) || binary.contains_key(&name) {
                return Err(bad(no, format!("relation `{name}` listed twice")));
            }
            let parse_elem = |s: &str| -> Result<usize, StructureError> {
                let e: usize = s
                    .trim()
                    .parse()
                    .map_err(|_| bad(no, format!("bad element `{s}`")))?;
                if e >= size {
                    return Err(StructureError::OutOfRange { element: e, size });
                }
                Ok(e)
            };
            if arity == 1 {
                let elems = rest
                    .split_whitespace()
                    .map(parse_elem)
                    .collect::<Result<Vec<_>, _>>()?;
                unary.insert(name, elems);
            } else {
                let mut pairs = Vec::new();
                for item in rest.split_whitespace() {
                    let inner = item
                        .strip_prefix('(')
                        .and_then(|s| s.strip_suffix(')'))
                        .ok_or_else(|| bad(no, format!("bad pair `{item}`")))?;
                    let (a, b) = inner
                        .split_once(',')
                        .ok_or_else(|| bad(no, format!("bad pair `{item}`")))?;
                    pairs.push((parse_elem(a)?, parse_elem(b)?));
                }
                binary.insert(name, pairs);
            }
        }
        let vocab = match vocab {
            Some(v) => v.clone(),
            None => Vocabulary::new(unary.keys().cloned(), binary.keys().cloned())
                .map_err(|e| bad(1, e.to_string()))?,
        };
        let mut s = Structure::new(size, &vocab)?;
        for (name, elems) in unary {
            for e in elems {
                s.set_unary(&name, e, true)?;
            }
        }
        for (name, pairs) in binary {
            for (a, b) in pairs {
                s.set_binary(&name, a, b, true)?;
            }
        }
        Ok(s)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Values for the free variables of a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, usize>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: impl Into<String>, element: usize) -> Self {
        self.0.insert(var.into(), element);
        self
    }

    pub fn set(&mut self, var: impl Into<String>, element: usize) {
        self.0.insert(var.into(), element);
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

// Formula with variables resolved to environment slots and symbols to tables.
enum Node<'s> {
    Const(bool),
    Unary(&'s [bool], usize),
    Binary(&'s [bool], usize, usize),
    Eq(usize, usize),
    Not(Box<Node<'s>>),
    And(Box<Node<'s>>, Box<Node<'s>>),
    Or(Box<Node<'s>>, Box<Node<'s>>),
    Implies(Box<Node<'s>>, Box<Node<'s>>),
    Exists(usize, Box<Node<'s>>),
    Forall(usize, Box<Node<'s>>),
}

struct Resolver<'s> {
    s: &'s Structure,
    scope: Vec<(String, usize)>,
    free: HashMap<String, usize>,
    slots: usize,
}

impl<'s> Resolver<'s> {
    fn var(&mut self, v: &str) -> usize {
        if let Some((_, slot)) = self.scope.iter().rev().find(|(n, _)| n == v) {
            return *slot;
        }
        if let Some(&slot) = self.free.get(v) {
            return slot;
        }
        let slot = self.slots;
        self.slots += 1;
        self.free.insert(v.to_string(), slot);
        slot
    }

    fn resolve(&mut self, f: &Formula) -> Result<Node<'s>, EvalError> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom { rel, args } => {
                let s = self.s;
                if let Some(t) = s.unary.get(rel) {
                    if args.len() != 1 {
                        return Err(EvalError::Arity {
                            symbol: rel.clone(),
                            expected: 1,
                            found: args.len(),
                        });
                    }
                    Node::Unary(t, self.var(&args[0]))
                } else if let Some(t) = s.binary.get(rel) {
                    if args.len() != 2 {
                        return Err(EvalError::Arity {
                            symbol: rel.clone(),
                            expected: 2,
                            found: args.len(),
                        });
                    }
                    Node::Binary(t, self.var(&args[0]), self.var(&args[1]))
                } else {
                    return Err(EvalError::UnknownSymbol(rel.clone()));
                }
            }
            Formula::Eq(x, y) => Node::Eq(self.var(x), self.var(y)),
            Formula::Not(g) => Node::Not(Box::new(self.resolve(g)?)),
            Formula::And(a, b) => Node::And(Box::new(self.resolve(a)?), Box::new(self.resolve(b)?)),
            Formula::Or(a, b) => Node::Or(Box::new(self.resolve(a)?), Box::new(self.resolve(b)?)),
            Formula::Implies(a, b) => {
                Node::Implies(Box::new(self.resolve(a)?), Box::new(self.resolve(b)?))
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((v.clone(), slot));
                let body = Box::new(self.resolve(g)?);
                self.scope.pop();
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(slot, body)
                } else {
                    Node::Forall(slot, body)
                }
            }
        })
    }
}

fn run(node: &Node<'_>, n: usize, env: &mut [usize]) -> bool {
    match node {
        Node::Const(b) => *b,
        Node::Unary(t, x) => t[env[*x]],
        Node::Binary(t, x, y) => t[env[*x] * n + env[*y]],
        Node::Eq(x, y) => env[*x] == env[*y],
        Node::Not(g) => !run(g, n, env),
        Node::And(a, b) => run(a, n, env) && run(b, n, env),
        Node::Or(a, b) => run(a, n, env) || run(b, n, env),
        Node::Implies(a, b) => !run(a, n, env) || run(b, n, env),
        Node::Exists(slot, g) => (0..n).any(|e| {
            env[*slot] = e;
            run(g, n, env)
        }),
        Node::Forall(slot, g) => (0..n).all(|e| {
            env[*slot] = e;
            run(g, n, env)
        }),
    }
}

/// Tarskian satisfaction of `f` in `s` under `a`.
pub fn eval(f: &Formula, s: &Structure, a: &Assignment) -> Result<bool, EvalError> {
    let mut r = Resolver {
        s,
        scope: Vec::new(),
        free: HashMap::new(),
        slots: 0,
    };
    let node = r.resolve(f)?;
    let mut env = vec![0; r.slots];
    for (v, slot) in &r.free {
        let e = a
            .get(v)
            .ok_or_else(|| EvalError::UnboundVariable(v.clone()))?;
        if e >= s.size {
            return Err(EvalError::OutOfRange {
                var: v.clone(),
                element: e,
                size: s.size,
            });
        }
        env[*slot] = e;
    }
    Ok(run(&node, s.size, &mut env))
}

/// Truth of a sentence in `s`.
pub fn satisfies(s: &Structure, sentence: &Sentence) -> Result<bool, EvalError> {
    eval(sentence.formula(), s, &Assignment::new())
}

/// A finite sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<String>);

impl Word {
    pub fn new<I, S>(letters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Word(letters.into_iter().map(Into::into).collect())
    }

    pub fn letters(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

fn require_word_vocabulary(vocab: &Vocabulary) -> Result<(), StructureError> {
    if vocab.is_word_vocabulary() {
        Ok(())
    } else {
        let names: Vec<&str> = vocab.binary().iter().map(String::as_str).collect();
        Err(StructureError::NotWordVocabulary(format!("{{{}}}", names.join(", "))))
    }
}

/// The structure of `w`: positions ordered naturally, letters as unary relations.
pub fn word_to_structure(w: &Word, vocab: &Vocabulary) -> Result<Structure, StructureError> {
    require_word_vocabulary(vocab)?;
    let mut s = Structure::new(w.len(), vocab)?;
    for (i, letter) in w.0.iter().enumerate() {
        if !vocab.unary().contains(letter) {
            return Err(StructureError::UnknownLetter(letter.clone()));
        }
        s.set_unary(letter, i, true)?;
        for j in i + 1..w.len() {
            s.set_binary(ORDER, i, j, true)?;
        }
    }
    Ok(s)
}

/// Whether `<` is a strict total order and the letters partition the domain.
pub fn is_word(s: &Structure) -> Result<bool, StructureError> {
    require_word_vocabulary(&s.vocabulary())?;
    Ok(is_strict_total_order(s, ORDER) && letters_partition(s))
}

pub(crate) fn is_strict_total_order(s: &Structure, rel: &str) -> bool {
    let n = s.size;
    let lt = |a, b| s.holds_binary(rel, a, b);
    for a in 0..n {
        if lt(a, a) {
            return false;
        }
        for b in 0..n {
            if a != b && lt(a, b) == lt(b, a) {
                return false;
            }
            for c in 0..n {
                if lt(a, b) && lt(b, c) && !lt(a, c) {
                    return false;
                }
            }
        }
    }
    true
}

fn letters_partition(s: &Structure) -> bool {
    (0..s.size).all(|e| s.unary.values().filter(|t| t[e]).count() == 1)
}

/// Elements of `s` listed in increasing `rel`-order; `rel` must be a strict
/// total order.
pub(crate) fn sorted_by(s: &Structure, rel: &str) -> Vec<usize> {
    let mut elems: Vec<usize> = (0..s.size).collect();
    elems.sort_by_key(|&e| (0..s.size).filter(|&d| s.holds_binary(rel, d, e)).count());
    elems
}

/// Reads the letters of a word structure in `<`-order.
pub fn structure_to_word(s: &Structure) -> Result<Option<Word>, StructureError> {
    if !is_word(s)? {
        return Ok(None);
    }
    let letters = sorted_by(s, ORDER)
        .into_iter()
        .map(|e| {
            s.unary
                .iter()
                .find(|(_, t)| t[e])
                .map(|(name, _)| name.clone())
                .expect("letters partition the domain")
        })
        .collect();
    Ok(Some(Word(letters)))
}

/// Irreflexivity, transitivity and totality of `rel`.
pub fn strict_total_order(rel: &str) -> Formula {
    let lt = |a: &str, b: &str| Formula::binary(rel, a, b);
    let irreflexive = Formula::forall("x", Formula::not(lt("x", "x")));
    let transitive = Formula::forall_many(
        ["x", "y", "z"],
        Formula::implies(Formula::and(lt("x", "y"), lt("y", "z")), lt("x", "z")),
    );
    let total = Formula::forall_many(
        ["x", "y"],
        Formula::or_all([lt("x", "y"), Formula::eq("x", "y"), lt("y", "x")]),
    );
    Formula::and_all([irreflexive, transitive, total])
}

/// Every element satisfies exactly one of `symbols`.
pub fn exactly_one_of<S: AsRef<str>>(symbols: &[S]) -> Formula {
    let at_least = Formula::or_all(symbols.iter().map(|l| Formula::unary(l.as_ref(), "x")));
    let mut parts = vec![at_least];
    for (i, a) in symbols.iter().enumerate() {
        for b in &symbols[i + 1..] {
            parts.push(Formula::not(Formula::and(
                Formula::unary(a.as_ref(), "x"),
                Formula::unary(b.as_ref(), "x"),
            )));
        }
    }
    Formula::forall("x", Formula::and_all(parts))
}

/// The sentence whose finite models are exactly the words over `vocab`.
pub fn word_axioms(vocab: &Vocabulary) -> Sentence {
    let letters: Vec<&String> = vocab.unary().iter().collect();
    let f = Formula::and(strict_total_order(ORDER), exactly_one_of(&letters));
    Sentence::new(f).expect("axioms are closed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn zoe() -> Vocabulary {
        Vocabulary::word(["E", "O", "Z"]).unwrap()
    }

    #[test]
    fn word_structure_layout() {
        let s = word_to_structure(&Word::new(["Z", "O", "E"]), &zoe()).unwrap();
        assert_eq!(s.size(), 3);
        assert_eq!(s.unary_elements("Z").unwrap(), [0]);
        assert_eq!(s.unary_elements("O").unwrap(), [1]);
        assert_eq!(s.unary_elements("E").unwrap(), [2]);
        assert_eq!(s.binary_pairs("<").unwrap(), [(0, 1), (0, 2), (1, 2)]);
        assert!(is_word(&s).unwrap());
    }

    #[test]
    fn empty_word_is_rejected() {
        assert_eq!(
            word_to_structure(&Word::default(), &zoe()),
            Err(StructureError::EmptyDomain)
        );
        assert_eq!(
            word_to_structure(&Word::new(["Q"]), &zoe()),
            Err(StructureError::UnknownLetter("Q".into()))
        );
    }

    #[test]
    fn eval_examples() {
        let vocab = Vocabulary::new(Vec::<String>::new(), ["<"]).unwrap();
        let mut s = Structure::new(2, &vocab).unwrap();
        s.set_binary("<", 0, 1, true).unwrap();
        let t = parse("true", &vocab).unwrap();
        assert!(eval(&t, &s, &Assignment::new()).unwrap());
        let f = parse("forall x. exists y. x < y", &vocab).unwrap();
        assert!(!eval(&f, &s, &Assignment::new()).unwrap());
        let g = parse("x < y", &vocab).unwrap();
        let a = Assignment::new().with("x", 0).with("y", 1);
        assert!(eval(&g, &s, &a).unwrap());
        assert_eq!(
            eval(&g, &s, &Assignment::new().with("x", 0)),
            Err(EvalError::UnboundVariable("y".into()))
        );
        let h = Formula::unary("Q", "x");
        assert_eq!(
            eval(&h, &s, &Assignment::new().with("x", 0)),
            Err(EvalError::UnknownSymbol("Q".into()))
        );
    }

    #[test]
    fn word_axioms_hold_on_words() {
        let s = word_to_structure(&Word::new(["Z", "O", "E"]), &zoe()).unwrap();
        assert!(satisfies(&s, &word_axioms(&zoe())).unwrap());
        let mut broken = s.clone();
        broken.set_unary("O", 0, true).unwrap();
        assert!(!satisfies(&broken, &word_axioms(&zoe())).unwrap());
        assert!(!is_word(&broken).unwrap());
    }

    #[test]
    fn is_word_failures() {
        let v = Vocabulary::word(["O", "Z"]).unwrap();
        let mut s = Structure::new(2, &v).unwrap();
        s.set_unary("Z", 0, true).unwrap();
        s.set_unary("O", 1, true).unwrap();
        assert!(!is_word(&s).unwrap(), "empty order is not total");
        s.set_binary("<", 0, 1, true).unwrap();
        assert!(is_word(&s).unwrap());
        s.set_unary("O", 0, true).unwrap();
        assert!(!is_word(&s).unwrap(), "element in two letters");
        let grid = Vocabulary::new(["Z"], ["<", "<'"]).unwrap();
        assert!(matches!(
            is_word(&Structure::new(1, &grid).unwrap()),
            Err(StructureError::NotWordVocabulary(_))
        ));
    }

    #[test]
    fn restriction() {
        let grid = Vocabulary::new(["E", "O", "Z"], ["<", "<'", "P_one"]).unwrap();
        let mut s = Structure::new(2, &grid).unwrap();
        s.set_binary("<'", 1, 0, true).unwrap();
        s.set_binary("<", 0, 1, true).unwrap();
        s.set_unary("E", 0, true).unwrap();
        s.set_unary("E", 1, true).unwrap();
        let r = s.restrict(&zoe()).unwrap();
        assert_eq!(r.vocabulary(), zoe());
        assert!(is_word(&r).unwrap());
        assert_eq!(s.restrict(&grid).unwrap(), s);
        let other = Vocabulary::new(["Q"], Vec::<String>::new()).unwrap();
        assert_eq!(
            s.restrict(&other),
            Err(StructureError::UnknownSymbol("Q".into()))
        );
    }

    #[test]
    fn text_format() {
        let s = word_to_structure(&Word::new(["Z", "O", "E"]), &zoe()).unwrap();
        let text = s.to_text();
        assert_eq!(
            text,
            "size 3\nE: 2\nO: 1\nZ: 0\n<: (0,1) (0,2) (1,2)\n"
        );
        assert_eq!(Structure::from_text(&text, None).unwrap(), s);
        assert_eq!(Structure::from_text(&text, Some(&zoe())).unwrap(), s);
        let v = Vocabulary::new(["P"], ["R"]).unwrap();
        let empty = Structure::new(2, &v).unwrap();
        assert_eq!(empty.to_text(), "size 2\nP:\nR:\n");
        assert_eq!(Structure::from_text(&empty.to_text(), Some(&v)).unwrap(), empty);
        assert!(matches!(
            Structure::from_text("size 2\nP: 5\n", None),
            Err(StructureError::OutOfRange { element: 5, size: 2 })
        ));
        assert!(matches!(
            Structure::from_text("sz 2\n", None),
            Err(StructureError::Format { line: 1, .. })
        ));
    }

    #[test]
    fn permutation_moves_tuples() {
        let s = word_to_structure(&Word::new(["Z", "O"]), &Vocabulary::word(["O", "Z"]).unwrap()).unwrap();
        let p = s.permute(&[1, 0]);
        assert_eq!(p.unary_elements("Z").unwrap(), [1]);
        assert_eq!(p.binary_pairs("<").unwrap(), [(1, 0)]);
        assert_eq!(structure_to_word(&p).unwrap(), Some(Word::new(["Z", "O"])));
    }
}
