//! Finite model finding by grounding and propositional search.
//!
//! A sentence is expanded over a domain `{0, …, n-1}`, each ground atom
//! becomes a propositional variable, and the expansion is clausified with one
//! auxiliary variable per distinct conjunction (disjunctions are negated
//! conjunctions). The clause set is decided by a backtracking search with
//! unit propagation on two watched literals per clause.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::structure::{satisfies, EvalError, Structure};
use crate::syntax::{Formula, Sentence, Vocabulary, ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("domain size must be positive")]
    EmptyDomain,
    #[error("conflict budget of {0} exhausted")]
    Budget(u64),
    #[error("sentence uses `{0}`, which is not in the vocabulary")]
    UnknownSymbol(String),
    #[error("`{0}` cannot be fixed as an order: it is not a binary symbol of the vocabulary")]
    NoOrder(String),
    #[error("model check failed: {0}")]
    Eval(#[from] EvalError),
    #[error("solver returned a structure that is not a model")]
    Unsound,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub symbol: String,
    pub args: Vec<usize>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
        write!(f, "{}({})", self.symbol, args.join(","))
    }
}

/// Clauses over variables `1..=num_vars`; variable `i` for `i <= atoms.len()`
/// stands for `atoms[i - 1]`, the rest are auxiliary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseSet {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    pub atoms: Vec<GroundAtom>,
}

impl ClauseSet {
    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.atoms.iter().enumerate() {
            out += &format!("c {} {}\n", i + 1, a);
        }
        out += &format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out += &format!("{l} ");
            }
            out += "0\n";
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FindOptions {
    /// Interpret `<` as the natural order of the domain. Sound only for
    /// sentences that force `<` to be a strict total order.
    pub fix_order: bool,
    pub conflict_budget: Option<u64>,
}

/// Formula with variables resolved to environment slots.
enum Node {
    Const(bool),
    Atom { base: usize, slots: Vec<usize> },
    FixedLess(usize, usize),
    Eq(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Lit {
    Const(bool),
    Var(i32),
}

impl Lit {
    fn negate(self) -> Lit {
        match self {
            Lit::Const(b) => Lit::Const(!b),
            Lit::Var(v) => Lit::Var(-v),
        }
    }
}

struct Grounder {
    n: usize,
    next_var: i32,
    clauses: Vec<Vec<i32>>,
    conj: HashMap<Vec<i32>, i32>,
}

impl Grounder {
    fn and(&mut self, parts: impl IntoIterator<Item = Lit>) -> Lit {
        let mut lits = Vec::new();
        for p in parts {
            match p {
                Lit::Const(false) => return Lit::Const(false),
                Lit::Const(true) => {}
                Lit::Var(v) => lits.push(v),
            }
        }
        lits.sort_unstable_by_key(|l| (l.abs(), *l));
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == -w[1]) {
            return Lit::Const(false);
        }
        match lits.len() {
            0 => Lit::Const(true),
            1 => Lit::Var(lits[0]),
            _ => {
                if let Some(&v) = self.conj.get(&lits) {
                    return Lit::Var(v);
                }
                let v = self.next_var;
                self.next_var += 1;
                let mut back = vec![v];
                for &l in &lits {
                    self.clauses.push(vec![-v, l]);
                    back.push(-l);
                }
                self.clauses.push(back);
                self.conj.insert(lits, v);
                Lit::Var(v)
            }
        }
    }

    fn ground(&mut self, node: &Node, env: &mut [usize]) -> Lit {
        match node {
            Node::Const(b) => Lit::Const(*b),
            Node::Atom { base, slots } => {
                let offset = slots.iter().fold(0, |acc, &s| acc * self.n + env[s]);
                Lit::Var((base + offset + 1) as i32)
            }
            Node::FixedLess(a, b) => Lit::Const(env[*a] < env[*b]),
            Node::Eq(a, b) => Lit::Const(env[*a] == env[*b]),
            Node::Not(g) => self.ground(g, env).negate(),
            Node::And(gs) => {
                let parts: Vec<Lit> = gs.iter().map(|g| self.ground(g, env)).collect();
                self.and(parts)
            }
            Node::Or(gs) => {
                let parts: Vec<Lit> = gs.iter().map(|g| self.ground(g, env).negate()).collect();
                self.and(parts).negate()
            }
            Node::Exists(slot, g) | Node::Forall(slot, g) => {
                let exists = matches!(node, Node::Exists(..));
                let mut parts = Vec::with_capacity(self.n);
                for e in 0..self.n {
                    env[*slot] = e;
                    let l = self.ground(g, env);
                    parts.push(if exists { l.negate() } else { l });
                    // short-circuit on a decided instance
                    if parts.last() == Some(&Lit::Const(false)) {
                        break;
                    }
                }
                let all = self.and(parts);
                if exists {
                    all.negate()
                } else {
                    all
                }
            }
        }
    }
}

struct Resolver<'a> {
    bases: &'a HashMap<String, usize>,
    fixed: bool,
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl Resolver<'_> {
    fn slot(&self, v: &str) -> usize {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, s)| *s)
            .expect("sentences are closed")
    }

    fn resolve(&mut self, f: &Formula) -> Node {
        match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom { rel, args } => {
                let slots: Vec<usize> = args.iter().map(|a| self.slot(a)).collect();
                if self.fixed && rel == ORDER {
                    Node::FixedLess(slots[0], slots[1])
                } else {
                    Node::Atom {
                        base: self.bases[rel],
                        slots,
                    }
                }
            }
            Formula::Eq(a, b) => Node::Eq(self.slot(a), self.slot(b)),
            Formula::Not(g) => Node::Not(Box::new(self.resolve(g))),
            Formula::And(..) | Formula::Or(..) => {
                let is_and = matches!(f, Formula::And(..));
                let mut parts = Vec::new();
                self.flatten(f, is_and, &mut parts);
                if is_and {
                    Node::And(parts)
                } else {
                    Node::Or(parts)
                }
            }
            Formula::Implies(a, b) => Node::Or(vec![
                Node::Not(Box::new(self.resolve(a))),
                self.resolve(b),
            ]),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((v.clone(), slot));
                let body = Box::new(self.resolve(g));
                self.scope.pop();
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(slot, body)
                } else {
                    Node::Forall(slot, body)
                }
            }
        }
    }

    fn flatten(&mut self, f: &Formula, is_and: bool, out: &mut Vec<Node>) {
        match (f, is_and) {
            (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
                self.flatten(a, is_and, out);
                self.flatten(b, is_and, out);
            }
            _ => out.push(self.resolve(f)),
        }
    }
}

/// Atoms of `vocab` over a domain of size `n`, in symbol then tuple order.
fn atom_table(vocab: &Vocabulary, n: usize, fix_order: bool) -> (Vec<GroundAtom>, HashMap<String, usize>) {
    let mut atoms = Vec::new();
    let mut bases = HashMap::new();
    for (sym, arity) in vocab.symbols() {
        if fix_order && sym == ORDER {
            continue;
        }
        bases.insert(sym.to_string(), atoms.len());
        let count = n.pow(arity as u32);
        for k in 0..count {
            let args = if arity == 1 { vec![k] } else { vec![k / n, k % n] };
            atoms.push(GroundAtom {
                symbol: sym.to_string(),
                args,
            });
        }
    }
    (atoms, bases)
}

/// Clause set satisfiable iff `s` has a model of size `n` over the symbols it
/// uses.
pub fn ground(s: &Sentence, n: usize) -> Result<ClauseSet, SolverError> {
    let vocab = s
        .formula()
        .infer_vocabulary()
        .expect("sentences have consistent arities");
    ground_over(s, n, &vocab, false)
}

fn ground_over(
    s: &Sentence,
    n: usize,
    vocab: &Vocabulary,
    fix_order: bool,
) -> Result<ClauseSet, SolverError> {
    if n == 0 {
        return Err(SolverError::EmptyDomain);
    }
    if let Some((sym, _)) = s
        .formula()
        .symbols()
        .expect("sentences have consistent arities")
        .into_iter()
        .find(|(sym, arity)| vocab.arity(sym) != Some(*arity))
    {
        return Err(SolverError::UnknownSymbol(sym));
    }
    if fix_order && !vocab.binary().contains(ORDER) {
        return Err(SolverError::NoOrder(ORDER.to_string()));
    }
    let (atoms, bases) = atom_table(vocab, n, fix_order);
    let mut resolver = Resolver {
        bases: &bases,
        fixed: fix_order,
        scope: Vec::new(),
        slots: 0,
    };
    let node = resolver.resolve(s.formula());
    let mut g = Grounder {
        n,
        next_var: atoms.len() as i32 + 1,
        clauses: Vec::new(),
        conj: HashMap::new(),
    };
    let mut env = vec![0; resolver.slots];
    match g.ground(&node, &mut env) {
        Lit::Const(true) => {}
        Lit::Const(false) => g.clauses.push(Vec::new()),
        Lit::Var(v) => g.clauses.push(vec![v]),
    }
    Ok(ClauseSet {
        num_vars: g.next_var as usize - 1,
        clauses: g.clauses,
        atoms,
    })
}

fn code(lit: i32) -> usize {
    2 * (lit.unsigned_abs() as usize - 1) + usize::from(lit < 0)
}

struct Search {
    clauses: Vec<Vec<i32>>,
    watches: Vec<Vec<usize>>,
    /// 0 unassigned, 1 true, -1 false, indexed by variable
    value: Vec<i8>,
    trail: Vec<i32>,
    head: usize,
    /// (trail length before the decision, decided variable, flipped)
    levels: Vec<(usize, usize, bool)>,
    budget: Option<u64>,
    conflicts: u64,
}

impl Search {
    fn lit_value(&self, l: i32) -> i8 {
        let v = self.value[l.unsigned_abs() as usize];
        if l < 0 {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, l: i32) {
        self.value[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 };
        self.trail.push(l);
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let falsified = -self.trail[self.head];
            self.head += 1;
            let mut ws = std::mem::take(&mut self.watches[code(falsified)]);
            let (mut i, mut j) = (0, 0);
            let mut ok = true;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                if self.clauses[ci][0] == falsified {
                    self.clauses[ci].swap(0, 1);
                }
                let other = self.clauses[ci][0];
                if self.lit_value(other) == 1 {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let len = self.clauses[ci].len();
                if let Some(k) = (2..len).find(|&k| self.lit_value(self.clauses[ci][k]) != -1) {
                    self.clauses[ci].swap(1, k);
                    let w = self.clauses[ci][1];
                    self.watches[code(w)].push(ci);
                    continue;
                }
                ws[j] = ci;
                j += 1;
                match self.lit_value(other) {
                    -1 => {
                        ok = false;
                        while i < ws.len() {
                            ws[j] = ws[i];
                            i += 1;
                            j += 1;
                        }
                    }
                    _ => self.assign(other),
                }
            }
            ws.truncate(j);
            self.watches[code(falsified)] = ws;
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        for l in self.trail.drain(len..) {
            self.value[l.unsigned_abs() as usize] = 0;
        }
        self.head = len;
    }

    fn run(&mut self, num_vars: usize) -> Result<Option<Vec<bool>>, SolverError> {
        let mut next = 1;
        loop {
            if !self.propagate() {
                self.conflicts += 1;
                if let Some(b) = self.budget {
                    if self.conflicts > b {
                        return Err(SolverError::Budget(b));
                    }
                }
                loop {
                    let Some((len, var, flipped)) = self.levels.pop() else {
                        return Ok(None);
                    };
                    self.undo_to(len);
                    next = next.min(var);
                    if !flipped {
                        self.levels.push((len, var, true));
                        self.assign(var as i32);
                        break;
                    }
                }
                continue;
            }
            while next <= num_vars && self.value[next] != 0 {
                next += 1;
            }
            if next > num_vars {
                return Ok(Some((1..=num_vars).map(|v| self.value[v] == 1).collect()));
            }
            self.levels.push((self.trail.len(), next, false));
            self.assign(-(next as i32));
        }
    }
}

/// A satisfying assignment (index `v - 1` for variable `v`), or `None`.
pub fn solve_ground(
    c: &ClauseSet,
    conflict_budget: Option<u64>,
) -> Result<Option<Vec<bool>>, SolverError> {
    let mut search = Search {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * c.num_vars],
        value: vec![0; c.num_vars + 1],
        trail: Vec::new(),
        head: 0,
        levels: Vec::new(),
        budget: conflict_budget,
        conflicts: 0,
    };
    let mut units = Vec::new();
    for clause in &c.clauses {
        let mut lits = clause.clone();
        lits.sort_unstable();
        lits.dedup();
        if lits.iter().any(|&l| lits.contains(&-l)) {
            continue;
        }
        match lits.len() {
            0 => return Ok(None),
            1 => units.push(lits[0]),
            _ => {
                let ci = search.clauses.len();
                search.watches[code(lits[0])].push(ci);
                search.watches[code(lits[1])].push(ci);
                search.clauses.push(lits);
            }
        }
    }
    for u in units {
        match search.lit_value(u) {
            -1 => return Ok(None),
            0 => search.assign(u),
            _ => {}
        }
    }
    search.run(c.num_vars)
}

/// A model of `s` of size `n` over `vocab`, checked by evaluation.
pub fn find_model(
    s: &Sentence,
    n: usize,
    vocab: &Vocabulary,
    options: &FindOptions,
) -> Result<Option<Structure>, SolverError> {
    let clauses = ground_over(s, n, vocab, options.fix_order)?;
    let Some(assignment) = solve_ground(&clauses, options.conflict_budget)? else {
        return Ok(None);
    };
    let mut model = Structure::new(n, vocab).map_err(|_| SolverError::EmptyDomain)?;
    for (atom, &value) in clauses.atoms.iter().zip(&assignment) {
        if value {
            match atom.args.as_slice() {
                [a] => model.set_unary(&atom.symbol, *a, true),
                [a, b] => model.set_binary(&atom.symbol, *a, *b, true),
                _ => unreachable!("atoms are unary or binary"),
            }
            .expect("atoms come from the vocabulary");
        }
    }
    if options.fix_order {
        for a in 0..n {
            for b in a + 1..n {
                model.set_binary(ORDER, a, b, true).expect("order is in the vocabulary");
            }
        }
    }
    if !satisfies(&model, s)? {
        return Err(SolverError::Unsound);
    }
    Ok(Some(model))
}

/// The first size in `1..=max_n` with a model, together with that model.
pub fn find_model_up_to(
    s: &Sentence,
    max_n: usize,
    vocab: &Vocabulary,
    options: &FindOptions,
) -> Result<Option<(usize, Structure)>, SolverError> {
    for n in 1..=max_n {
        if let Some(m) = find_model(s, n, vocab, options)? {
            return Ok(Some((n, m)));
        }
    }
    Ok(None)
}
