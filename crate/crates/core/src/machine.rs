//! Deterministic single-tape Turing machines over {0, 1, blank} and a direct
//! simulator.
//!
//! Machine files are line based:
//!
//! ```text
//! # comment
//! states: q0 h
//! start: q0
//! halt: h
//! trans: q0 _ -> h 1 S
//! ```
//!
//! The tape is one-way infinite to the right; the head starts on cell 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Zero, Symbol::One, Symbol::Blank];

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            '_' => Some(Symbol::Blank),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Blank => '_',
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    L,
    R,
    S,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Move::L => 'L',
            Move::R => 'R',
            Move::S => 'S',
        };
        write!(f, "{c}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub next: String,
    pub write: Symbol,
    pub moves: Move,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("two rules for state `{state}` reading `{symbol}`")]
    Nondeterministic { state: String, symbol: Symbol },
    #[error("halting state `{0}` has a rule")]
    HaltingRule(String),
    #[error("state `{state}` has no rule for `{symbol}`")]
    MissingTransition { state: String, symbol: Symbol },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("no halting state")]
    NoHaltingState,
    #[error("invalid input symbol `{0}`; inputs are bit strings")]
    BadInput(char),
}

/// A validated machine. States keep their declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmSpec {
    states: Vec<String>,
    start: String,
    halting: BTreeSet<String>,
    transitions: BTreeMap<(String, Symbol), Transition>,
}

fn valid_state_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl TmSpec {
    pub fn new(
        states: Vec<String>,
        start: String,
        halting: BTreeSet<String>,
        transitions: BTreeMap<(String, Symbol), Transition>,
    ) -> Result<Self, TmError> {
        let known = |q: &String| {
            if states.contains(q) {
                Ok(())
            } else {
                Err(TmError::UnknownState(q.clone()))
            }
        };
        known(&start)?;
        if halting.is_empty() {
            return Err(TmError::NoHaltingState);
        }
        for q in &halting {
            known(q)?;
        }
        for ((q, _), t) in &transitions {
            known(q)?;
            known(&t.next)?;
            if halting.contains(q) {
                return Err(TmError::HaltingRule(q.clone()));
            }
        }
        for q in states.iter().filter(|q| !halting.contains(*q)) {
            for symbol in Symbol::ALL {
                if !transitions.contains_key(&(q.clone(), symbol)) {
                    return Err(TmError::MissingTransition {
                        state: q.clone(),
                        symbol,
                    });
                }
            }
        }
        Ok(TmSpec {
            states,
            start,
            halting,
            transitions,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn halting(&self) -> &BTreeSet<String> {
        &self.halting
    }

    pub fn is_halting(&self, state: &str) -> bool {
        self.halting.contains(state)
    }

    pub fn transition(&self, state: &str, symbol: Symbol) -> Option<&Transition> {
        self.transitions.get(&(state.to_string(), symbol))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&str, Symbol, &Transition)> {
        self.transitions
            .iter()
            .map(|((q, s), t)| (q.as_str(), *s, t))
    }

    /// Canonical text form, accepted by [`parse_tm`].
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "states: {}\nstart: {}\nhalt: {}\n",
            self.states.join(" "),
            self.start,
            self.halting.iter().cloned().collect::<Vec<_>>().join(" ")
        );
        for q in &self.states {
            for symbol in Symbol::ALL {
                if let Some(t) = self.transition(q, symbol) {
                    out += &format!("trans: {q} {symbol} -> {} {} {}\n", t.next, t.write, t.moves);
                }
            }
        }
        out
    }
}

pub fn parse_tm(text: &str) -> Result<TmSpec, TmError> {
    let mut states: Option<Vec<String>> = None;
    let mut start = None;
    let mut halting: Option<BTreeSet<String>> = None;
    let mut transitions = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: &str| TmError::Syntax {
            line: line_no,
            message: message.to_string(),
        };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| err("expected `key: value`"))?;
        let words: Vec<&str> = rest.split_whitespace().collect();
        if let Some(bad) = words.iter().find(|w| !valid_state_name(w) && key.trim() != "trans") {
            return Err(err(&format!("invalid state name `{bad}`")));
        }
        match key.trim() {
            "states" => {
                if states.is_some() {
                    return Err(err("duplicate `states` line"));
                }
                let mut seen = BTreeSet::new();
                if words.is_empty() {
                    return Err(err("no states listed"));
                }
                for w in &words {
                    if !seen.insert(*w) {
                        return Err(err(&format!("state `{w}` listed twice")));
                    }
                }
                states = Some(words.iter().map(|w| w.to_string()).collect());
            }
            "start" => {
                if start.is_some() {
                    return Err(err("duplicate `start` line"));
                }
                match words.as_slice() {
                    [q] => start = Some(q.to_string()),
                    _ => return Err(err("expected exactly one start state")),
                }
            }
            "halt" => {
                if halting.is_some() {
                    return Err(err("duplicate `halt` line"));
                }
                halting = Some(words.iter().map(|w| w.to_string()).collect());
            }
            "trans" => {
                let [q, read, arrow, next, write, moves] = words.as_slice() else {
                    return Err(err("expected `trans: STATE SYM -> STATE SYM MOVE`"));
                };
                if *arrow != "->" {
                    return Err(err("expected `->`"));
                }
                let symbol = |s: &str| {
                    let mut cs = s.chars();
                    match (cs.next().and_then(Symbol::from_char), cs.next()) {
                        (Some(sym), None) => Ok(sym),
                        _ => Err(err(&format!("invalid symbol `{s}`"))),
                    }
                };
                let moves = match *moves {
                    "L" => Move::L,
                    "R" => Move::R,
                    "S" => Move::S,
                    other => return Err(err(&format!("invalid move `{other}`"))),
                };
                for name in [q, next] {
                    if !valid_state_name(name) {
                        return Err(err(&format!("invalid state name `{name}`")));
                    }
                }
                let read = symbol(read)?;
                let t = Transition {
                    next: next.to_string(),
                    write: symbol(write)?,
                    moves,
                };
                if transitions.insert((q.to_string(), read), t).is_some() {
                    return Err(TmError::Nondeterministic {
                        state: q.to_string(),
                        symbol: read,
                    });
                }
            }
            other => return Err(err(&format!("unknown key `{other}`"))),
        }
    }
    let missing = |what: &str| TmError::Syntax {
        line: text.lines().count(),
        message: format!("missing `{what}` line"),
    };
    TmSpec::new(
        states.ok_or_else(|| missing("states"))?,
        start.ok_or_else(|| missing("start"))?,
        halting.ok_or_else(|| missing("halt"))?,
        transitions,
    )
}

/// Machines shipped with the crate.
pub mod bundled {
    pub const WRITE1: &str = include_str!("../../../machines/write1.tm");
    pub const LOOP: &str = include_str!("../../../machines/loop.tm");
    pub const SCANRIGHT: &str = include_str!("../../../machines/scanright.tm");
    pub const BUSY3: &str = include_str!("../../../machines/busy3.tm");

    pub const ALL: [(&str, &str); 4] = [
        ("write1.tm", WRITE1),
        ("loop.tm", LOOP),
        ("scanright.tm", SCANRIGHT),
        ("busy3.tm", BUSY3),
    ];

    /// Parses a bundled machine by file name.
    pub fn get(name: &str) -> Option<super::TmSpec> {
        ALL.iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| super::parse_tm(text).expect("bundled machines are valid"))
    }
}

/// One machine configuration. The tape holds every cell up to the head and
/// up to the last non-blank cell, and nothing beyond.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub tape: Vec<Symbol>,
    pub head: usize,
    pub state: String,
}

impl Config {
    pub fn new(mut tape: Vec<Symbol>, head: usize, state: impl Into<String>) -> Config {
        let keep = tape
            .iter()
            .rposition(|&s| s != Symbol::Blank)
            .map_or(0, |i| i + 1)
            .max(head + 1);
        tape.resize(keep, Symbol::Blank);
        Config {
            tape,
            head,
            state: state.into(),
        }
    }

    pub fn read(&self, cell: usize) -> Symbol {
        self.tape.get(cell).copied().unwrap_or(Symbol::Blank)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.tape.iter().enumerate() {
            if i == self.head {
                write!(f, "[{s}]")?;
            } else {
                write!(f, "{s}")?;
            }
        }
        write!(f, "  {}", self.state)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunTrace(pub Vec<Config>);

impl RunTrace {
    pub fn configs(&self) -> &[Config] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether every step follows from its predecessor by one rule of `m`.
    pub fn is_run_of(&self, m: &TmSpec) -> bool {
        self.0.windows(2).all(|w| step(m, &w[0]).ok().flatten().as_ref() == Some(&w[1]))
    }
}

impl fmt::Display for RunTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            writeln!(f, "{i:>4}: {c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Halted {
        steps: usize,
        cells_used: usize,
        trace: RunTrace,
    },
    Running,
    /// The machine moved left from cell 0 after `steps` steps.
    FellOffTape { steps: usize },
}

struct FellOff;

/// Successor configuration, `None` in a halting state.
fn step(m: &TmSpec, c: &Config) -> Result<Option<Config>, FellOff> {
    if m.is_halting(&c.state) {
        return Ok(None);
    }
    let t = m
        .transition(&c.state, c.read(c.head))
        .expect("non-halting states are total");
    let mut tape = c.tape.clone();
    tape[c.head] = t.write;
    let head = match t.moves {
        Move::L => c.head.checked_sub(1).ok_or(FellOff)?,
        Move::R => c.head + 1,
        Move::S => c.head,
    };
    Ok(Some(Config::new(tape, head, t.next.clone())))
}

pub fn parse_input(input: &str) -> Result<Vec<Symbol>, TmError> {
    input
        .chars()
        .map(|c| match c {
            '0' => Ok(Symbol::Zero),
            '1' => Ok(Symbol::One),
            other => Err(TmError::BadInput(other)),
        })
        .collect()
}

/// Runs `m` on `input` for at most `max_steps` transitions.
pub fn simulate(m: &TmSpec, input: &[Symbol], max_steps: usize) -> Outcome {
    let mut current = Config::new(input.to_vec(), 0, m.start());
    let mut max_head = 0;
    let mut trace = vec![current.clone()];
    for steps in 0..=max_steps {
        match step(m, &current) {
            Ok(None) => {
                return Outcome::Halted {
                    steps,
                    cells_used: input.len().max(max_head + 1),
                    trace: RunTrace(trace),
                }
            }
            Err(FellOff) => return Outcome::FellOffTape { steps },
            Ok(Some(_)) if steps == max_steps => break,
            Ok(Some(next)) => {
                max_head = max_head.max(next.head);
                trace.push(next.clone());
                current = next;
            }
        }
    }
    Outcome::Running
}
