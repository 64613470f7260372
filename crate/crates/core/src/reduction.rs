//! Encoding Turing machine runs as finite structures.
//!
//! A model of [`reduce_pair`] is a square grid. Rows are ordered by `<'`
//! (time) and columns by `<` (tape cells). `P_zero`, `P_one` and `P_empty`
//! give the content of cell `(row, col)`; `H_q(row, col)` places the head,
//! in state `q`, on that cell. The same domain read as a word over
//! `{E, O, Z}` with order `<` holds the input, and the first row is tied to
//! that word.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::machine::{simulate, Config, Move, Outcome, RunTrace, Symbol, TmSpec};
use crate::structure::{
    satisfies, sorted_by, strict_total_order, word_axioms, EvalError, Structure,
};
use crate::syntax::{Formula, Sentence, Vocabulary, ORDER, ROW_ORDER};

pub const BLANK_LETTER: &str = "E";
pub const ZERO_LETTER: &str = "Z";
pub const ONE_LETTER: &str = "O";
pub const P_ZERO: &str = "P_zero";
pub const P_ONE: &str = "P_one";
pub const P_EMPTY: &str = "P_empty";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("structure is not a model of the machine sentence")]
    NotAModel,
    #[error("structure lacks the grid vocabulary: {0}")]
    Eval(#[from] EvalError),
    #[error("ambiguous grid at row {row}: {message}")]
    Ambiguous { row: usize, message: String },
}

pub fn head_symbol(state: &str) -> String {
    format!("H_{state}")
}

fn cell_symbol(s: Symbol) -> &'static str {
    match s {
        Symbol::Zero => P_ZERO,
        Symbol::One => P_ONE,
        Symbol::Blank => P_EMPTY,
    }
}

fn letter(s: Symbol) -> &'static str {
    match s {
        Symbol::Zero => ZERO_LETTER,
        Symbol::One => ONE_LETTER,
        Symbol::Blank => BLANK_LETTER,
    }
}

/// `{E, O, Z, <}`.
pub fn word_vocabulary() -> Vocabulary {
    Vocabulary::word([BLANK_LETTER, ONE_LETTER, ZERO_LETTER]).expect("fixed names")
}

/// Word part, `<'`, the three cell relations and one head relation per state.
pub fn grid_vocabulary(m: &TmSpec) -> Vocabulary {
    let mut v = word_vocabulary();
    v.add_binary(ROW_ORDER).expect("fixed names");
    for p in [P_ZERO, P_ONE, P_EMPTY] {
        v.add_binary(p).expect("fixed names");
    }
    for q in m.states() {
        v.add_binary(head_symbol(q)).expect("state names are alphanumeric");
    }
    v
}

fn lt(a: &str, b: &str) -> Formula {
    Formula::binary(ORDER, a, b)
}

/// No element precedes `z` under `rel`.
fn first(rel: &str, z: &str, w: &str) -> Formula {
    Formula::forall(w, Formula::not(Formula::binary(rel, w, z)))
}

fn last(rel: &str, z: &str, w: &str) -> Formula {
    Formula::forall(w, Formula::not(Formula::binary(rel, z, w)))
}

/// `w` directly follows `z` under `rel`.
fn succ(rel: &str, z: &str, w: &str, u: &str) -> Formula {
    Formula::and(
        Formula::binary(rel, z, w),
        Formula::not(Formula::exists(
            u,
            Formula::and(Formula::binary(rel, z, u), Formula::binary(rel, u, w)),
        )),
    )
}

/// The input followed by blanks, as a sentence over the word vocabulary.
pub fn build_phi_x(input: &[Symbol]) -> Sentence {
    let n = input.len();
    let f = if n == 0 {
        Formula::forall("y", Formula::unary(BLANK_LETTER, "y"))
    } else {
        let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let mut parts = vec![first(ORDER, &xs[0], "w")];
        for pair in xs.windows(2) {
            parts.push(succ(ORDER, &pair[0], &pair[1], "u"));
        }
        for (x, &b) in xs.iter().zip(input) {
            parts.push(Formula::unary(letter(b), x.as_str()));
        }
        parts.push(Formula::forall(
            "y",
            Formula::implies(lt(&xs[n - 1], "y"), Formula::unary(BLANK_LETTER, "y")),
        ));
        Formula::exists_many(xs.iter(), Formula::and_all(parts))
    };
    Sentence::new(f).expect("closed by construction")
}

fn cells(r: &str, c: &str) -> [Formula; 3] {
    [P_ZERO, P_ONE, P_EMPTY].map(|p| Formula::binary(p, r, c))
}

fn copy_cell(r: &str, r2: &str, c: &str) -> Formula {
    Formula::and_all(
        [P_ZERO, P_ONE, P_EMPTY]
            .map(|p| Formula::implies(Formula::binary(p, r, c), Formula::binary(p, r2, c))),
    )
}

fn exactly_one(parts: &[Formula]) -> Formula {
    let mut conj = vec![Formula::or_all(parts.iter().cloned())];
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            conj.push(Formula::not(Formula::and(a.clone(), b.clone())));
        }
    }
    Formula::and_all(conj)
}

/// Sentence whose models are grids holding a halting run of `m`.
pub fn build_phi_m(m: &TmSpec) -> Sentence {
    let heads: Vec<String> = m.states().iter().map(|q| head_symbol(q)).collect();
    let head_at = |r: &str, c: &str| Formula::or_all(heads.iter().map(|h| Formula::binary(h, r, c)));
    let consecutive = || succ(ROW_ORDER, "r", "s", "u");

    let mut parts = vec![
        // columns form a word, rows are ordered
        word_axioms(&word_vocabulary()).into_formula(),
        strict_total_order(ROW_ORDER),
        // one content per cell
        Formula::forall_many(["r", "c"], exactly_one(&cells("r", "c"))),
    ];

    // one head per row
    let mut unique = Vec::new();
    for (i, h) in heads.iter().enumerate() {
        unique.push(Formula::implies(
            Formula::and(Formula::binary(h, "r", "c"), Formula::binary(h, "r", "d")),
            Formula::eq("c", "d"),
        ));
        for h2 in &heads[i + 1..] {
            unique.push(Formula::not(Formula::and(
                Formula::binary(h, "r", "c"),
                Formula::binary(h2, "r", "d"),
            )));
        }
    }
    parts.push(Formula::forall(
        "r",
        Formula::and(
            Formula::exists("c", head_at("r", "c")),
            Formula::forall_many(["c", "d"], Formula::and_all(unique)),
        ),
    ));

    // the first row spells the input word
    let bridge = Formula::and_all(Symbol::ALL.map(|s| {
        Formula::implies(Formula::unary(letter(s), "y"), Formula::binary(cell_symbol(s), "x", "y"))
    }));
    parts.push(Formula::forall(
        "x",
        Formula::implies(first(ROW_ORDER, "x", "w"), Formula::forall("y", bridge)),
    ));

    // start state on the first cell
    parts.push(Formula::forall_many(
        ["x", "y"],
        Formula::implies(
            Formula::and(first(ROW_ORDER, "x", "w"), first(ORDER, "y", "w")),
            Formula::binary(head_symbol(m.start()), "x", "y"),
        ),
    ));

    // cells away from the head keep their content
    parts.push(Formula::forall_many(
        ["r", "s", "c"],
        Formula::implies(
            Formula::and(consecutive(), Formula::not(head_at("r", "c"))),
            copy_cell("r", "s", "c"),
        ),
    ));
    // one rule per state and symbol
    for (q, read, t) in m.transitions() {
        let next = head_symbol(&t.next);
        let moved = match t.moves {
            Move::S => Formula::binary(&next, "s", "c"),
            Move::R => Formula::exists(
                "d",
                Formula::and(succ(ORDER, "c", "d", "u"), Formula::binary(&next, "s", "d")),
            ),
            Move::L => Formula::exists(
                "d",
                Formula::and(succ(ORDER, "d", "c", "u"), Formula::binary(&next, "s", "d")),
            ),
        };
        parts.push(Formula::forall_many(
            ["r", "s", "c"],
            Formula::implies(
                Formula::and_all([
                    consecutive(),
                    Formula::binary(head_symbol(q), "r", "c"),
                    Formula::binary(cell_symbol(read), "r", "c"),
                ]),
                Formula::and(Formula::binary(cell_symbol(t.write), "s", "c"), moved),
            ),
        ));
    }

    // halted rows repeat
    for q in m.halting() {
        let h = head_symbol(q);
        parts.push(Formula::forall_many(
            ["r", "s", "c"],
            Formula::implies(
                Formula::and(consecutive(), Formula::binary(&h, "r", "c")),
                Formula::and(Formula::binary(&h, "s", "c"), copy_cell("r", "s", "c")),
            ),
        ));
    }

    // the last row has halted
    let halting_head = Formula::or_all(
        m.halting()
            .iter()
            .map(|q| Formula::binary(head_symbol(q), "r", "c")),
    );
    parts.push(Formula::forall(
        "r",
        Formula::implies(last(ROW_ORDER, "r", "w"), Formula::exists("c", halting_head)),
    ));

    Sentence::new(Formula::and_all(parts)).expect("closed by construction")
}

/// Finitely satisfiable exactly when `m` halts on `input` without leaving
/// the tape.
pub fn reduce_pair(m: &TmSpec, input: &[Symbol]) -> Sentence {
    build_phi_m(m).and(&build_phi_x(input))
}

/// Smallest grid holding the halting run, if it halts within `max_steps`.
pub fn min_grid_size(m: &TmSpec, input: &[Symbol], max_steps: usize) -> Option<usize> {
    match simulate(m, input, max_steps) {
        Outcome::Halted {
            steps, cells_used, ..
        } => Some((steps + 1).max(cells_used).max(1)),
        _ => None,
    }
}

/// Reads the run stored in a model of [`build_phi_m`], up to its first
/// halting configuration.
pub fn decode_run(s: &Structure, m: &TmSpec) -> Result<RunTrace, ReductionError> {
    if !satisfies(s, &build_phi_m(m))? {
        return Err(ReductionError::NotAModel);
    }
    let rows = sorted_by(s, ROW_ORDER);
    let cols = sorted_by(s, ORDER);
    let halting: BTreeSet<&String> = m.halting().iter().collect();
    let mut trace = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        let ambiguous = |message: String| ReductionError::Ambiguous { row: i, message };
        let mut tape = Vec::with_capacity(cols.len());
        for (j, &c) in cols.iter().enumerate() {
            let found: Vec<Symbol> = Symbol::ALL
                .into_iter()
                .filter(|&sym| s.holds_binary(cell_symbol(sym), r, c))
                .collect();
            match found.as_slice() {
                [sym] => tape.push(*sym),
                _ => return Err(ambiguous(format!("column {j} has {} contents", found.len()))),
            }
        }
        let heads: Vec<(usize, &String)> = cols
            .iter()
            .enumerate()
            .flat_map(|(j, &c)| {
                m.states()
                    .iter()
                    .filter(move |q| s.holds_binary(&head_symbol(q), r, c))
                    .map(move |q| (j, q))
            })
            .collect();
        let [(head, state)] = heads.as_slice() else {
            return Err(ambiguous(format!("{} head atoms", heads.len())));
        };
        trace.push(Config::new(tape, *head, state.as_str()));
        if halting.contains(state) {
            break;
        }
    }
    Ok(RunTrace(trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{bundled, parse_input};
    use crate::structure::{word_to_structure, Word};

    fn words(len: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w: Vec<&str>| {
                    ["E", "O", "Z"].into_iter().map(move |l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(Word::new).collect()
    }

    #[test]
    fn phi_x_for_one() {
        let phi = build_phi_x(&parse_input("1").unwrap());
        let vocab = word_vocabulary();
        for len in 1..=4 {
            for w in words(len) {
                let expected = w.letters()[0] == "O" && w.letters()[1..].iter().all(|l| l == "E");
                let s = word_to_structure(&w, &vocab).unwrap();
                assert_eq!(satisfies(&s, &phi).unwrap(), expected, "{w}");
            }
        }
    }

    #[test]
    fn phi_x_for_empty_input() {
        assert_eq!(build_phi_x(&[]).to_string(), "forall y. E(y)");
    }

    #[test]
    fn vocabulary_of_reduction() {
        let m = bundled::get("write1.tm").unwrap();
        let v = grid_vocabulary(&m);
        assert_eq!(reduce_pair(&m, &[]).formula().infer_vocabulary().unwrap(), v);
        assert!(v.binary().contains("H_q0") && v.binary().contains("H_h"));
    }

    #[test]
    fn grid_sizes() {
        let w = bundled::get("write1.tm").unwrap();
        assert_eq!(min_grid_size(&w, &[], 10), Some(2));
        let l = bundled::get("loop.tm").unwrap();
        assert_eq!(min_grid_size(&l, &[], 100), None);
    }

    /// The grid for write1 on the empty input, built by hand.
    fn write1_grid() -> Structure {
        let m = bundled::get("write1.tm").unwrap();
        let mut s = Structure::new(2, &grid_vocabulary(&m)).unwrap();
        s.set_binary("<", 0, 1, true).unwrap();
        s.set_binary("<'", 0, 1, true).unwrap();
        s.set_unary("E", 0, true).unwrap();
        s.set_unary("E", 1, true).unwrap();
        for c in 0..2 {
            s.set_binary(P_EMPTY, 0, c, true).unwrap();
        }
        s.set_binary(P_ONE, 1, 0, true).unwrap();
        s.set_binary(P_EMPTY, 1, 1, true).unwrap();
        s.set_binary("H_q0", 0, 0, true).unwrap();
        s.set_binary("H_h", 1, 0, true).unwrap();
        s
    }

    #[test]
    fn decode_hand_built_grid() {
        let m = bundled::get("write1.tm").unwrap();
        let s = write1_grid();
        assert!(satisfies(&s, &reduce_pair(&m, &[])).unwrap());
        let Outcome::Halted { trace, .. } = simulate(&m, &[], 10) else { panic!() };
        assert_eq!(decode_run(&s, &m).unwrap(), trace);
        assert_eq!(decode_run(&s.permute(&[1, 0]), &m).unwrap(), trace);
    }

    #[test]
    fn decode_rejects_non_models() {
        let m = bundled::get("write1.tm").unwrap();
        let mut s = write1_grid();
        s.set_binary("H_h", 1, 0, false).unwrap();
        assert_eq!(decode_run(&s, &m), Err(ReductionError::NotAModel));
    }
}
