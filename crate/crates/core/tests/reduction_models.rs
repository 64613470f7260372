use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use finsat::machine::{bundled, parse_input, simulate, Outcome, RunTrace};
use finsat::reduction::{
    build_phi_m, build_phi_x, decode_run, grid_vocabulary, min_grid_size, reduce_pair,
    word_vocabulary,
};
use finsat::solver::{find_model, find_model_up_to, FindOptions};
use finsat::structure::{is_word, satisfies};

/// (machine, input, steps, cells) counted by hand from the machine tables.
const HALTING: [(&str, &str, usize, usize); 6] = [
    ("write1.tm", "", 1, 1),
    ("write1.tm", "0", 1, 1),
    ("scanright.tm", "", 1, 1),
    ("scanright.tm", "01", 3, 3),
    ("scanright.tm", "110", 4, 4),
    ("busy3.tm", "", 5, 3),
];

fn oracle(name: &str, input: &str) -> (usize, usize, RunTrace) {
    let m = bundled::get(name).unwrap();
    match simulate(&m, &parse_input(input).unwrap(), 1000) {
        Outcome::Halted {
            steps,
            cells_used,
            trace,
        } => (steps, cells_used, trace),
        other => panic!("{name}: {other:?}"),
    }
}

#[test]
fn simulator_matches_hand_counts() {
    for (name, input, t, s) in HALTING {
        let (steps, cells, trace) = oracle(name, input);
        assert_eq!((steps, cells), (t, s), "{name} on {input:?}");
        assert_eq!(trace.len(), t + 1);
        assert!(trace.is_run_of(&bundled::get(name).unwrap()));
        let m = bundled::get(name).unwrap();
        assert_eq!(
            min_grid_size(&m, &parse_input(input).unwrap(), 1000),
            Some((t + 1).max(s))
        );
    }
}

#[test]
fn halting_runs_have_models_from_the_grid_size_on() {
    for (name, input, _, _) in HALTING {
        let m = bundled::get(name).unwrap();
        let bits = parse_input(input).unwrap();
        let (_, _, trace) = oracle(name, input);
        let n_star = min_grid_size(&m, &bits, 1000).unwrap();
        let s = reduce_pair(&m, &bits);
        let vocab = grid_vocabulary(&m);
        for fix_order in [false, true] {
            let opts = FindOptions {
                fix_order,
                conflict_budget: None,
            };
            if n_star > 1 {
                assert!(
                    find_model(&s, n_star - 1, &vocab, &opts).unwrap().is_none(),
                    "{name} {input:?}: model below the grid size"
                );
            }
            for n in [n_star, n_star + 1] {
                let model = find_model(&s, n, &vocab, &opts)
                    .unwrap()
                    .unwrap_or_else(|| panic!("{name} {input:?}: no model at {n}"));
                assert!(satisfies(&model, &s).unwrap());
                assert_eq!(decode_run(&model, &m).unwrap(), trace, "{name} {input:?} at {n}");
                let word = model.restrict(&word_vocabulary()).unwrap();
                assert!(is_word(&word).unwrap());
            }
        }
    }
}

#[test]
fn looping_machine_has_no_small_model() {
    let m = bundled::get("loop.tm").unwrap();
    assert_eq!(min_grid_size(&m, &[], 100), None);
    let vocab = grid_vocabulary(&m);
    for input in ["", "1"] {
        let s = reduce_pair(&m, &parse_input(input).unwrap());
        assert_eq!(
            find_model_up_to(&s, 4, &vocab, &FindOptions::default()).unwrap(),
            None
        );
    }
    // without the input sentence the machine part alone is still unsatisfiable
    let phi_m = build_phi_m(&m);
    assert_eq!(
        find_model_up_to(&phi_m, 4, &vocab, &FindOptions::default()).unwrap(),
        None
    );
}

#[test]
fn machine_sentence_alone_admits_other_inputs() {
    let m = bundled::get("write1.tm").unwrap();
    let vocab = grid_vocabulary(&m);
    let (n, model) = find_model_up_to(&build_phi_m(&m), 4, &vocab, &FindOptions::default())
        .unwrap()
        .unwrap();
    assert_eq!(n, 2);
    assert!(is_word(&model.restrict(&word_vocabulary()).unwrap()).unwrap());
    assert_eq!(decode_run(&model, &m).unwrap().len(), 2);
}

#[test]
fn decoding_is_invariant_under_relabelling() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, input) in [("scanright.tm", "01"), ("busy3.tm", "")] {
        let m = bundled::get(name).unwrap();
        let bits = parse_input(input).unwrap();
        let n = min_grid_size(&m, &bits, 1000).unwrap();
        let model = find_model(&reduce_pair(&m, &bits), n, &grid_vocabulary(&m), &FindOptions::default())
            .unwrap()
            .unwrap();
        let expected = decode_run(&model, &m).unwrap();
        for _ in 0..10 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let moved = model.permute(&perm);
            assert!(satisfies(&moved, &reduce_pair(&m, &bits)).unwrap());
            assert_eq!(decode_run(&moved, &m).unwrap(), expected);
        }
    }
}

#[test]
fn input_sentence_is_a_word_sentence() {
    let vocab = word_vocabulary();
    for input in ["", "0", "110"] {
        let phi = build_phi_x(&parse_input(input).unwrap());
        assert!(phi.formula().fits(&vocab));
    }
}

#[test]
fn solver_is_deterministic() {
    let m = bundled::get("busy3.tm").unwrap();
    let s = reduce_pair(&m, &[]);
    let vocab = grid_vocabulary(&m);
    let a = find_model(&s, 6, &vocab, &FindOptions::default()).unwrap();
    let b = find_model(&s, 6, &vocab, &FindOptions::default()).unwrap();
    assert_eq!(a, b);
}
