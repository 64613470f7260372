use std::path::{Path, PathBuf};
use std::process::Command;

/// (golden file, exit code, arguments)
const CASES: &[(&str, i32, &[&str])] = &[
    (
        "word_sat",
        0,
        &["word-sat", "-f", "exists x. O(x) & forall y. (y < x -> Z(y))", "--letters", "O,Z"],
    ),
    (
        "word_equiv",
        0,
        &["word-equiv", "-f", "exists x. O(x)", "-f", "!forall x. !O(x)", "--letters", "O,Z"],
    ),
    ("check_open", 1, &["check", "-f", "P(x)"]),
    ("simulate_scanright", 0, &["simulate", "--tm", "machines/scanright.tm", "--input", "01"]),
    ("reduce_loop", 1, &["reduce", "--tm", "machines/loop.tm", "--find-up-to", "3"]),
    ("demo_write1", 0, &["demo-halting", "--tm", "machines/write1.tm", "--find-up-to", "4"]),
    ("demo_loop", 0, &["demo-halting", "--tm", "machines/loop.tm", "--find-up-to", "4"]),
    ("demo_write1_small", 1, &["demo-halting", "--tm", "machines/write1.tm", "--find-up-to", "1"]),
    ("usage_no_formula", 2, &["word-sat"]),
];

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

#[test]
fn reports_match_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, code, args) in CASES {
        let out = Command::new(env!("CARGO_BIN_EXE_finsat"))
            .args(*args)
            .current_dir(repo_root())
            .output()
            .unwrap();
        let stdout = String::from_utf8(out.stdout).unwrap();
        let path = dir.join(format!("{name}.txt"));
        if update {
            std::fs::write(&path, &stdout).unwrap();
        }
        let expected = std::fs::read_to_string(&path).unwrap();
        assert_eq!(stdout, expected, "{name}");
        assert_eq!(out.status.code(), Some(*code), "{name}");
    }
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_finsat"))
        .arg("frobnicate")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
