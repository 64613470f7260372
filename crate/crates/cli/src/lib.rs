//! Command implementations for the `finsat` binary.
//!
//! Every command produces a plain-text report whose last line is
//! `RESULT: <TOKEN>` and an exit code: 0 for a positive answer, 1 for a
//! negative one, 2 for usage errors and 3 when a resource bound ran out.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use finsat::automata::{word_equiv, word_sat, AutomataError, Equivalence};
use finsat::fragment::{
    counterexample_finite_sat, hardness_instance, translate_over_words, FiniteSat, FragmentCache,
    FragmentError, FragmentSpec, Hardness, Translation,
};
use finsat::machine::{parse_input, parse_tm, simulate, Outcome as RunOutcome, Symbol, TmSpec};
use finsat::reduction::{decode_run, grid_vocabulary, min_grid_size, reduce_pair, word_vocabulary};
use finsat::solver::{find_model, find_model_up_to, ground, FindOptions, SolverError};
use finsat::structure::{eval, is_word, Assignment, Structure};
use finsat::syntax::{parse, parse_inferring, Formula, Sentence, Vocabulary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "finsat", version, about = "Finite satisfiability workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FormulaArgs {
    /// Formula text; repeat for commands taking two formulas
    #[arg(short = 'f', long = "formula")]
    pub formula: Vec<String>,
    /// Read a formula from a file
    #[arg(long)]
    pub file: Vec<PathBuf>,
    /// Comma-separated letters of a word vocabulary (adds `<`)
    #[arg(long, value_delimiter = ',')]
    pub letters: Option<Vec<String>>,
}

#[derive(Args, Debug, Clone)]
pub struct MachineArgs {
    /// Machine file
    #[arg(long)]
    pub tm: PathBuf,
    /// Input bit string
    #[arg(long, default_value = "")]
    pub input: String,
    /// Step limit for the simulator
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a formula and report its free variables and vocabulary
    Check(FormulaArgs),
    /// Print a formula in canonical form
    Print(FormulaArgs),
    /// Evaluate a formula in a structure file
    Eval {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long)]
        structure: PathBuf,
        /// Assignment such as `x=0,y=2`
        #[arg(long, value_delimiter = ',')]
        assign: Vec<String>,
    },
    /// Decide satisfiability over nonempty words
    WordSat(FormulaArgs),
    /// Decide equivalence of two sentences over nonempty words
    WordEquiv(FormulaArgs),
    /// Run a machine on an input
    Simulate(MachineArgs),
    /// Build the reduction sentence for a machine and input
    Reduce {
        #[command(flatten)]
        machine: MachineArgs,
        /// Search for models of size 1 up to this bound
        #[arg(long)]
        find_up_to: Option<usize>,
        /// Write the sentence to this file
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Search for a finite model
    FindModel {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, conflicts_with = "find_up_to")]
        size: Option<usize>,
        #[arg(long)]
        find_up_to: Option<usize>,
        /// Conflict budget of the propositional search
        #[arg(long)]
        budget: Option<u64>,
        /// Read `<` as the natural order of the domain
        #[arg(long)]
        fix_order: bool,
        /// Write the model to this file
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the clause set of `--size` in DIMACS form to this file
        #[arg(long, requires = "size")]
        dimacs: Option<PathBuf>,
    },
    /// Find a fragment sentence equivalent over words
    Translate {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, default_value = "full-fo")]
        fragment: String,
        /// Number of enumerated sentences to try
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Decide finite satisfiability inside a fragment, or build and search a
    /// hardness instance with `--tm`
    FragmentSat {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, default_value = "counterexample")]
        fragment: String,
        /// Largest power considered, or the translation budget with `--tm`
        #[arg(long, default_value_t = 8)]
        budget: usize,
        #[arg(long)]
        tm: Option<PathBuf>,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 4)]
        find_up_to: usize,
        /// Machine sentence cache
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Compare the simulator with models of the reduction sentence
    DemoHalting {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long, default_value_t = 4)]
        find_up_to: usize,
    },
}

/// A finished command: report text (ending in a `RESULT:` line) and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

struct Report(String);

impl Report {
    fn new() -> Self {
        Report(String::new())
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.0.push_str(text.as_ref());
        self.0.push('\n');
    }

    fn finish(mut self, code: i32, token: impl AsRef<str>) -> Outcome {
        let _ = writeln!(self.0, "RESULT: {}", token.as_ref());
        Outcome {
            code,
            report: self.0,
        }
    }
}

fn usage(message: impl AsRef<str>) -> Outcome {
    let mut r = Report::new();
    r.line(format!("error: {}", message.as_ref()));
    r.finish(EXIT_USAGE, "USAGE-ERROR")
}

fn resource(message: impl AsRef<str>) -> Outcome {
    let mut r = Report::new();
    r.line(format!("resource limit: {}", message.as_ref()));
    r.finish(EXIT_RESOURCE, "RESOURCE-EXHAUSTED")
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Outcome> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

impl FormulaArgs {
    fn texts(&self) -> Result<Vec<String>, Outcome> {
        let mut out = self.formula.clone();
        for p in &self.file {
            out.push(read(p)?.trim().to_string());
        }
        Ok(out)
    }

    fn vocabulary(&self) -> Result<Option<Vocabulary>, Outcome> {
        match &self.letters {
            None => Ok(None),
            Some(ls) => Vocabulary::word(ls.iter().map(|l| l.trim()))
                .map(Some)
                .map_err(|e| usage(format!("bad letters: {e}"))),
        }
    }

    /// Parses every formula, against `--letters` or `given` when present.
    fn formulas(&self, given: Option<&Vocabulary>) -> Result<(Vec<Formula>, Vocabulary), Outcome> {
        let texts = self.texts()?;
        if texts.is_empty() {
            return Err(usage("no formula given; use --formula or --file"));
        }
        let fixed = match self.vocabulary()? {
            Some(v) => Some(v),
            None => given.cloned(),
        };
        let mut formulas = Vec::new();
        let mut vocab = fixed.clone().unwrap_or_default();
        for t in &texts {
            let parsed = match &fixed {
                Some(v) => parse(t, v).map(|f| (f, v.clone())),
                None => parse_inferring(t),
            };
            let (f, v) = parsed.map_err(|e| usage(format!("{e}")))?;
            vocab = vocab
                .union(&v)
                .map_err(|e| usage(format!("inconsistent vocabularies: {e}")))?;
            formulas.push(f);
        }
        Ok((formulas, vocab))
    }

    fn sentences(&self, count: usize) -> Result<(Vec<Sentence>, Vocabulary), Outcome> {
        let (fs, vocab) = self.formulas(None)?;
        if fs.len() != count {
            return Err(usage(format!("expected {count} formula(s), got {}", fs.len())));
        }
        let sentences = fs
            .into_iter()
            .map(|f| Sentence::new(f).map_err(|e| usage(format!("{e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((sentences, vocab))
    }

    fn word_vocabulary(&self, vocab: Vocabulary) -> Result<Vocabulary, Outcome> {
        if let Some(v) = self.vocabulary()? {
            return Ok(v);
        }
        let mut v = vocab;
        if !v.binary().contains("<") {
            v.add_binary("<").map_err(|e| usage(format!("{e}")))?;
        }
        if !v.is_word_vocabulary() {
            return Err(usage(format!("not a word vocabulary: {v}")));
        }
        Ok(v)
    }
}

impl MachineArgs {
    fn load(&self) -> Result<(TmSpec, Vec<Symbol>), Outcome> {
        let m = parse_tm(&read(&self.tm)?)
            .map_err(|e| usage(format!("{}: {e}", self.tm.display())))?;
        let input = parse_input(&self.input).map_err(|e| usage(format!("{e}")))?;
        Ok((m, input))
    }
}

fn automata_error(e: AutomataError) -> Outcome {
    match e {
        AutomataError::StateCap { .. } => resource(e.to_string()),
        other => usage(other.to_string()),
    }
}

fn solver_error(e: SolverError) -> Outcome {
    match e {
        SolverError::Budget(_) => resource(e.to_string()),
        other => usage(other.to_string()),
    }
}

fn fragment_error(e: FragmentError) -> Outcome {
    match e {
        FragmentError::Automata(a) => automata_error(a),
        FragmentError::Solver(s) => solver_error(s),
        FragmentError::SizeBound { .. } => resource(e.to_string()),
        other => usage(other.to_string()),
    }
}

fn fragment_by_name(name: &str, vocab: &Vocabulary, bound: usize) -> Result<FragmentSpec, Outcome> {
    match name {
        "full-fo" => Ok(FragmentSpec::full_fo(vocab)),
        "counterexample" => Ok(FragmentSpec::counterexample(vocab, bound)),
        "reject-all" => Ok(FragmentSpec::reject_all(vocab)),
        other => Err(usage(format!(
            "unknown fragment `{other}`; known: full-fo, counterexample, reject-all"
        ))),
    }
}

fn input_label(input: &[Symbol]) -> String {
    if input.is_empty() {
        "(empty)".to_string()
    } else {
        input.iter().map(|s| s.as_char()).collect()
    }
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Check(f) => check(&f),
        Command::Print(f) => print(&f),
        Command::Eval {
            formula,
            structure,
            assign,
        } => eval_cmd(&formula, &structure, &assign),
        Command::WordSat(f) => word_sat_cmd(&f),
        Command::WordEquiv(f) => word_equiv_cmd(&f),
        Command::Simulate(m) => simulate_cmd(&m),
        Command::Reduce {
            machine,
            find_up_to,
            out,
            budget,
        } => reduce_cmd(&machine, find_up_to, out.as_deref(), budget),
        Command::FindModel {
            formula,
            size,
            find_up_to,
            budget,
            fix_order,
            out,
            dimacs,
        } => find_model_cmd(
            &formula,
            size,
            find_up_to,
            FindOptions {
                fix_order,
                conflict_budget: budget,
            },
            out.as_deref(),
            dimacs.as_deref(),
        ),
        Command::Translate {
            formula,
            fragment,
            budget,
        } => translate_cmd(&formula, &fragment, budget),
        Command::FragmentSat {
            formula,
            fragment,
            budget,
            tm,
            input,
            find_up_to,
            cache,
        } => match tm {
            None => fragment_sat_cmd(&formula, &fragment, budget),
            Some(tm) => hardness_cmd(&fragment, &tm, &input, budget, find_up_to, cache.as_deref()),
        },
        Command::DemoHalting {
            machine,
            find_up_to,
        } => demo_halting(&machine, find_up_to),
    };
    result.unwrap_or_else(|o| o)
}

fn check(args: &FormulaArgs) -> Result<Outcome, Outcome> {
    let (fs, vocab) = args.formulas(None)?;
    let mut r = Report::new();
    let mut closed = true;
    for f in &fs {
        let free: Vec<String> = f.free_vars().into_iter().collect();
        closed &= free.is_empty();
        r.line(format!("formula: {f}"));
        r.line(format!("free variables: {}", if free.is_empty() { "none".into() } else { free.join(", ") }));
    }
    r.line(format!("vocabulary: {vocab}"));
    Ok(if closed {
        r.finish(EXIT_OK, "SENTENCE")
    } else {
        r.finish(EXIT_NEGATIVE, "NOT-A-SENTENCE")
    })
}

fn print(args: &FormulaArgs) -> Result<Outcome, Outcome> {
    let (fs, _) = args.formulas(None)?;
    let mut r = Report::new();
    for f in &fs {
        r.line(f.to_string());
    }
    Ok(r.finish(EXIT_OK, "OK"))
}

fn eval_cmd(args: &FormulaArgs, structure: &Path, assign: &[String]) -> Result<Outcome, Outcome> {
    let s = Structure::from_text(&read(structure)?, args.vocabulary()?.as_ref())
        .map_err(|e| usage(format!("{}: {e}", structure.display())))?;
    let (fs, _) = args.formulas(Some(&s.vocabulary()))?;
    let mut a = Assignment::new();
    for item in assign {
        let parsed = item
            .split_once('=')
            .and_then(|(v, e)| Some((v.trim(), e.trim().parse::<usize>().ok()?)));
        let Some((v, e)) = parsed else {
            return Err(usage(format!("bad assignment `{item}`; expected var=element")));
        };
        a.set(v, e);
    }
    let mut r = Report::new();
    let mut all = true;
    for f in &fs {
        let value = eval(f, &s, &a).map_err(|e| usage(e.to_string()))?;
        r.line(format!("{f}: {value}"));
        all &= value;
    }
    Ok(if all {
        r.finish(EXIT_OK, "TRUE")
    } else {
        r.finish(EXIT_NEGATIVE, "FALSE")
    })
}

fn word_sat_cmd(args: &FormulaArgs) -> Result<Outcome, Outcome> {
    let (ss, vocab) = args.sentences(1)?;
    let vocab = args.word_vocabulary(vocab)?;
    let mut r = Report::new();
    r.line(format!("sentence: {}", ss[0]));
    r.line(format!("vocabulary: {vocab}"));
    Ok(match word_sat(&ss[0], &vocab).map_err(automata_error)? {
        Some(w) => {
            r.line(format!("witness: {w}"));
            r.finish(EXIT_OK, "SAT")
        }
        None => r.finish(EXIT_NEGATIVE, "UNSAT"),
    })
}

fn word_equiv_cmd(args: &FormulaArgs) -> Result<Outcome, Outcome> {
    let (ss, vocab) = args.sentences(2)?;
    let vocab = args.word_vocabulary(vocab)?;
    let mut r = Report::new();
    r.line(format!("first: {}", ss[0]));
    r.line(format!("second: {}", ss[1]));
    r.line(format!("vocabulary: {vocab}"));
    Ok(match word_equiv(&ss[0], &ss[1], &vocab).map_err(automata_error)? {
        Equivalence::Equivalent => r.finish(EXIT_OK, "EQUIVALENT"),
        Equivalence::Distinguished(w) => {
            r.line(format!("distinguishing word: {w}"));
            r.finish(EXIT_NEGATIVE, "DIFFERENT")
        }
    })
}

fn simulate_cmd(args: &MachineArgs) -> Result<Outcome, Outcome> {
    let (m, input) = args.load()?;
    let mut r = Report::new();
    r.line(format!("machine: {}", args.tm.display()));
    r.line(format!("input: {}", input_label(&input)));
    Ok(match simulate(&m, &input, args.max_steps) {
        RunOutcome::Halted {
            steps,
            cells_used,
            trace,
        } => {
            r.line(format!("steps: {steps}"));
            r.line(format!("cells used: {cells_used}"));
            r.0.push_str(&trace.to_string());
            r.finish(EXIT_OK, "HALTED")
        }
        RunOutcome::Running => {
            r.line(format!("no halt within {} steps", args.max_steps));
            r.finish(EXIT_NEGATIVE, "RUNNING")
        }
        RunOutcome::FellOffTape { steps } => {
            r.line(format!("moved left of cell 0 at step {steps}"));
            r.finish(EXIT_NEGATIVE, "FELL-OFF-TAPE")
        }
    })
}

fn reduce_cmd(
    args: &MachineArgs,
    find_up_to: Option<usize>,
    out: Option<&Path>,
    budget: Option<u64>,
) -> Result<Outcome, Outcome> {
    let (m, input) = args.load()?;
    let s = reduce_pair(&m, &input);
    let vocab = grid_vocabulary(&m);
    let mut r = Report::new();
    r.line(format!("machine: {}", args.tm.display()));
    r.line(format!("input: {}", input_label(&input)));
    r.line(format!("vocabulary: {vocab}"));
    r.line(format!("sentence size: {}", s.formula().size()));
    if let Some(path) = out {
        write(path, &format!("{s}\n"))?;
        r.line(format!("sentence written to {}", path.display()));
    }
    let Some(k) = find_up_to else {
        if out.is_none() {
            r.line(s.to_string());
        }
        return Ok(r.finish(EXIT_OK, "OK"));
    };
    let opts = FindOptions {
        fix_order: false,
        conflict_budget: budget,
    };
    Ok(match find_model_up_to(&s, k, &vocab, &opts).map_err(solver_error)? {
        Some((n, model)) => {
            r.line(format!("model of size {n}:"));
            r.0.push_str(&model.to_text());
            r.finish(EXIT_OK, format!("MODEL {n}"))
        }
        None => r.finish(EXIT_NEGATIVE, format!("NO-MODEL-UP-TO {k}")),
    })
}

fn find_model_cmd(
    args: &FormulaArgs,
    size: Option<usize>,
    find_up_to: Option<usize>,
    opts: FindOptions,
    out: Option<&Path>,
    dimacs: Option<&Path>,
) -> Result<Outcome, Outcome> {
    let (ss, vocab) = args.sentences(1)?;
    let s = &ss[0];
    let mut r = Report::new();
    r.line(format!("sentence: {s}"));
    r.line(format!("vocabulary: {vocab}"));
    let found = match (size, find_up_to) {
        (Some(0), _) | (_, Some(0)) => return Err(usage("sizes start at 1")),
        (Some(n), _) => {
            if let Some(path) = dimacs {
                let clauses = ground(s, n).map_err(solver_error)?;
                write(path, &clauses.to_dimacs())?;
                r.line(format!("clauses written to {}", path.display()));
            }
            find_model(s, n, &vocab, &opts)
                .map_err(solver_error)?
                .map(|m| (n, m))
        }
        (None, Some(k)) => find_model_up_to(s, k, &vocab, &opts).map_err(solver_error)?,
        (None, None) => return Err(usage("give --size or --find-up-to")),
    };
    Ok(match found {
        Some((n, model)) => {
            r.line(format!("model of size {n}:"));
            r.0.push_str(&model.to_text());
            if let Some(path) = out {
                write(path, &model.to_text())?;
                r.line(format!("model written to {}", path.display()));
            }
            r.finish(EXIT_OK, format!("MODEL {n}"))
        }
        None => match (size, find_up_to) {
            (Some(n), _) => r.finish(EXIT_NEGATIVE, format!("NO-MODEL {n}")),
            (_, k) => r.finish(EXIT_NEGATIVE, format!("NO-MODEL-UP-TO {}", k.unwrap_or(0))),
        },
    })
}

fn translate_cmd(args: &FormulaArgs, fragment: &str, budget: usize) -> Result<Outcome, Outcome> {
    let (ss, vocab) = args.sentences(1)?;
    let vocab = args.word_vocabulary(vocab)?;
    let frag = fragment_by_name(fragment, &vocab, 8)?;
    let mut r = Report::new();
    r.line(format!("sentence: {}", ss[0]));
    r.line(format!("fragment: {}", frag.name));
    Ok(
        match translate_over_words(&frag, &ss[0], &vocab, budget).map_err(fragment_error)? {
            Translation::Found { sentence, index } => {
                r.line(format!("translation: {sentence}"));
                r.line(match index {
                    Some(i) => format!("enumeration index: {i}"),
                    None => "enumeration index: none (input is a member)".to_string(),
                });
                r.finish(EXIT_OK, "TRANSLATED")
            }
            Translation::Exhausted => {
                r.line(format!("no equivalent member among the first {budget} sentences"));
                r.finish(EXIT_RESOURCE, "EXHAUSTED")
            }
        },
    )
}

fn fragment_sat_cmd(args: &FormulaArgs, fragment: &str, bound: usize) -> Result<Outcome, Outcome> {
    if fragment != "counterexample" {
        return Err(usage(
            "without --tm only the counterexample fragment has a decision procedure",
        ));
    }
    let (ss, _) = args.sentences(1)?;
    let mut r = Report::new();
    r.line(format!("sentence: {}", ss[0]));
    r.line("fragment: counterexample");
    Ok(
        match counterexample_finite_sat(&ss[0], bound).map_err(fragment_error)? {
            FiniteSat::Satisfiable(model) => {
                r.line(format!("model of size {}:", model.size()));
                r.0.push_str(&model.to_text());
                r.finish(EXIT_OK, "SAT")
            }
            FiniteSat::Unsatisfiable => r.finish(EXIT_NEGATIVE, "UNSAT"),
            FiniteSat::NotInFragment => r.finish(EXIT_NEGATIVE, "NOT-IN-FRAGMENT"),
        },
    )
}

fn hardness_cmd(
    fragment: &str,
    tm: &Path,
    input: &str,
    budget: usize,
    find_up_to: usize,
    cache: Option<&Path>,
) -> Result<Outcome, Outcome> {
    let machine = MachineArgs {
        tm: tm.to_path_buf(),
        input: input.to_string(),
        max_steps: 0,
    };
    let (m, input) = machine.load()?;
    let frag = fragment_by_name(fragment, &word_vocabulary(), 8)?;
    let cache = match cache {
        Some(p) => Some(FragmentCache::parse(&read(p)?).map_err(|e| usage(e.to_string()))?),
        None => None,
    };
    let mut r = Report::new();
    r.line(format!("machine: {}", tm.display()));
    r.line(format!("input: {}", input_label(&input)));
    r.line(format!("fragment: {}", frag.name));
    let s = match hardness_instance(&frag, &m, &input, budget, cache.as_ref())
        .map_err(fragment_error)?
    {
        Hardness::Instance(s) => s,
        Hardness::Exhausted => {
            r.line("translation budget exhausted");
            return Ok(r.finish(EXIT_RESOURCE, "EXHAUSTED"));
        }
    };
    r.line(format!("instance size: {}", s.formula().size()));
    let vocab = grid_vocabulary(&m);
    Ok(
        match find_model_up_to(&s, find_up_to, &vocab, &FindOptions::default())
            .map_err(solver_error)?
        {
            Some((n, _)) => r.finish(EXIT_OK, format!("MODEL {n}")),
            None => r.finish(EXIT_NEGATIVE, format!("NO-MODEL-UP-TO {find_up_to}")),
        },
    )
}

fn demo_halting(args: &MachineArgs, max_size: usize) -> Result<Outcome, Outcome> {
    let (m, input) = args.load()?;
    let mut r = Report::new();
    r.line(format!("machine: {}", args.tm.display()));
    r.line(format!("input: {}", input_label(&input)));
    let oracle = simulate(&m, &input, args.max_steps);
    let expected = match &oracle {
        RunOutcome::Halted {
            steps,
            cells_used,
            trace,
        } => {
            r.line(format!(
                "oracle: HALTED after {steps} step(s), {cells_used} cell(s), grid size {}",
                min_grid_size(&m, &input, args.max_steps).expect("halted")
            ));
            Some(trace.clone())
        }
        RunOutcome::Running => {
            r.line(format!("oracle: RUNNING after {} steps", args.max_steps));
            None
        }
        RunOutcome::FellOffTape { steps } => {
            r.line(format!("oracle: FELL-OFF-TAPE at step {steps}"));
            None
        }
    };
    let s = reduce_pair(&m, &input);
    let vocab = grid_vocabulary(&m);
    let found = find_model_up_to(&s, max_size, &vocab, &FindOptions::default())
        .map_err(solver_error)?;
    let Some((n, model)) = found else {
        r.line(format!("solver: no model up to size {max_size}"));
        return Ok(match expected {
            None => r.finish(EXIT_OK, "AGREE"),
            Some(_) => {
                let needed = min_grid_size(&m, &input, args.max_steps).expect("halted");
                r.line(format!("note: the halting run needs a grid of size {needed}"));
                if needed > max_size {
                    r.finish(EXIT_NEGATIVE, format!("NO-MODEL-UP-TO {max_size}"))
                } else {
                    r.finish(EXIT_NEGATIVE, "MISMATCH")
                }
            }
        });
    };
    r.line(format!("solver: model of size {n}"));
    let decoded = decode_run(&model, &m).map_err(|e| usage(format!("decoding failed: {e}")))?;
    let word_part = model
        .restrict(&word_vocabulary())
        .map_err(|e| usage(e.to_string()))?;
    let is_word_ok = is_word(&word_part).map_err(|e| usage(e.to_string()))?;
    r.line(format!("word restriction is a word: {}", if is_word_ok { "yes" } else { "no" }));
    let Some(expected) = expected else {
        r.line("decoded:");
        r.0.push_str(&decoded.to_string());
        return Ok(r.finish(EXIT_NEGATIVE, "MISMATCH"));
    };
    let rows = expected.len().max(decoded.len());
    let width = expected
        .configs()
        .iter()
        .map(|c| c.to_string().len())
        .max()
        .unwrap_or(0)
        .max("oracle".len());
    r.line(format!("step  {:<width$}  decoded", "oracle"));
    let mut agree = is_word_ok && expected == decoded;
    for i in 0..rows {
        let a = expected.configs().get(i).map(|c| c.to_string()).unwrap_or_default();
        let b = decoded.configs().get(i).map(|c| c.to_string()).unwrap_or_default();
        let mark = if a == b { "" } else { "  <-- differs" };
        agree &= a == b;
        r.line(format!("{i:>4}  {a:<width$}  {b}{mark}"));
    }
    Ok(if agree {
        r.finish(EXIT_OK, "AGREE")
    } else {
        r.finish(EXIT_NEGATIVE, "MISMATCH")
    })
}
