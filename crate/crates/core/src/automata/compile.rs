use std::collections::BTreeSet;

use super::nfa::{LayeredAlphabet, Letter, Nfa};
use super::AutomataError;
use crate::structure::Word;
use crate::syntax::{Formula, Sentence, Vocabulary, ORDER};

/// Default bound on the number of subsets created by one determinization.
pub const DEFAULT_STATE_CAP: usize = 1 << 20;

/// Outcome of comparing two sentences over words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// A shortest word on which the sentences disagree.
    Distinguished(Word),
}

/// Compiles formulas over a fixed word vocabulary.
#[derive(Clone, Debug)]
pub struct Compiler {
    vocab: Vocabulary,
    base: Vec<String>,
    state_cap: usize,
}

impl Compiler {
    pub fn new(vocab: &Vocabulary) -> Result<Self, AutomataError> {
        if !vocab.is_word_vocabulary() {
            return Err(AutomataError::BadVocabulary(vocab.to_string()));
        }
        Ok(Compiler {
            vocab: vocab.clone(),
            base: vocab.unary().iter().cloned().collect(),
            state_cap: DEFAULT_STATE_CAP,
        })
    }

    pub fn with_state_cap(mut self, cap: usize) -> Self {
        self.state_cap = cap;
        self
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn alphabet(&self, tracks: Vec<String>) -> Result<LayeredAlphabet, AutomataError> {
        LayeredAlphabet::new(self.base.clone(), tracks)
    }

    /// Automaton over `tracks` accepting the valid annotated words that
    /// satisfy `f` under the assignment the tracks encode.
    pub fn formula_to_nfa(&self, f: &Formula, tracks: &[String]) -> Result<Nfa, AutomataError> {
        // validates duplicates
        self.alphabet(tracks.to_vec())?;
        if let Some(missing) = f.free_vars().into_iter().find(|v| !tracks.contains(v)) {
            return Err(AutomataError::MissingTrack(missing));
        }
        let mut counter = 0;
        let renamed = rename_bound(f, &mut Vec::new(), &mut counter);
        self.compile(&renamed)?.extend_tracks(tracks)
    }

    fn tracks_of(f: &Formula) -> Vec<String> {
        f.free_vars().into_iter().collect()
    }

    fn compile(&self, f: &Formula) -> Result<Nfa, AutomataError> {
        let nfa = match f {
            Formula::True => Nfa::universal(self.alphabet(Vec::new())?),
            Formula::False => Nfa::empty(self.alphabet(Vec::new())?),
            Formula::Atom { rel, args } => self.atom(rel, args)?,
            Formula::Eq(x, y) => self.equal(x, y)?,
            Formula::Not(g) => {
                let inner = self.compile(g)?;
                let complement = inner.determinize_complement(self.state_cap)?;
                let valid = Nfa::valid_tracks(inner.alphabet().clone());
                complement.product_intersect(&valid)?
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let tracks = Self::tracks_of(f);
                let left = self.compile(a)?.extend_tracks(&tracks)?;
                let right = self.compile(b)?.extend_tracks(&tracks)?;
                if matches!(f, Formula::And(..)) {
                    left.product_intersect(&right)?
                } else {
                    left.union(&right)?
                }
            }
            Formula::Implies(a, b) => {
                let rewritten = Formula::Or(Box::new(Formula::Not(a.clone())), b.clone());
                return self.compile(&rewritten);
            }
            Formula::Exists(v, g) => {
                let inner = self.compile(g)?;
                if inner.alphabet().track_index(v).is_some() {
                    inner.project_exists(v)?
                } else {
                    inner
                }
            }
            Formula::Forall(v, g) => {
                let rewritten = Formula::not(Formula::exists(v.clone(), Formula::not((**g).clone())));
                return self.compile(&rewritten);
            }
        };
        Ok(nfa.trim())
    }

    fn letter_index(&self, rel: &str) -> Result<usize, AutomataError> {
        self.base
            .iter()
            .position(|b| b == rel)
            .ok_or_else(|| AutomataError::NotWordVocabulary(rel.to_string()))
    }

    fn atom(&self, rel: &str, args: &[String]) -> Result<Nfa, AutomataError> {
        match args {
            [x] => {
                let target = self.letter_index(rel)?;
                let a = self.alphabet(vec![x.clone()])?;
                let mut trans = Vec::new();
                for b in 0..self.base.len() {
                    trans.push((0, a.letter(b, 0), 0));
                    trans.push((1, a.letter(b, 0), 1));
                }
                trans.push((0, a.letter(target, 1), 1));
                Ok(Nfa::from_parts(a, 2, trans, [0], [1]).expect("well-formed"))
            }
            [x, y] if rel == ORDER && self.vocab.binary().contains(ORDER) => {
                if x == y {
                    return Ok(Nfa::empty(self.alphabet(vec![x.clone()])?));
                }
                let tracks: Vec<String> = BTreeSet::from([x.clone(), y.clone()]).into_iter().collect();
                let a = self.alphabet(tracks)?;
                let bx = 1 << a.track_index(x).unwrap();
                let by = 1 << a.track_index(y).unwrap();
                let mut trans = Vec::new();
                for b in 0..self.base.len() {
                    for q in 0..3 {
                        trans.push((q, a.letter(b, 0), q));
                    }
                    trans.push((0, a.letter(b, bx), 1));
                    trans.push((1, a.letter(b, by), 2));
                }
                Ok(Nfa::from_parts(a, 3, trans, [0], [2]).expect("well-formed"))
            }
            _ => Err(AutomataError::NotWordVocabulary(rel.to_string())),
        }
    }

    fn equal(&self, x: &str, y: &str) -> Result<Nfa, AutomataError> {
        if x == y {
            return Ok(Nfa::valid_tracks(self.alphabet(vec![x.to_string()])?));
        }
        let tracks: Vec<String> = BTreeSet::from([x.to_string(), y.to_string()])
            .into_iter()
            .collect();
        let a = self.alphabet(tracks)?;
        let mut trans = Vec::new();
        for b in 0..self.base.len() {
            trans.push((0, a.letter(b, 0), 0));
            trans.push((1, a.letter(b, 0), 1));
            trans.push((0, a.letter(b, 0b11), 1));
        }
        Ok(Nfa::from_parts(a, 2, trans, [0], [1]).expect("well-formed"))
    }

    /// Automaton of a sentence restricted to nonempty words.
    fn sentence_nfa(&self, s: &Sentence) -> Result<Nfa, AutomataError> {
        let nfa = self.formula_to_nfa(s.formula(), &[])?;
        Ok(nfa.product_intersect(&Nfa::nonempty(nfa.alphabet().clone()))?.trim())
    }

    fn decode(&self, letters: &[Letter]) -> Word {
        Word(letters.iter().map(|&l| self.base[l as usize].clone()).collect())
    }

    /// A shortest (then least) nonempty word satisfying `s`, if any.
    pub fn word_sat(&self, s: &Sentence) -> Result<Option<Word>, AutomataError> {
        let nfa = self.sentence_nfa(s)?;
        Ok(nfa.is_empty_with_witness().map(|w| self.decode(&w)))
    }

    pub fn word_equiv(&self, s1: &Sentence, s2: &Sentence) -> Result<Equivalence, AutomataError> {
        let a = self.sentence_nfa(s1)?;
        let b = self.sentence_nfa(s2)?;
        let not_a = a.determinize_complement(self.state_cap)?;
        let not_b = b.determinize_complement(self.state_cap)?;
        let diff = a
            .product_intersect(&not_b)?
            .union(&b.product_intersect(&not_a)?)?
            .trim();
        Ok(match diff.is_empty_with_witness() {
            None => Equivalence::Equivalent,
            Some(w) => Equivalence::Distinguished(self.decode(&w)),
        })
    }
}

fn rename_bound(f: &Formula, env: &mut Vec<(String, String)>, counter: &mut usize) -> Formula {
    let var = |v: &String, env: &Vec<(String, String)>| {
        env.iter()
            .rev()
            .find(|(from, _)| from == v)
            .map(|(_, to)| to.clone())
            .unwrap_or_else(|| v.clone())
    };
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom { rel, args } => Formula::Atom {
            rel: rel.clone(),
            args: args.iter().map(|a| var(a, env)).collect(),
        },
        Formula::Eq(x, y) => Formula::Eq(var(x, env), var(y, env)),
        Formula::Not(g) => Formula::not(rename_bound(g, env, counter)),
        Formula::And(a, b) => Formula::and(rename_bound(a, env, counter), rename_bound(b, env, counter)),
        Formula::Or(a, b) => Formula::or(rename_bound(a, env, counter), rename_bound(b, env, counter)),
        Formula::Implies(a, b) => {
            Formula::implies(rename_bound(a, env, counter), rename_bound(b, env, counter))
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            *counter += 1;
            // '#' cannot occur in user variables
            let fresh = format!("#{counter}");
            env.push((v.clone(), fresh.clone()));
            let body = rename_bound(g, env, counter);
            env.pop();
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(fresh, body)
            } else {
                Formula::forall(fresh, body)
            }
        }
    }
}

/// Compiles `f` over `vocab` with the default state cap.
pub fn formula_to_nfa(
    f: &Formula,
    vocab: &Vocabulary,
    tracks: &[String],
) -> Result<Nfa, AutomataError> {
    Compiler::new(vocab)?.formula_to_nfa(f, tracks)
}

/// Decides satisfiability of `s` over nonempty words of `vocab`.
pub fn word_sat(s: &Sentence, vocab: &Vocabulary) -> Result<Option<Word>, AutomataError> {
    Compiler::new(vocab)?.word_sat(s)
}

/// Decides equivalence of two sentences over nonempty words of `vocab`.
pub fn word_equiv(
    s1: &Sentence,
    s2: &Sentence,
    vocab: &Vocabulary,
) -> Result<Equivalence, AutomataError> {
    Compiler::new(vocab)?.word_equiv(s1, s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{eval, word_to_structure, Assignment};
    use crate::syntax::{parse, parse_sentence};

    fn zo() -> Vocabulary {
        Vocabulary::word(["O", "Z"]).unwrap()
    }

    fn words(letters: &[&str], len: usize) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w: Vec<String>| {
                    letters.iter().map(move |l| {
                        let mut v = w.clone();
                        v.push(l.to_string());
                        v
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn exists_o_matches_eval() {
        let vocab = zo();
        let f = parse("exists x. O(x)", &vocab).unwrap();
        let nfa = formula_to_nfa(&f, &vocab, &[]).unwrap();
        for len in 1..=5 {
            for w in words(&["O", "Z"], len) {
                let s = word_to_structure(&Word(w.clone()), &vocab).unwrap();
                let expected = eval(&f, &s, &Assignment::new()).unwrap();
                let letters = nfa.alphabet().annotate(&w, &[]).unwrap();
                assert_eq!(nfa.accepts(&letters), expected, "{w:?}");
            }
        }
    }

    #[test]
    fn false_is_empty() {
        let nfa = formula_to_nfa(&Formula::False, &zo(), &[]).unwrap();
        assert!(nfa.is_empty());
    }

    #[test]
    fn less_than_over_two_tracks() {
        let vocab = zo();
        let f = parse("x < y", &vocab).unwrap();
        let tracks = vec!["x".to_string(), "y".to_string()];
        let nfa = formula_to_nfa(&f, &vocab, &tracks).unwrap();
        for len in 1..=4 {
            for w in words(&["O", "Z"], len) {
                for px in 0..len {
                    for py in 0..len {
                        let letters = nfa.alphabet().annotate(&w, &[("x", px), ("y", py)]).unwrap();
                        assert_eq!(nfa.accepts(&letters), px < py);
                    }
                }
            }
        }
        let swapped = vec!["y".to_string(), "x".to_string()];
        let nfa2 = formula_to_nfa(&f, &vocab, &swapped).unwrap();
        let letters = nfa2.alphabet().annotate(&words(&["Z"], 2)[0], &[("x", 0), ("y", 1)]).unwrap();
        assert!(nfa2.accepts(&letters));
    }

    #[test]
    fn projection_matches_quantifier() {
        let vocab = zo();
        let c = Compiler::new(&vocab).unwrap();
        let o = c
            .formula_to_nfa(&Formula::unary("O", "x"), &["x".to_string()])
            .unwrap()
            .project_exists("x")
            .unwrap();
        let direct = c
            .formula_to_nfa(&parse("exists x. O(x)", &vocab).unwrap(), &[])
            .unwrap();
        for len in 0..=5 {
            for w in words(&["O", "Z"], len) {
                let l = o.alphabet().annotate(&w, &[]).unwrap();
                assert_eq!(o.accepts(&l), direct.accepts(&l));
            }
        }
    }

    #[test]
    fn construction_errors() {
        let vocab = zo();
        let c = Compiler::new(&vocab).unwrap();
        assert_eq!(
            c.formula_to_nfa(&Formula::unary("O", "x"), &[]),
            Err(AutomataError::MissingTrack("x".into()))
        );
        assert_eq!(
            c.formula_to_nfa(&Formula::binary("<'", "x", "y"), &["x".into(), "y".into()]),
            Err(AutomataError::NotWordVocabulary("<'".into()))
        );
        assert_eq!(
            c.formula_to_nfa(&Formula::unary("E", "x"), &["x".into()]),
            Err(AutomataError::NotWordVocabulary("E".into()))
        );
        let grid = Vocabulary::new(["Z"], ["<", "<'"]).unwrap();
        assert!(matches!(Compiler::new(&grid), Err(AutomataError::BadVocabulary(_))));
        let tiny = Compiler::new(&vocab).unwrap().with_state_cap(1);
        assert!(matches!(
            tiny.formula_to_nfa(&parse("!exists x. O(x)", &vocab).unwrap(), &[]),
            Err(AutomataError::StateCap { cap: 1 })
        ));
    }

    #[test]
    fn word_sat_examples() {
        let vocab = zo();
        let both = parse_sentence("exists x. Z(x) & O(x)", &vocab).unwrap();
        assert_eq!(word_sat(&both, &vocab).unwrap(), None);
        let t = parse_sentence("true", &vocab).unwrap();
        assert_eq!(word_sat(&t, &vocab).unwrap().unwrap().len(), 1);
        let o = parse_sentence("exists x. O(x)", &vocab).unwrap();
        assert_eq!(word_sat(&o, &vocab).unwrap(), Some(Word::new(["O"])));
    }

    #[test]
    fn word_equiv_examples() {
        let vocab = zo();
        let o = parse_sentence("exists x. O(x)", &vocab).unwrap();
        let t = parse_sentence("true", &vocab).unwrap();
        assert_eq!(word_equiv(&o, &o, &vocab).unwrap(), Equivalence::Equivalent);
        assert_eq!(
            word_equiv(&o, &t, &vocab).unwrap(),
            Equivalence::Distinguished(Word::new(["Z"]))
        );
        // shadowed variables are handled by renaming
        let shadow = parse_sentence("exists x. O(x) & (exists x. O(x))", &vocab).unwrap();
        assert_eq!(word_equiv(&o, &shadow, &vocab).unwrap(), Equivalence::Equivalent);
    }
}
