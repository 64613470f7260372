use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::formula::{Formula, Sentence, SentenceError};
use super::vocabulary::{is_valid_var, Vocabulary, VocabularyError, ORDER, ROW_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arity error at {line}:{column}: `{symbol}` takes {expected} argument(s), found {found}")]
    Arity {
        line: usize,
        column: usize,
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown symbol `{symbol}` at {line}:{column}")]
    UnknownSymbol {
        line: usize,
        column: usize,
        symbol: String,
    },
    #[error("not a sentence: free variables {}", .0.iter().cloned().collect::<Vec<_>>().join(", "))]
    NotASentence(BTreeSet<String>),
    #[error(transparent)]
    Vocabulary(#[from] VocabularyError),
}

impl From<SentenceError> for ParseError {
    fn from(e: SentenceError) -> Self {
        match e {
            SentenceError::FreeVariables(v) => ParseError::NotASentence(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Forall,
    Exists,
    True,
    False,
    Ident(String),
    Dot,
    Comma,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Lt,
    LtPrime,
    EqSign,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Lt => "`<`".into(),
            Tok::LtPrime => "`<'`".into(),
            Tok::EqSign => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    // (line, column) of every char index, plus one past the end
    let mut pos = Vec::with_capacity(chars.len() + 1);
    let (mut line, mut column) = (1, 1);
    for &c in &chars {
        pos.push((line, column));
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    pos.push((line, column));

    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (line, column) = pos[i];
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line, column });
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            '.' => push(&mut out, Tok::Dot),
            ',' => push(&mut out, Tok::Comma),
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            '!' => push(&mut out, Tok::Bang),
            '&' => push(&mut out, Tok::Amp),
            '|' => push(&mut out, Tok::Pipe),
            '=' => push(&mut out, Tok::EqSign),
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(&mut out, Tok::Arrow);
                i += 1;
            }
            '<' if chars.get(i + 1) == Some(&'\'') => {
                push(&mut out, Tok::LtPrime);
                i += 1;
            }
            '<' => push(&mut out, Tok::Lt),
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                // Symbols may contain `<` and `'`; such a longer name is only
                // taken when it is applied to arguments.
                if j < chars.len() && (chars[j] == '<' || chars[j] == '\'') {
                    let mut k = j;
                    while k < chars.len()
                        && (chars[k].is_ascii_alphanumeric()
                            || matches!(chars[k], '_' | '<' | '\''))
                    {
                        k += 1;
                    }
                    let mut m = k;
                    while m < chars.len() && chars[m].is_whitespace() {
                        m += 1;
                    }
                    if chars.get(m) == Some(&'(') {
                        j = k;
                    }
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                push(&mut out, tok);
                i = j;
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    let (line, column) = pos[chars.len()];
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    at: usize,
    vocab: Option<&'a Vocabulary>,
    seen: BTreeMap<String, usize>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.at];
        (s.line, s.column)
    }

    fn bump(&mut self) -> Spanned {
        let s = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        s
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, column) = self.here();
        Err(ParseError::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    fn var(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if is_valid_var(&name) => {
                self.bump();
                Ok(name)
            }
            other => self.error(format!("expected a variable, found {}", other.describe())),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quant(),
            _ => self.implication(),
        }
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        let universal = self.bump().tok == Tok::Forall;
        let v = self.var()?;
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        Ok(if universal {
            Formula::forall(v, body)
        } else {
            Formula::exists(v, body)
        })
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.negation()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.negation()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn negation(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Bang {
            self.bump();
            Ok(Formula::not(self.negation()?))
        } else {
            self.atom()
        }
    }

    fn check_symbol(
        &mut self,
        symbol: &str,
        found: usize,
        line: usize,
        column: usize,
    ) -> Result<(), ParseError> {
        let expected = match self.vocab {
            Some(vocab) => vocab.arity(symbol).ok_or_else(|| ParseError::UnknownSymbol {
                line,
                column,
                symbol: symbol.to_string(),
            })?,
            None => *self.seen.entry(symbol.to_string()).or_insert(found),
        };
        if expected != found {
            return Err(ParseError::Arity {
                line,
                column,
                symbol: symbol.to_string(),
                expected,
                found,
            });
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Forall | Tok::Exists => self.quant(),
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => match self.peek2().clone() {
                Tok::LParen => {
                    let (line, column) = self.here();
                    self.bump();
                    self.bump();
                    let mut args = vec![self.var()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.var()?);
                    }
                    self.expect(Tok::RParen)?;
                    if super::vocabulary::is_infix(&name) {
                        return Err(ParseError::Syntax {
                            line,
                            column,
                            message: format!("`{name}` must be written infix"),
                        });
                    }
                    self.check_symbol(&name, args.len(), line, column)?;
                    Ok(Formula::Atom { rel: name, args })
                }
                Tok::Lt | Tok::LtPrime | Tok::EqSign => {
                    let left = self.var()?;
                    let (line, column) = self.here();
                    let op = self.bump().tok;
                    let right = self.var()?;
                    let rel = match op {
                        Tok::Lt => ORDER,
                        Tok::LtPrime => ROW_ORDER,
                        _ => return Ok(Formula::Eq(left, right)),
                    };
                    self.check_symbol(rel, 2, line, column)?;
                    Ok(Formula::binary(rel, left, right))
                }
                _ => {
                    if is_valid_var(&name) {
                        self.bump();
                        self.error(format!(
                            "expected `<`, `<'` or `=` after variable `{name}`, found {}",
                            self.peek().describe()
                        ))
                    } else {
                        self.bump();
                        self.error(format!(
                            "expected `(` after symbol `{name}`, found {}",
                            self.peek().describe()
                        ))
                    }
                }
            },
            other => self.error(format!("expected a formula, found {}", other.describe())),
        }
    }
}

fn run(text: &str, vocab: Option<&Vocabulary>) -> Result<(Formula, BTreeMap<String, usize>), ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        vocab,
        seen: BTreeMap::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", p.peek().describe()));
    }
    Ok((f, p.seen))
}

/// Parses `text` against `vocab`, rejecting unknown symbols and arity errors.
pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    run(text, Some(vocab)).map(|(f, _)| f)
}

/// Parses `text` and returns it with the vocabulary read off its atoms.
pub fn parse_inferring(text: &str) -> Result<(Formula, Vocabulary), ParseError> {
    let (f, _) = run(text, None)?;
    let vocab = f.infer_vocabulary()?;
    Ok((f, vocab))
}

pub fn parse_sentence(text: &str, vocab: &Vocabulary) -> Result<Sentence, ParseError> {
    Ok(Sentence::new(parse(text, vocab)?)?)
}
