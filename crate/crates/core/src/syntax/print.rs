use std::fmt::{self, Write};

use super::formula::Formula;
use super::vocabulary::is_infix;

/// The grammatical position a subformula is printed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Slot {
    /// Top level, quantifier body, right of `->`, inside parentheses.
    Free,
    ImpLeft,
    OrLeft,
    OrRight,
    AndLeft,
    AndRight,
    NotArg,
}

pub(crate) fn is_infix_atom(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) => true,
        Formula::Atom { rel, args } => args.len() == 2 && is_infix(rel),
        _ => false,
    }
}

/// Whether `f` must be parenthesized when printed in `slot`.
///
/// Quantifiers are parenthesized in every operand position. Infix atoms are
/// parenthesized under negation.
pub(crate) fn needs_parens(f: &Formula, slot: Slot) -> bool {
    match f {
        Formula::Exists(..) | Formula::Forall(..) | Formula::Implies(..) => slot != Slot::Free,
        Formula::Or(..) => matches!(
            slot,
            Slot::OrRight | Slot::AndLeft | Slot::AndRight | Slot::NotArg
        ),
        Formula::And(..) => matches!(slot, Slot::AndRight | Slot::NotArg),
        _ => slot == Slot::NotArg && is_infix_atom(f),
    }
}

fn write_in(f: &Formula, slot: Slot, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if needs_parens(f, slot) {
        out.write_char('(')?;
        write_raw(f, out)?;
        out.write_char(')')
    } else {
        write_raw(f, out)
    }
}

fn write_raw(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::True => out.write_str("true"),
        Formula::False => out.write_str("false"),
        Formula::Atom { rel, args } if args.len() == 2 && is_infix(rel) => {
            write!(out, "{} {} {}", args[0], rel, args[1])
        }
        Formula::Atom { rel, args } => write!(out, "{}({})", rel, args.join(", ")),
        Formula::Eq(x, y) => write!(out, "{x} = {y}"),
        Formula::Not(g) => {
            out.write_char('!')?;
            write_in(g, Slot::NotArg, out)
        }
        Formula::And(a, b) => {
            write_in(a, Slot::AndLeft, out)?;
            out.write_str(" & ")?;
            write_in(b, Slot::AndRight, out)
        }
        Formula::Or(a, b) => {
            write_in(a, Slot::OrLeft, out)?;
            out.write_str(" | ")?;
            write_in(b, Slot::OrRight, out)
        }
        Formula::Implies(a, b) => {
            write_in(a, Slot::ImpLeft, out)?;
            out.write_str(" -> ")?;
            write_in(b, Slot::Free, out)
        }
        Formula::Exists(v, g) => {
            write!(out, "exists {v}. ")?;
            write_in(g, Slot::Free, out)
        }
        Formula::Forall(v, g) => {
            write!(out, "forall {v}. ")?;
            write_in(g, Slot::Free, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_raw(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_examples() {
        let f = Formula::forall("y", Formula::not(Formula::binary("<", "y", "y")));
        assert_eq!(f.to_string(), "forall y. !(y < y)");
        assert_eq!(
            Formula::and(Formula::True, Formula::False).to_string(),
            "true & false"
        );
    }

    #[test]
    fn parenthesization() {
        let p = || Formula::unary("P", "x");
        let q = || Formula::unary("Q", "x");
        let r = || Formula::unary("R", "x");
        let left = Formula::and(Formula::and(p(), q()), r());
        assert_eq!(left.to_string(), "P(x) & Q(x) & R(x)");
        let right = Formula::and(p(), Formula::and(q(), r()));
        assert_eq!(right.to_string(), "P(x) & (Q(x) & R(x))");
        let imp = Formula::implies(Formula::implies(p(), q()), r());
        assert_eq!(imp.to_string(), "(P(x) -> Q(x)) -> R(x)");
        let imp2 = Formula::implies(p(), Formula::implies(q(), r()));
        assert_eq!(imp2.to_string(), "P(x) -> Q(x) -> R(x)");
        let mixed = Formula::or(Formula::and(p(), q()), r());
        assert_eq!(mixed.to_string(), "P(x) & Q(x) | R(x)");
        let quant = Formula::and(Formula::exists("x", p()), q());
        assert_eq!(quant.to_string(), "(exists x. P(x)) & Q(x)");
        let neg = Formula::not(Formula::not(Formula::eq("x", "y")));
        assert_eq!(neg.to_string(), "!!(x = y)");
        let rows = Formula::binary("<'", "r", "s");
        assert_eq!(rows.to_string(), "r <' s");
        let grid = Formula::binary("P_zero", "r", "c");
        assert_eq!(grid.to_string(), "P_zero(r, c)");
    }
}
