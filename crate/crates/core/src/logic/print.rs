//! Formula rendering. Output re-parses to a structurally equal formula.

use core::fmt;

use super::ast::{Formula, Op};

// Binding strength, loosest to tightest. Matches the parser.
const LVL_OR: u8 = 2;
const LVL_AND: u8 = 3;
const LVL_SINCE: u8 = 4;
const LVL_UNARY: u8 = 5;
const LVL_ATOM: u8 = 6;

/// Recognizes the sugar shape `!(​!x & !y)` so disjunctions built through
/// `or` print back as `x | y`.
fn as_or(phi: &Formula) -> Option<(&Formula, &Formula)> {
    if let Op::Not(inner) = phi.op() {
        if let Op::And(l, r) = inner.op() {
            if let (Op::Not(x), Op::Not(y)) = (l.op(), r.op()) {
                return Some((x, y));
            }
        }
    }
    None
}

fn level(phi: &Formula) -> u8 {
    if phi.is_canonical_true() || phi.is_canonical_false() {
        return LVL_ATOM;
    }
    if as_or(phi).is_some() {
        return LVL_OR;
    }
    match phi.op() {
        Op::Sym(_) | Op::Bos => LVL_ATOM,
        Op::Not(_) | Op::Y(_) | Op::H(_) => LVL_UNARY,
        Op::And(..) => LVL_AND,
        Op::S(..) => LVL_SINCE,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, phi: &Formula, min: u8) -> fmt::Result {
    let lvl = level(phi);
    let parens = lvl < min;
    if parens {
        write!(f, "(")?;
    }
    if phi.is_canonical_true() {
        write!(f, "true")?;
    } else if phi.is_canonical_false() {
        write!(f, "false")?;
    } else if let Some((x, y)) = as_or(phi) {
        write_at(f, x, LVL_AND)?;
        write!(f, " | ")?;
        write_at(f, y, LVL_AND)?;
    } else {
        match phi.op() {
            Op::Sym(s) => write!(f, "{}", phi.alphabet().symbol(*s))?,
            Op::Bos => write!(f, "bos")?,
            Op::Not(a) => {
                write!(f, "!")?;
                write_at(f, a, LVL_UNARY)?;
            }
            Op::Y(a) => {
                write!(f, "Y ")?;
                write_at(f, a, LVL_UNARY)?;
            }
            Op::H(a) => {
                write!(f, "H ")?;
                write_at(f, a, LVL_UNARY)?;
            }
            Op::And(a, b) => {
                write_at(f, a, LVL_AND)?;
                write!(f, " & ")?;
                write_at(f, b, LVL_SINCE)?;
            }
            Op::S(a, b) => {
                write_at(f, a, LVL_UNARY)?;
                write!(f, " S ")?;
                write_at(f, b, LVL_SINCE)?;
            }
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, 0)
    }
}
