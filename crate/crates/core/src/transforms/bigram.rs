//! Bigram rewriting: encoding a string as its sequence of adjacent symbol
//! pairs and pushing one level of `Y` into the pair alphabet.
//!
//! `bigram_map` sends `w = w_1..w_n` (nonempty) to
//! `(bos,w_1)(w_1,w_2)…(w_{n-1},w_n)(w_n,eos)` over the pair alphabet
//! `(Σ∪{bos})×(Σ∪{eos})`; a pair of `x` and `y` is the symbol named
//! `x.y`.
//!
//! `noy_transform` rewrites a `TL[H,Y]` formula of `Y`-depth at most one
//! into a `Y`-free formula over the pair alphabet: the pair at position
//! `i` carries both the current symbol (second component) and yesterday's
//! (first component), so one `Y` level reads first components instead.
//! The rewritten formula is evaluated on a bigram image at its last
//! proper-pair position — position `|w|`, just before the end-of-string
//! pad pair — where it holds iff `w` satisfies the original. (Evaluating
//! at the pad position itself cannot work for any rewriting: a `Y`-free
//! formula there cannot recover `w_{n-1}`, which `Y`-depth-one formulas
//! can see. The pad pair is inert under this convention; quantifiers
//! never reach past position `|w|`.)

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use super::TransformError;
use crate::logic::{Alphabet, Formula, Op, SymbolId};

/// Index of the pair `(first, second)` in `alphabet.bigram_alphabet()`,
/// where `first` is `None` for `bos` and `second` is `None` for `eos`.
fn pair_id(
    alphabet: &Alphabet,
    first: Option<SymbolId>,
    second: Option<SymbolId>,
) -> SymbolId {
    let k = alphabet.len();
    let f = first.unwrap_or(k);
    let s = second.unwrap_or(k);
    f * (k + 1) + s
}

/// The bigram image of a nonempty string, over `alphabet.bigram_alphabet()`.
pub fn bigram_map(alphabet: &Alphabet, w: &[SymbolId]) -> Result<Vec<SymbolId>, BigramError> {
    if w.is_empty() {
        return Err(BigramError::EmptyString);
    }
    if let Some(&bad) = w.iter().find(|&&s| s >= alphabet.len()) {
        return Err(BigramError::SymbolOutsideAlphabet(bad));
    }
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(pair_id(alphabet, None, Some(w[0])));
    for i in 1..w.len() {
        out.push(pair_id(alphabet, Some(w[i - 1]), Some(w[i])));
    }
    out.push(pair_id(alphabet, Some(w[w.len() - 1]), None));
    Ok(out)
}

/// Disjunction of pair predicates with a fixed first component.
fn first_is(alphabet: &Alphabet, big: &Alphabet, first: Option<SymbolId>) -> Formula {
    let mut acc = Formula::fls(big);
    for second in alphabet.ids().map(Some).chain(core::iter::once(None)) {
        acc = acc.or(&Formula::sym_id(big, pair_id(alphabet, first, second)));
    }
    acc
}

/// Disjunction of pair predicates with a fixed second component.
fn second_is(alphabet: &Alphabet, big: &Alphabet, second: SymbolId) -> Formula {
    let mut acc = Formula::fls(big);
    for first in alphabet.ids().map(Some).chain(core::iter::once(None)) {
        acc = acc.or(&Formula::sym_id(big, pair_id(alphabet, first, Some(second))));
    }
    acc
}

/// Translation of a `Y`-free subformula at the aligned position: position
/// `i` of the bigram string stands for position `i` of `w`.
fn current(phi: &Formula, alphabet: &Alphabet, big: &Alphabet) -> Formula {
    match phi.op() {
        Op::Sym(s) => second_is(alphabet, big, *s),
        Op::Bos => Formula::bos(big),
        Op::Not(a) => current(a, alphabet, big).not(),
        Op::And(a, b) => current(a, alphabet, big).and(&current(b, alphabet, big)),
        Op::H(a) => current(a, alphabet, big).h(),
        Op::Y(a) => shifted(a, alphabet, big),
        Op::S(..) => unreachable!("fragment checked before translation"),
    }
}

/// Translation of a subformula one position back: position `i` of the
/// bigram string reads `w` at `i - 1` through first components. The `H`
/// case skips the first pair (which has no predecessor position) via the
/// bos-first escape.
fn shifted(phi: &Formula, alphabet: &Alphabet, big: &Alphabet) -> Formula {
    match phi.op() {
        Op::Sym(s) => first_is(alphabet, big, Some(*s)),
        Op::Bos => first_is(alphabet, big, None),
        Op::Not(a) => shifted(a, alphabet, big).not(),
        Op::And(a, b) => shifted(a, alphabet, big).and(&shifted(b, alphabet, big)),
        Op::H(a) => first_is(alphabet, big, None)
            .or(&shifted(a, alphabet, big))
            .h(),
        Op::Y(_) => unreachable!("Y-depth one checked before translation"),
        Op::S(..) => unreachable!("fragment checked before translation"),
    }
}

/// Rewrites a `TL[H,Y]` formula of `Y`-depth at most one into a `Y`-free
/// (`TL[H]`) formula over the pair alphabet, agreeing with the original on
/// bigram images evaluated at their last proper-pair position.
pub fn noy_transform(phi: &Formula) -> Result<Formula, TransformError> {
    let frag = phi.fragment();
    if frag.s {
        return Err(TransformError::FragmentTooLarge(
            "bigram rewriting is defined for the TL[H,Y] fragment".to_string(),
        ));
    }
    if phi.y_depth() > 1 {
        return Err(TransformError::FragmentTooLarge(alloc::format!(
            "bigram rewriting needs Y-depth at most 1, got {}",
            phi.y_depth()
        )));
    }
    let alphabet = phi.alphabet().clone();
    let big = alphabet.bigram_alphabet();
    Ok(current(phi, &alphabet, &big).simplify())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BigramError {
    /// The pair encoding indexes the first and last symbol, so the empty
    /// string has no image.
    EmptyString,
    SymbolOutsideAlphabet(SymbolId),
}

impl fmt::Display for BigramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BigramError::EmptyString => write!(f, "the empty string has no bigram image"),
            BigramError::SymbolOutsideAlphabet(s) => {
                write!(f, "symbol id {} outside the alphabet", s)
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BigramError {}
