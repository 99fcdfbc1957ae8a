//! The Boolean-semiring conversions between classifiers and
//! autoregressors over formula-tuple encoders.
//!
//! Classifier to autoregressor: collapse the tuple and output into one
//! formula `φ`, then track, for each next symbol `σ`, whether the string
//! so far extended by `σ` is still extendable into the language
//! (`next_σ(prefix(φ))`), and allow end-of-string exactly on `φ` itself.
//! States where everything is disallowed are unreachable along nonzero
//! prefixes and receive the all-true row, which keeps the machine locally
//! normalized without changing any string weight.
//!
//! Autoregressor to classifier: a string is in the support iff every step
//! emitted an allowed symbol and the final state allows end-of-string.
//! The history check uses one `Y` and one `H` around the input fragment.

use alloc::vec::Vec;

use super::closure::build_closure_dfa;
use super::next::next_sigma;
use super::prefix::prefix_from_closure;
use super::{TransformError, DEFAULT_STATE_BUDGET};
use crate::logic::Formula;
use crate::models::{
    Autoregressor, Classifier, ModelError, OutputTable, RowTable, StateEncoder,
    TupleEncoder,
};
use crate::semiring::{SemiringKind, SemiringValue};

fn require_boolean(kind: SemiringKind) -> Result<(), TransformError> {
    if kind != SemiringKind::Boolean {
        return Err(TransformError::Model(ModelError::MixedSemirings));
    }
    Ok(())
}

/// The truth-assignment cell formula `⋀_i (φ_i ↔ h_i)`.
fn cell_formula(formulas: &[Formula], h: u64, alphabet_default: &Formula) -> Formula {
    let mut acc: Option<Formula> = None;
    for (i, phi) in formulas.iter().enumerate() {
        let lit = if h & (1 << i) != 0 {
            phi.clone()
        } else {
            phi.not()
        };
        acc = Some(match acc {
            None => lit,
            Some(prev) => prev.and(&lit),
        });
    }
    acc.unwrap_or_else(|| alphabet_default.clone())
}

/// Collapses a Boolean tuple classifier into the single formula holding
/// exactly on its accepted strings.
fn collapse_classifier(c: &Classifier) -> Result<Formula, TransformError> {
    let tuple = c
        .encoder()
        .as_tuple()
        .ok_or(TransformError::NotTupleEncoder)?;
    let m = tuple.arity();
    if m > 16 {
        return Err(TransformError::Model(ModelError::TupleTooLarge(m)));
    }
    let alphabet = tuple.alphabet().clone();
    let tru = Formula::tru(&alphabet);
    let mut acc = Formula::fls(&alphabet);
    for h in 0u64..(1 << m) {
        let accept = matches!(c.output().get(&h), Some(SemiringValue::Bool(true)));
        if accept {
            acc = acc.or(&cell_formula(tuple.formulas(), h, &tru));
        }
    }
    Ok(acc.simplify())
}

/// Builds a Boolean autoregressor with the same support language as the
/// classifier. Requires a nonempty language.
pub fn classifier_to_autoregressor(c: &Classifier) -> Result<Autoregressor, TransformError> {
    require_boolean(c.kind())?;
    let phi = collapse_classifier(c)?;
    let closure = build_closure_dfa(&phi, DEFAULT_STATE_BUDGET)?;
    if closure.is_empty_language() {
        return Err(TransformError::EmptyLanguage);
    }
    let prefix = prefix_from_closure(&phi, &closure);
    let alphabet = phi.alphabet().clone();
    let mut tuple: Vec<Formula> = alphabet
        .ids()
        .map(|sigma| next_sigma(&prefix, sigma))
        .collect();
    tuple.push(phi);
    let width = tuple.len();
    let encoder = TupleEncoder::with_alphabet(alphabet, tuple).map_err(TransformError::Model)?;
    let mut rows = RowTable::new();
    for h in 0u64..(1 << width) {
        let row: Vec<SemiringValue> = if h == 0 {
            alloc::vec![SemiringValue::Bool(true); width]
        } else {
            (0..width)
                .map(|i| SemiringValue::Bool(h & (1 << i) != 0))
                .collect()
        };
        rows.insert(h, row);
    }
    Autoregressor::new(encoder.into(), rows).map_err(TransformError::Model)
}

/// Builds a Boolean classifier whose language is the support of the
/// autoregressor. The result adds at most `Y` and `H` to the input
/// fragment.
pub fn autoregressor_to_classifier(a: &Autoregressor) -> Result<Classifier, TransformError> {
    require_boolean(a.kind())?;
    let tuple = a
        .encoder()
        .as_tuple()
        .ok_or(TransformError::NotTupleEncoder)?;
    let m = tuple.arity();
    if m > 16 {
        return Err(TransformError::Model(ModelError::TupleTooLarge(m)));
    }
    let alphabet = tuple.alphabet().clone();
    let tru = Formula::tru(&alphabet);
    let eos_index = alphabet.len();

    // φ_σ: the current state allows σ.
    let mut allow: Vec<Formula> = Vec::with_capacity(eos_index + 1);
    for out in 0..=eos_index {
        let mut acc = Formula::fls(&alphabet);
        for h in 0u64..(1 << m) {
            let allowed = match a.rows().get(&h) {
                Some(row) => matches!(row[out], SemiringValue::Bool(true)),
                None => false,
            };
            if allowed {
                acc = acc.or(&cell_formula(tuple.formulas(), h, &tru));
            }
        }
        allow.push(acc);
    }

    // Every consumed symbol was allowed where it was emitted, and the
    // final state allows end of string.
    let mut steps = Formula::fls(&alphabet);
    for sigma in alphabet.ids() {
        let step = allow[sigma].y().and(&Formula::sym_id(&alphabet, sigma));
        steps = steps.or(&step);
    }
    let phi = steps.h().and(&allow[eos_index]).simplify();

    let encoder =
        TupleEncoder::with_alphabet(alphabet, alloc::vec![phi]).map_err(TransformError::Model)?;
    let mut output = OutputTable::new();
    output.insert(0, SemiringValue::Bool(false));
    output.insert(1, SemiringValue::Bool(true));
    Classifier::new(encoder.into(), output).map_err(TransformError::Model)
}
