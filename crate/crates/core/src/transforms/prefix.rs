//! The prefix-language transformation: `u ⊨ prefix(φ)` iff some extension
//! `uv` satisfies `φ`.
//!
//! The construction compiles `φ` to its subformula automaton, marks every
//! state with a path to an accepting state, and reads the marked states
//! back as a disjunction of complete truth assignments over the closure.
//! Only reachable assignments are materialized, but the formula is still
//! exponential in the worst case; the state budget caps the blowup.

use alloc::vec::Vec;

use super::closure::{build_closure_dfa, ClosureDfa};
use super::TransformError;
use crate::automata::{coaccessible, StateSet};
use crate::logic::Formula;

/// The formula satisfied by exactly the strings extendable into the
/// language of `phi`. Stays within the operator fragment of `phi`.
pub fn prefix_transform(phi: &Formula, budget: usize) -> Result<Formula, TransformError> {
    let closure = build_closure_dfa(phi, budget)?;
    Ok(prefix_from_closure(phi, &closure))
}

/// As [`prefix_transform`], reusing an already-built closure automaton.
pub fn prefix_from_closure(phi: &Formula, closure: &ClosureDfa) -> Formula {
    let accepting: StateSet = closure.accepting_states().into_iter().collect();
    let extendable = coaccessible(closure.dfa(), &accepting);
    let mut disjuncts: Vec<Formula> = extendable
        .iter()
        .map(|&state| closure.state_formula(state))
        .collect();
    let alphabet = phi.alphabet();
    let formula = match disjuncts.pop() {
        None => Formula::fls(alphabet),
        Some(first) => disjuncts.into_iter().fold(first, |acc, d| acc.or(&d)),
    };
    formula.simplify()
}
