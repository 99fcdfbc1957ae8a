//! Transition monoids and aperiodicity (counter-freeness) tests.
//!
//! A DFA is counter-free iff its transition monoid is aperiodic: every
//! element `m` satisfies `m^k = m^{k+1}` for some `k`. For weighted NFAs
//! the check runs on the monoid of Boolean support matrices. (The weight
//! matrices themselves generate an infinite monoid as soon as any cycle
//! weight differs from one, so the support reading is the one under which
//! finite machines can be classified at all.)

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{AutomatonError, Dfa, StateId, WeightedNfa};
use crate::logic::SymbolId;

/// An element of a finite transition monoid together with a shortest word
/// mapping to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidElement {
    pub action: MonoidAction,
    pub word: Vec<SymbolId>,
}

/// Either a state map (deterministic) or a Boolean reachability matrix
/// (nondeterministic support), closed under composition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MonoidAction {
    Function(Vec<StateId>),
    /// One bitmask row per source state.
    Matrix(Vec<u64>),
}

impl MonoidAction {
    fn compose(&self, other: &MonoidAction) -> MonoidAction {
        match (self, other) {
            (MonoidAction::Function(f), MonoidAction::Function(g)) => {
                MonoidAction::Function(f.iter().map(|&q| g[q]).collect())
            }
            (MonoidAction::Matrix(a), MonoidAction::Matrix(b)) => {
                let rows = a
                    .iter()
                    .map(|&row| {
                        let mut out = 0u64;
                        let mut bits = row;
                        while bits != 0 {
                            let mid = bits.trailing_zeros() as usize;
                            out |= b[mid];
                            bits &= bits - 1;
                        }
                        out
                    })
                    .collect();
                MonoidAction::Matrix(rows)
            }
            _ => unreachable!("monoids never mix action kinds"),
        }
    }
}

/// Generates the transition monoid of per-symbol generator actions by
/// closing under composition, breadth-first so witness words are shortest.
/// The identity (empty word) is included.
pub fn generate_monoid(generators: &[MonoidAction], identity: MonoidAction) -> Vec<MonoidElement> {
    let mut elements: Vec<MonoidElement> = Vec::new();
    let mut seen: BTreeMap<MonoidAction, usize> = BTreeMap::new();
    let mut queue: Vec<usize> = Vec::new();
    seen.insert(identity.clone(), 0);
    elements.push(MonoidElement {
        action: identity,
        word: Vec::new(),
    });
    queue.push(0);
    let mut head = 0;
    while head < queue.len() {
        let current = queue[head];
        head += 1;
        for (sym, generator) in generators.iter().enumerate() {
            let action = elements[current].action.compose(generator);
            if !seen.contains_key(&action) {
                let mut word = elements[current].word.clone();
                word.push(sym);
                let idx = elements.len();
                seen.insert(action.clone(), idx);
                elements.push(MonoidElement { action, word });
                queue.push(idx);
            }
        }
    }
    elements
}

/// The transition monoid of a DFA.
pub fn transition_monoid(machine: &Dfa) -> Vec<MonoidElement> {
    let n = machine.num_states();
    let generators: Vec<MonoidAction> = machine
        .alphabet()
        .ids()
        .map(|sym| MonoidAction::Function((0..n).map(|q| machine.step(q, sym)).collect()))
        .collect();
    let identity = MonoidAction::Function((0..n).collect());
    generate_monoid(&generators, identity)
}

/// Outcome of an aperiodicity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterFreeReport {
    pub counter_free: bool,
    /// Least `k` with `m^k = m^{k+1}` for every monoid element, when
    /// counter-free.
    pub stability_index: Option<u32>,
    /// On failure: a word acting with genuine period, and for DFAs a state
    /// on one of its cycles, so `δ*(q, w^k) ≠ δ*(q, w^{k+1})` for every `k`.
    pub witness: Option<(Vec<SymbolId>, Option<StateId>)>,
    pub monoid_size: usize,
}

fn stability_of(action: &MonoidAction, bound: usize) -> Option<u32> {
    let mut power = action.clone();
    for k in 1..=bound {
        let next = power.compose(action);
        if next == power {
            return Some(k as u32);
        }
        power = next;
    }
    None
}

/// For a periodic state map, a state lying on an orbit cycle of length at
/// least two, which therefore separates `w^k` from `w^{k+1}` for every `k`.
fn cycling_state(f: &[StateId]) -> Option<StateId> {
    let n = f.len();
    for start in 0..n {
        // Walk into the eventual cycle of `start`.
        let mut q = start;
        for _ in 0..n {
            q = f[q];
        }
        if f[q] != q {
            return Some(q);
        }
    }
    None
}

fn check_aperiodic(elements: &[MonoidElement]) -> CounterFreeReport {
    let size = elements.len();
    let mut worst = 0u32;
    for element in elements {
        if element.word.is_empty() {
            continue;
        }
        match stability_of(&element.action, size + 1) {
            Some(k) => worst = worst.max(k),
            None => {
                let state = match &element.action {
                    MonoidAction::Function(f) => cycling_state(f),
                    MonoidAction::Matrix(_) => None,
                };
                return CounterFreeReport {
                    counter_free: false,
                    stability_index: None,
                    witness: Some((element.word.clone(), state)),
                    monoid_size: size,
                };
            }
        }
    }
    CounterFreeReport {
        counter_free: true,
        stability_index: Some(worst.max(1)),
        witness: None,
        monoid_size: size,
    }
}

/// Is the DFA counter-free? True iff its transition monoid is aperiodic.
pub fn is_counter_free_dfa(machine: &Dfa) -> CounterFreeReport {
    check_aperiodic(&transition_monoid(machine))
}

/// Is the weighted NFA counter-free on its Boolean support?
pub fn is_counter_free_nfa_support(
    machine: &WeightedNfa,
) -> Result<CounterFreeReport, AutomatonError> {
    let n = machine.num_states();
    let mut generators = Vec::new();
    for sym in machine.alphabet().ids() {
        generators.push(MonoidAction::Matrix(machine.support_matrix(sym)?));
    }
    let identity = MonoidAction::Matrix((0..n).map(|q| 1u64 << q).collect());
    Ok(check_aperiodic(&generate_monoid(&generators, identity)))
}
