//! Deterministic and weighted nondeterministic finite automata, their runs
//! and weights, transition-monoid analyses, minimization, and the twins
//! determinizability test.

mod analysis;
mod monoid;

pub use analysis::{
    coaccessible, is_determinizable_twins, minimize_dfa, product_dfa, MinimizedDfa, TwinsReport,
};
pub use monoid::{
    is_counter_free_dfa, is_counter_free_nfa_support, transition_monoid, CounterFreeReport,
    MonoidElement,
};

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::logic::{Alphabet, SymbolId};
use crate::semiring::{SemiringKind, SemiringValue};

pub type StateId = usize;

/// A deterministic finite automaton with a total transition function.
///
/// Acceptance is not part of the machine: output functions (classifier or
/// autoregressive) are attached by the `models` module, and analyses that
/// need accept states take a predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    state_names: Vec<String>,
    // transition[state][symbol]
    transition: Vec<Vec<StateId>>,
    initial: StateId,
}

impl Dfa {
    /// Builds a machine from a total transition table.
    pub fn total(
        alphabet: Alphabet,
        state_names: Vec<String>,
        transition: Vec<Vec<StateId>>,
        initial: StateId,
    ) -> Result<Dfa, AutomatonError> {
        let n = state_names.len();
        if n == 0 {
            return Err(AutomatonError::NoStates);
        }
        if initial >= n {
            return Err(AutomatonError::BadState(initial));
        }
        if transition.len() != n {
            return Err(AutomatonError::PartialTransition);
        }
        for row in &transition {
            if row.len() != alphabet.len() {
                return Err(AutomatonError::PartialTransition);
            }
            for &dst in row {
                if dst >= n {
                    return Err(AutomatonError::BadState(dst));
                }
            }
        }
        Ok(Dfa {
            alphabet,
            state_names,
            transition,
            initial,
        })
    }

    /// Builds a machine from a possibly partial table, completing missing
    /// entries with an explicit non-accepting sink state.
    pub fn completed(
        alphabet: Alphabet,
        state_names: Vec<String>,
        transition: Vec<Vec<Option<StateId>>>,
        initial: StateId,
    ) -> Result<Dfa, AutomatonError> {
        let needs_sink = transition.len() != state_names.len()
            || transition
                .iter()
                .any(|row| row.len() != alphabet.len() || row.iter().any(Option::is_none));
        let mut names = state_names;
        let mut table: Vec<Vec<StateId>> = Vec::new();
        let sink = names.len();
        for s in 0..names.len() {
            let row = transition.get(s);
            let mut out = Vec::with_capacity(alphabet.len());
            for sym in 0..alphabet.len() {
                out.push(row.and_then(|r| r.get(sym).copied().flatten()).unwrap_or(sink));
            }
            table.push(out);
        }
        if needs_sink {
            names.push("_sink".to_string());
            table.push(alloc::vec![sink; alphabet.len()]);
        }
        Dfa::total(alphabet, names, table, initial)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn step(&self, q: StateId, symbol: SymbolId) -> StateId {
        self.transition[q][symbol]
    }

    /// `δ*`: runs `w` from `q`.
    pub fn delta_star(&self, q: StateId, w: &[SymbolId]) -> StateId {
        w.iter().fold(q, |q, &s| self.step(q, s))
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<StateId> {
        let mut seen = alloc::vec![false; self.num_states()];
        let mut queue = alloc::vec![self.initial];
        seen[self.initial] = true;
        let mut order = Vec::new();
        while let Some(q) = queue.pop() {
            order.push(q);
            for s in 0..self.alphabet.len() {
                let d = self.step(q, s);
                if !seen[d] {
                    seen[d] = true;
                    queue.push(d);
                }
            }
        }
        order.sort_unstable();
        order
    }
}

/// The state-encoder view of a DFA: position 0 is the initial state,
/// position `i` is the state after reading `w_1..w_i`.
pub fn dfa_run(machine: &Dfa, w: &[SymbolId]) -> Result<Vec<StateId>, AutomatonError> {
    if let Some(&bad) = w.iter().find(|&&s| s >= machine.alphabet.len()) {
        return Err(AutomatonError::SymbolOutsideAlphabet(bad));
    }
    let mut states = Vec::with_capacity(w.len() + 1);
    states.push(machine.initial);
    for &s in w {
        states.push(machine.step(*states.last().unwrap(), s));
    }
    Ok(states)
}

/// A weighted nondeterministic finite automaton: one initial state, a
/// weight on every (state, symbol, state) triple (defaulting to the
/// semiring zero), and an ending weight per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedNfa {
    alphabet: Alphabet,
    state_names: Vec<String>,
    kind: SemiringKind,
    // weights[symbol][src][dst]
    weights: Vec<Vec<Vec<SemiringValue>>>,
    initial: StateId,
    ending: Vec<SemiringValue>,
}

impl WeightedNfa {
    pub fn new(
        alphabet: Alphabet,
        state_names: Vec<String>,
        kind: SemiringKind,
        transitions: &[(StateId, SymbolId, StateId, SemiringValue)],
        initial: StateId,
        ending: Vec<SemiringValue>,
    ) -> Result<WeightedNfa, AutomatonError> {
        let n = state_names.len();
        if n == 0 {
            return Err(AutomatonError::NoStates);
        }
        if initial >= n {
            return Err(AutomatonError::BadState(initial));
        }
        if ending.len() != n {
            return Err(AutomatonError::EndingNotTotal);
        }
        for w in &ending {
            if w.kind() != kind {
                return Err(AutomatonError::MixedSemirings);
            }
        }
        let zero = SemiringValue::zero(kind);
        let mut weights = alloc::vec![alloc::vec![alloc::vec![zero; n]; n]; alphabet.len()];
        for (src, sym, dst, w) in transitions {
            if *src >= n || *dst >= n {
                return Err(AutomatonError::BadState((*src).max(*dst)));
            }
            if *sym >= alphabet.len() {
                return Err(AutomatonError::SymbolOutsideAlphabet(*sym));
            }
            if w.kind() != kind {
                return Err(AutomatonError::MixedSemirings);
            }
            weights[*sym][*src][*dst] = w.clone();
        }
        Ok(WeightedNfa {
            alphabet,
            state_names,
            kind,
            weights,
            initial,
            ending,
        })
    }

    /// Views a DFA as a weighted NFA whose transitions all carry weight one
    /// and whose ending weights are one exactly on `accepting`.
    pub fn from_dfa(dfa: &Dfa, kind: SemiringKind, accepting: &dyn Fn(StateId) -> bool) -> Self {
        let one = SemiringValue::one(kind);
        let mut transitions = Vec::new();
        for q in 0..dfa.num_states() {
            for sym in dfa.alphabet().ids() {
                transitions.push((q, sym, dfa.step(q, sym), one.clone()));
            }
        }
        let ending = (0..dfa.num_states())
            .map(|q| {
                if accepting(q) {
                    one.clone()
                } else {
                    SemiringValue::zero(kind)
                }
            })
            .collect();
        WeightedNfa::new(
            dfa.alphabet().clone(),
            dfa.state_names.clone(),
            kind,
            &transitions,
            dfa.initial(),
            ending,
        )
        .expect("dfa view is well formed")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn ending(&self, q: StateId) -> &SemiringValue {
        &self.ending[q]
    }

    pub fn weight_of(&self, src: StateId, sym: SymbolId, dst: StateId) -> &SemiringValue {
        &self.weights[sym][src][dst]
    }

    pub fn transitions(&self) -> Vec<(StateId, SymbolId, StateId, SemiringValue)> {
        let mut out = Vec::new();
        for (sym, mat) in self.weights.iter().enumerate() {
            for (src, row) in mat.iter().enumerate() {
                for (dst, w) in row.iter().enumerate() {
                    if !w.is_zero() {
                        out.push((src, sym, dst, w.clone()));
                    }
                }
            }
        }
        out
    }

    /// Forward weight vector after reading `w`, starting from weight one on
    /// the initial state: entry `q` is `δ*(ι, w, q)`.
    pub fn forward(&self, w: &[SymbolId]) -> Result<Vec<SemiringValue>, AutomatonError> {
        let n = self.num_states();
        let mut vec = alloc::vec![SemiringValue::zero(self.kind); n];
        vec[self.initial] = SemiringValue::one(self.kind);
        for &sym in w {
            if sym >= self.alphabet.len() {
                return Err(AutomatonError::SymbolOutsideAlphabet(sym));
            }
            let mut next = alloc::vec![SemiringValue::zero(self.kind); n];
            for src in 0..n {
                if vec[src].is_zero() {
                    continue;
                }
                for dst in 0..n {
                    let w = &self.weights[sym][src][dst];
                    if w.is_zero() {
                        continue;
                    }
                    let contrib = vec[src].mul(w).expect("kinds checked at construction");
                    next[dst] = next[dst].add(&contrib).expect("same kind");
                }
            }
            vec = next;
        }
        Ok(vec)
    }

    /// Boolean support matrix of one symbol, one bitmask row per source
    /// state. Requires at most 64 states.
    pub fn support_matrix(&self, sym: SymbolId) -> Result<Vec<u64>, AutomatonError> {
        let n = self.num_states();
        if n > 64 {
            return Err(AutomatonError::TooManyStates(n));
        }
        let mut rows = alloc::vec![0u64; n];
        for src in 0..n {
            for dst in 0..n {
                if !self.weights[sym][src][dst].is_zero() {
                    rows[src] |= 1 << dst;
                }
            }
        }
        Ok(rows)
    }
}

/// The weight the machine assigns to `w`: sum over end states of the
/// forward weight times the ending weight.
pub fn nfa_weight(machine: &WeightedNfa, w: &[SymbolId]) -> Result<SemiringValue, AutomatonError> {
    let forward = machine.forward(w)?;
    let mut total = SemiringValue::zero(machine.kind);
    for (q, fw) in forward.iter().enumerate() {
        let term = fw.mul(&machine.ending[q]).expect("same kind");
        total = total.add(&term).expect("same kind");
    }
    Ok(total)
}

/// State sets used by reachability analyses.
pub type StateSet = BTreeSet<StateId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomatonError {
    NoStates,
    BadState(StateId),
    PartialTransition,
    EndingNotTotal,
    MixedSemirings,
    SymbolOutsideAlphabet(SymbolId),
    AlphabetMismatch,
    /// The twins test only applies to real-weighted machines; Boolean NFAs
    /// are always determinizable by the subset construction.
    UnsupportedSemiring(SemiringKind),
    TooManyStates(usize),
}

impl fmt::Display for AutomatonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomatonError::NoStates => write!(f, "automaton needs at least one state"),
            AutomatonError::BadState(q) => write!(f, "state id {} out of range", q),
            AutomatonError::PartialTransition => write!(f, "transition function is not total"),
            AutomatonError::EndingNotTotal => write!(f, "ending weights must cover every state"),
            AutomatonError::MixedSemirings => {
                write!(f, "all weights of a machine must share one semiring")
            }
            AutomatonError::SymbolOutsideAlphabet(s) => {
                write!(f, "symbol id {} outside the alphabet", s)
            }
            AutomatonError::AlphabetMismatch => write!(f, "machines use different alphabets"),
            AutomatonError::UnsupportedSemiring(k) => {
                write!(f, "operation unsupported for the {} semiring", k)
            }
            AutomatonError::TooManyStates(n) => {
                write!(f, "analysis limited to 64 states, machine has {}", n)
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AutomatonError {}
