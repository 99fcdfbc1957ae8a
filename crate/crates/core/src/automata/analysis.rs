//! Minimization, co-accessibility, products, and the twins test for
//! weighted determinizability.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{AutomatonError, Dfa, StateId, StateSet, WeightedNfa};
use crate::logic::SymbolId;
use crate::semiring::{SemiringKind, SemiringValue};

/// Result of DFA minimization: the quotient machine, the map from old
/// state to its class in the new machine (None for states unreachable from
/// the initial state, which are dropped), and the accepting set carried
/// over to the quotient.
#[derive(Clone, Debug)]
pub struct MinimizedDfa {
    pub dfa: Dfa,
    pub state_map: Vec<Option<StateId>>,
    pub accepting: Vec<bool>,
}

/// Moore partition refinement over the reachable part, with the accepting
/// predicate as the initial partition. Language is preserved.
pub fn minimize_dfa(machine: &Dfa, accepting: &dyn Fn(StateId) -> bool) -> MinimizedDfa {
    let n = machine.num_states();
    let reachable = machine.reachable();
    let mut in_reach = alloc::vec![false; n];
    for &q in &reachable {
        in_reach[q] = true;
    }

    // class[q] starts as accepting/rejecting and refines until stable.
    let mut class: Vec<usize> = (0..n).map(|q| usize::from(accepting(q))).collect();
    loop {
        let mut signature: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next: Vec<usize> = alloc::vec![0; n];
        for q in 0..n {
            let sig = (
                class[q],
                machine
                    .alphabet()
                    .ids()
                    .map(|s| class[machine.step(q, s)])
                    .collect::<Vec<_>>(),
            );
            let fresh = signature.len();
            next[q] = *signature.entry(sig).or_insert(fresh);
        }
        if next == class {
            break;
        }
        class = next;
    }

    // Materialize only classes containing a reachable state.
    let mut class_to_new: BTreeMap<usize, StateId> = BTreeMap::new();
    let mut representatives: Vec<StateId> = Vec::new();
    for &q in &reachable {
        class_to_new.entry(class[q]).or_insert_with(|| {
            representatives.push(q);
            representatives.len() - 1
        });
    }
    let names: Vec<String> = representatives
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            let _ = q;
            alloc::format!("m{}", i)
        })
        .collect();
    let table: Vec<Vec<StateId>> = representatives
        .iter()
        .map(|&q| {
            machine
                .alphabet()
                .ids()
                .map(|s| class_to_new[&class[machine.step(q, s)]])
                .collect()
        })
        .collect();
    let initial = class_to_new[&class[machine.initial()]];
    let dfa = Dfa::total(machine.alphabet().clone(), names, table, initial)
        .expect("quotient machine is well formed");
    let state_map: Vec<Option<StateId>> = (0..n)
        .map(|q| {
            if in_reach[q] {
                Some(class_to_new[&class[q]])
            } else {
                None
            }
        })
        .collect();
    let accepting_new: Vec<bool> = representatives.iter().map(|&q| accepting(q)).collect();
    MinimizedDfa {
        dfa,
        state_map,
        accepting: accepting_new,
    }
}

/// All states with a (possibly empty) path into `target`.
pub fn coaccessible(machine: &Dfa, target: &StateSet) -> StateSet {
    let n = machine.num_states();
    // predecessors[dst] = set of srcs
    let mut preds: Vec<BTreeSet<StateId>> = alloc::vec![BTreeSet::new(); n];
    for q in 0..n {
        for s in machine.alphabet().ids() {
            preds[machine.step(q, s)].insert(q);
        }
    }
    let mut result: StateSet = target.clone();
    let mut queue: Vec<StateId> = target.iter().copied().collect();
    while let Some(q) = queue.pop() {
        for &p in &preds[q] {
            if result.insert(p) {
                queue.push(p);
            }
        }
    }
    result
}

/// Reachable product of several machines over one shared alphabet. Returns
/// the product and, per product state, the tuple of component states.
pub fn product_dfa(machines: &[Dfa]) -> Result<(Dfa, Vec<Vec<StateId>>), AutomatonError> {
    let first = machines.first().ok_or(AutomatonError::NoStates)?;
    for m in machines {
        if m.alphabet() != first.alphabet() {
            return Err(AutomatonError::AlphabetMismatch);
        }
    }
    let alphabet = first.alphabet().clone();
    let initial_tuple: Vec<StateId> = machines.iter().map(|m| m.initial()).collect();
    let mut index: BTreeMap<Vec<StateId>, StateId> = BTreeMap::new();
    let mut tuples: Vec<Vec<StateId>> = Vec::new();
    let mut table: Vec<Vec<StateId>> = Vec::new();
    index.insert(initial_tuple.clone(), 0);
    tuples.push(initial_tuple);
    let mut head = 0;
    while head < tuples.len() {
        let current = tuples[head].clone();
        let mut row = Vec::with_capacity(alphabet.len());
        for s in alphabet.ids() {
            let next: Vec<StateId> = machines
                .iter()
                .zip(&current)
                .map(|(m, &q)| m.step(q, s))
                .collect();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = tuples.len();
                    index.insert(next.clone(), id);
                    tuples.push(next);
                    id
                }
            };
            row.push(id);
        }
        table.push(row);
        head += 1;
    }
    let names: Vec<String> = tuples
        .iter()
        .map(|t| {
            let parts: Vec<String> = t
                .iter()
                .zip(machines)
                .map(|(&q, m)| String::from(m.state_name(q)))
                .collect();
            parts.join(",")
        })
        .collect();
    let dfa = Dfa::total(alphabet, names, table, 0)?;
    Ok((dfa, tuples))
}

/// Verdict of the twins test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinsReport {
    pub determinizable: bool,
    /// On failure: the sibling states and the cycle label separating them.
    pub counterexample: Option<(StateId, StateId, Vec<SymbolId>)>,
}

/// Sibling pairs: distinct states co-reachable from the initial state by a
/// common string of nonzero weight. Explored on the Boolean support of the
/// pair product, which is bounded by the squared state count. Also returns
/// the number of reachable pair states, the depth bound for cycle search.
fn sibling_pairs(machine: &WeightedNfa) -> (Vec<(StateId, StateId)>, usize) {
    let n = machine.num_states();
    let mut seen: BTreeSet<(StateId, StateId)> = BTreeSet::new();
    let mut queue = alloc::vec![(machine.initial(), machine.initial())];
    seen.insert((machine.initial(), machine.initial()));
    while let Some((p, q)) = queue.pop() {
        for sym in machine.alphabet().ids() {
            for p2 in 0..n {
                if machine.weight_of(p, sym, p2).is_zero() {
                    continue;
                }
                for q2 in 0..n {
                    if machine.weight_of(q, sym, q2).is_zero() {
                        continue;
                    }
                    if seen.insert((p2, q2)) {
                        queue.push((p2, q2));
                    }
                }
            }
        }
    }
    let count = seen.len();
    let pairs = seen.into_iter().filter(|(p, q)| p < q).collect();
    (pairs, count)
}

type WeightMatrix = Vec<Vec<SemiringValue>>;

fn identity_matrix(n: usize, kind: SemiringKind) -> WeightMatrix {
    let mut m = alloc::vec![alloc::vec![SemiringValue::zero(kind); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = SemiringValue::one(kind);
    }
    m
}

fn matrix_step(machine: &WeightedNfa, m: &WeightMatrix, sym: SymbolId) -> WeightMatrix {
    let n = machine.num_states();
    let kind = machine.kind();
    let mut out = alloc::vec![alloc::vec![SemiringValue::zero(kind); n]; n];
    for src in 0..n {
        for mid in 0..n {
            if m[src][mid].is_zero() {
                continue;
            }
            for dst in 0..n {
                let step = machine.weight_of(mid, sym, dst);
                if step.is_zero() {
                    continue;
                }
                let term = m[src][mid].mul(step).expect("same kind");
                out[src][dst] = out[src][dst].add(&term).expect("same kind");
            }
        }
    }
    out
}

/// Twins test for weighted determinizability: every sibling pair must
/// carry equal total weights on equally labeled cycles. Cycle labels are
/// searched depth-first up to the reachable pair-product state count,
/// carrying the running weight matrix so the total `w`-cycle weight at `q`
/// is the diagonal entry `(q, q)`.
pub fn is_determinizable_twins(machine: &WeightedNfa) -> Result<TwinsReport, AutomatonError> {
    if machine.kind() != SemiringKind::Real {
        return Err(AutomatonError::UnsupportedSemiring(machine.kind()));
    }
    let (siblings, depth_bound) = sibling_pairs(machine);
    if siblings.is_empty() {
        return Ok(TwinsReport {
            determinizable: true,
            counterexample: None,
        });
    }
    let mut word: Vec<SymbolId> = Vec::new();
    let mut stack: Vec<WeightMatrix> =
        alloc::vec![identity_matrix(machine.num_states(), machine.kind())];

    fn search(
        machine: &WeightedNfa,
        siblings: &[(StateId, StateId)],
        depth_bound: usize,
        word: &mut Vec<SymbolId>,
        stack: &mut Vec<WeightMatrix>,
    ) -> Option<(StateId, StateId, Vec<SymbolId>)> {
        let current = stack.last().expect("stack nonempty");
        if !word.is_empty() {
            for &(p, q) in siblings {
                let wp = &current[p][p];
                let wq = &current[q][q];
                if !wp.is_zero() && !wq.is_zero() && wp != wq {
                    return Some((p, q, word.clone()));
                }
            }
        }
        if word.len() == depth_bound {
            return None;
        }
        if current.iter().all(|row| row.iter().all(|w| w.is_zero())) {
            return None;
        }
        for sym in machine.alphabet().ids() {
            let next = matrix_step(machine, stack.last().unwrap(), sym);
            stack.push(next);
            word.push(sym);
            if let Some(found) = search(machine, siblings, depth_bound, word, stack) {
                return Some(found);
            }
            word.pop();
            stack.pop();
        }
        None
    }

    match search(machine, &siblings, depth_bound, &mut word, &mut stack) {
        Some((p, q, label)) => Ok(TwinsReport {
            determinizable: false,
            counterexample: Some((p, q, label)),
        }),
        None => Ok(TwinsReport {
            determinizable: true,
            counterexample: None,
        }),
    }
}
