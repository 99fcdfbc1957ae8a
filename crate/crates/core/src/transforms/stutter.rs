//! Stutter invariance: is membership unchanged by duplicating an adjacent
//! symbol? Checked on the minimized machine, where the language is
//! stutter-invariant iff `δ(q, σσ) = δ(q, σ)` everywhere.

use alloc::vec::Vec;

use crate::automata::{dfa_run, minimize_dfa, Dfa, StateId};
use crate::logic::SymbolId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StutterReport {
    pub invariant: bool,
    /// On failure, `(u, σ, v)` with `uσv` and `uσσv` on opposite sides of
    /// the language.
    pub witness: Option<(Vec<SymbolId>, SymbolId, Vec<SymbolId>)>,
}

/// Shortest access strings to every state.
fn access_strings(dfa: &Dfa) -> Vec<Vec<SymbolId>> {
    let n = dfa.num_states();
    let mut found = alloc::vec![None; n];
    found[dfa.initial()] = Some(Vec::new());
    let mut queue = alloc::vec![dfa.initial()];
    let mut head = 0;
    while head < queue.len() {
        let q = queue[head];
        head += 1;
        for s in dfa.alphabet().ids() {
            let dst = dfa.step(q, s);
            if found[dst].is_none() {
                let mut path = found[q].clone().unwrap();
                path.push(s);
                found[dst] = Some(path);
                queue.push(dst);
            }
        }
    }
    found.into_iter().map(|p| p.unwrap_or_default()).collect()
}

/// Shortest string separating two states of a machine by acceptance.
fn separating_string(dfa: &Dfa, accepting: &[bool], p: StateId, q: StateId) -> Option<Vec<SymbolId>> {
    let n = dfa.num_states();
    let mut seen = alloc::vec![false; n * n];
    let mut queue = alloc::vec![(p, q, Vec::new())];
    seen[p * n + q] = true;
    let mut head = 0;
    while head < queue.len() {
        let (p, q, path) = queue[head].clone();
        head += 1;
        if accepting[p] != accepting[q] {
            return Some(path);
        }
        for s in dfa.alphabet().ids() {
            let (p2, q2) = (dfa.step(p, s), dfa.step(q, s));
            if !seen[p2 * n + q2] {
                seen[p2 * n + q2] = true;
                let mut path2 = path.clone();
                path2.push(s);
                queue.push((p2, q2, path2));
            }
        }
    }
    None
}

/// Is the language of `(machine, accepting)` stutter-invariant?
pub fn stutter_invariant(machine: &Dfa, accepting: &dyn Fn(StateId) -> bool) -> StutterReport {
    let minimized = minimize_dfa(machine, accepting);
    let dfa = &minimized.dfa;
    let access = access_strings(dfa);
    for q in 0..dfa.num_states() {
        for s in dfa.alphabet().ids() {
            let once = dfa.step(q, s);
            let twice = dfa.step(once, s);
            if once != twice {
                // Minimality guarantees a separating suffix exists.
                let v = separating_string(dfa, &minimized.accepting, once, twice)
                    .expect("distinct states of a minimal machine are separable");
                return StutterReport {
                    invariant: false,
                    witness: Some((access[q].clone(), s, v)),
                };
            }
        }
    }
    StutterReport {
        invariant: true,
        witness: None,
    }
}

/// Convenience: checks the witness claim `uσv ∈ L xor uσσv ∈ L`.
pub fn witness_separates(
    machine: &Dfa,
    accepting: &dyn Fn(StateId) -> bool,
    witness: &(Vec<SymbolId>, SymbolId, Vec<SymbolId>),
) -> bool {
    let (u, s, v) = witness;
    let mut once = u.clone();
    once.push(*s);
    let mut twice = once.clone();
    twice.push(*s);
    once.extend(v.iter().copied());
    twice.extend(v.iter().copied());
    let member = |w: &[SymbolId]| {
        let run = dfa_run(machine, w).expect("witness uses machine alphabet");
        accepting(*run.last().unwrap())
    };
    member(&once) != member(&twice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::logic::Alphabet;

    #[test]
    fn a_star_is_stutter_invariant() {
        let (dfa, acc) = fixtures::l_k(1);
        let report = stutter_invariant(&dfa, &|q| acc.contains(&q));
        assert!(report.invariant);
    }

    #[test]
    fn ab_star_is_not_stutter_invariant() {
        let (dfa, acc) = fixtures::ab_star_dfa();
        let accepting = |q: usize| acc.contains(&q);
        let report = stutter_invariant(&dfa, &accepting);
        assert!(!report.invariant);
        let witness = report.witness.unwrap();
        assert!(witness_separates(&dfa, &accepting, &witness));
        // The shortest witness duplicates the first a of ab.
        let al = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(witness.0, Vec::<usize>::new());
        assert_eq!(witness.1, al.id_of("a").unwrap());
    }

    #[test]
    fn aab_star_is_not_stutter_invariant() {
        let (dfa, acc) = fixtures::aab_star_dfa();
        let accepting = |q: usize| acc.contains(&q);
        let report = stutter_invariant(&dfa, &accepting);
        assert!(!report.invariant);
        assert!(witness_separates(&dfa, &accepting, &report.witness.unwrap()));
    }
}
