//! The subformula automaton: a DFA over truth assignments to the
//! subformula closure of one or more formulas.
//!
//! The state reached by `w` records exactly which subformulas `w`
//! satisfies, so the machine simultaneously decides every formula in the
//! closure. Only states reachable from the empty-string assignment are
//! materialized; construction stops with an error beyond a state budget
//! (the closure powerset is exponential in the worst case and provably
//! cannot be avoided in general).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::TransformError;
use crate::automata::Dfa;
use crate::logic::{Formula, NodeTable, Row};

/// Default cap on materialized truth-assignment states.
pub const DEFAULT_STATE_BUDGET: usize = 1 << 16;

/// A DFA over subformula truth assignments, together with the node table
/// it was built from and the truth row carried by each state.
pub struct SubformulaDfa {
    pub table: NodeTable,
    pub dfa: Dfa,
    pub rows: Vec<Row>,
}

impl SubformulaDfa {
    /// The truth value of `table` node `node` at DFA state `state`.
    pub fn truth(&self, state: usize, node: usize) -> bool {
        self.rows[state][node]
    }

    /// Packs the truth values of the roots at `state` into a bitmask,
    /// root 0 in the least significant bit.
    pub fn root_mask(&self, state: usize) -> u64 {
        let mut mask = 0u64;
        for (bit, &root) in self.table.roots().iter().enumerate() {
            if self.rows[state][root] {
                mask |= 1 << bit;
            }
        }
        mask
    }
}

/// Builds the subformula automaton of `formulas` (sharing one node table)
/// by breadth-first exploration from the empty-string assignment.
pub fn subformula_dfa(
    formulas: &[Formula],
    budget: usize,
) -> Result<SubformulaDfa, TransformError> {
    assert!(!formulas.is_empty(), "need at least one root formula");
    let table = NodeTable::new(formulas);
    let alphabet = table.alphabet().clone();
    let initial = table.initial_row();

    let mut index: BTreeMap<Row, usize> = BTreeMap::new();
    let mut rows: Vec<Row> = Vec::new();
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    index.insert(initial.clone(), 0);
    rows.push(initial);

    let mut head = 0;
    while head < rows.len() {
        let current = rows[head].clone();
        let mut out = Vec::with_capacity(alphabet.len());
        for sym in alphabet.ids() {
            let next = table.step_row(&current, sym);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if rows.len() >= budget {
                        return Err(TransformError::StateBudgetExceeded { budget });
                    }
                    let id = rows.len();
                    index.insert(next.clone(), id);
                    rows.push(next);
                    id
                }
            };
            out.push(id);
        }
        transitions.push(out);
        head += 1;
    }

    let names: Vec<String> = (0..rows.len()).map(|i| alloc::format!("c{}", i)).collect();
    let dfa = Dfa::total(alphabet, names, transitions, 0).expect("closure machine well formed");
    Ok(SubformulaDfa { table, dfa, rows })
}

/// The subformula automaton of a single formula, with accepting states
/// those whose assignment satisfies it.
pub struct ClosureDfa {
    pub sub: SubformulaDfa,
    root: usize,
}

impl ClosureDfa {
    pub fn dfa(&self) -> &Dfa {
        &self.sub.dfa
    }

    pub fn accepting(&self, state: usize) -> bool {
        self.sub.truth(state, self.root)
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.sub.rows.len())
            .filter(|&s| self.accepting(s))
            .collect()
    }

    pub fn accepts(&self, w: &[crate::logic::SymbolId]) -> bool {
        let q = self.sub.dfa.delta_star(self.sub.dfa.initial(), w);
        self.accepting(q)
    }

    pub fn is_empty_language(&self) -> bool {
        self.accepting_states().is_empty()
    }

    /// The truth assignment of state `state` over the closure, rendered as
    /// a conjunction of literals. Used by the prefix construction.
    pub fn state_formula(&self, state: usize) -> Formula {
        let table = &self.sub.table;
        let row = &self.sub.rows[state];
        let mut acc: Option<Formula> = None;
        for i in 0..table.len() {
            let lit = if row[i] {
                table.node(i).clone()
            } else {
                table.node(i).not()
            };
            acc = Some(match acc {
                None => lit,
                Some(prev) => prev.and(&lit),
            });
        }
        acc.expect("closure is never empty")
    }
}

/// Compiles a formula to its subformula automaton.
pub fn build_closure_dfa(phi: &Formula, budget: usize) -> Result<ClosureDfa, TransformError> {
    let sub = subformula_dfa(core::slice::from_ref(phi), budget)?;
    let root = sub.table.roots()[0];
    Ok(ClosureDfa { sub, root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{language_upto, models, parse_formula, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn last_symbol_formula_has_two_reachable_states() {
        let al = ab();
        let phi = parse_formula("a", &al).unwrap();
        let closure = build_closure_dfa(&phi, DEFAULT_STATE_BUDGET).unwrap();
        // bos/after-b vs after-a: the closure of a bare symbol predicate
        // distinguishes exactly last-symbol-a.
        assert_eq!(closure.dfa().num_states(), 2);
    }

    #[test]
    fn tautology_accepts_everywhere() {
        let al = ab();
        let phi = Formula::tru(&al);
        let closure = build_closure_dfa(&phi, DEFAULT_STATE_BUDGET).unwrap();
        // The canonical ⊤ tracks the bos predicate, giving two reachable
        // assignments; both satisfy the root.
        assert_eq!(closure.dfa().num_states(), 2);
        for s in 0..closure.dfa().num_states() {
            assert!(closure.accepting(s));
        }
    }

    #[test]
    fn bos_accepts_only_initially() {
        let al = ab();
        let phi = Formula::bos(&al);
        let closure = build_closure_dfa(&phi, DEFAULT_STATE_BUDGET).unwrap();
        assert!(closure.accepting(closure.dfa().initial()));
        for w in [alloc::vec![0], alloc::vec![1], alloc::vec![0, 1]] {
            assert!(!closure.accepts(&w));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let al = ab();
        let phi = parse_formula("a S (b S (a & Y b))", &al).unwrap();
        assert!(matches!(
            build_closure_dfa(&phi, 1),
            Err(TransformError::StateBudgetExceeded { budget: 1 })
        ));
    }

    #[test]
    fn closure_language_matches_formula_on_short_strings() {
        let al = ab();
        for text in [
            "a",
            "H a",
            "Y a & b",
            "a S b",
            "P (a & Y a)",
            "!(a S (b | Y a)) & H (a | b)",
        ] {
            let phi = parse_formula(text, &al).unwrap();
            let closure = build_closure_dfa(&phi, DEFAULT_STATE_BUDGET).unwrap();
            let members = language_upto(&phi, 5);
            let mut expect = members.into_iter();
            let mut next_member = expect.next();
            for w in all_strings(&al, 5) {
                let in_lang = Some(&w) == next_member.as_ref();
                if in_lang {
                    next_member = expect.next();
                }
                assert_eq!(closure.accepts(&w), in_lang, "{} on {:?}", text, w);
                assert_eq!(models(&w, &phi).unwrap(), in_lang);
            }
        }
    }

    fn all_strings(al: &Alphabet, n: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = alloc::vec![Vec::new()];
        let mut layer: Vec<Vec<usize>> = alloc::vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for s in al.ids() {
                    let mut w2 = w.clone();
                    w2.push(s);
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}
