//! Positional evaluation of formulas.
//!
//! Evaluation works over a deduplicated table of subformula nodes and a
//! per-position row of truth values. Moving one position to the right is a
//! single bottom-up pass over the table, which gives linear-time evaluation
//! of a formula (or tuple of formulas) along a string and is also the
//! transition step of the subformula automaton in `transforms`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::alphabet::{Alphabet, SymbolId};
use super::ast::{Formula, Op};

/// Deduplicated subformula nodes of one or more formulas, children before
/// parents. Node identity is structural, so shared subterms evaluate once.
pub struct NodeTable {
    nodes: Vec<Formula>,
    children: Vec<NodeOp>,
    index: BTreeMap<Formula, usize>,
    roots: Vec<usize>,
    alphabet: Alphabet,
}

enum NodeOp {
    Sym(SymbolId),
    Bos,
    Not(usize),
    And(usize, usize),
    Y(usize),
    H(usize),
    S(usize, usize),
}

/// Truth values for every node of a [`NodeTable`] at one position.
pub type Row = Vec<bool>;

impl NodeTable {
    pub fn new(formulas: &[Formula]) -> NodeTable {
        assert!(!formulas.is_empty(), "node table needs at least one root");
        let alphabet = formulas[0].alphabet().clone();
        for f in formulas {
            assert!(
                f.alphabet() == &alphabet,
                "all formulas in a table must share one alphabet"
            );
        }
        let mut table = NodeTable {
            nodes: Vec::new(),
            children: Vec::new(),
            index: BTreeMap::new(),
            roots: Vec::new(),
            alphabet,
        };
        for f in formulas {
            let root = table.insert(f);
            table.roots.push(root);
        }
        table
    }

    fn insert(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        let op = match f.op() {
            Op::Sym(s) => NodeOp::Sym(*s),
            Op::Bos => NodeOp::Bos,
            Op::Not(a) => NodeOp::Not(self.insert(a)),
            Op::And(a, b) => {
                let (a, b) = (self.insert(a), self.insert(b));
                NodeOp::And(a, b)
            }
            Op::Y(a) => NodeOp::Y(self.insert(a)),
            Op::H(a) => NodeOp::H(self.insert(a)),
            Op::S(a, b) => {
                let (a, b) = (self.insert(a), self.insert(b));
                NodeOp::S(a, b)
            }
        };
        let i = self.nodes.len();
        self.nodes.push(f.clone());
        self.children.push(op);
        self.index.insert(f.clone(), i);
        i
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn node(&self, i: usize) -> &Formula {
        &self.nodes[i]
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Truth row at position 0, the `bos` position: symbol predicates are
    /// false, `bos` is true, `Y` and `S` are false, `H` is vacuously true.
    pub fn initial_row(&self) -> Row {
        let mut row = alloc::vec![false; self.nodes.len()];
        for i in 0..self.nodes.len() {
            row[i] = match self.children[i] {
                NodeOp::Sym(_) => false,
                NodeOp::Bos => true,
                NodeOp::Not(a) => !row[a],
                NodeOp::And(a, b) => row[a] && row[b],
                NodeOp::Y(_) => false,
                NodeOp::H(_) => true,
                NodeOp::S(..) => false,
            };
        }
        row
    }

    /// Truth row after reading one more symbol, given the previous row.
    pub fn step_row(&self, prev: &Row, symbol: SymbolId) -> Row {
        debug_assert!(symbol < self.alphabet.len());
        let mut row = alloc::vec![false; self.nodes.len()];
        for i in 0..self.nodes.len() {
            row[i] = match self.children[i] {
                NodeOp::Sym(s) => s == symbol,
                NodeOp::Bos => false,
                NodeOp::Not(a) => !row[a],
                NodeOp::And(a, b) => row[a] && row[b],
                NodeOp::Y(a) => prev[a],
                NodeOp::H(a) => prev[i] && row[a],
                NodeOp::S(a, b) => row[b] || (row[a] && prev[i]),
            };
        }
        row
    }

    /// Rows for positions `0..=|w|`.
    pub fn rows(&self, w: &[SymbolId]) -> Vec<Row> {
        let mut rows = Vec::with_capacity(w.len() + 1);
        rows.push(self.initial_row());
        for &s in w {
            let next = self.step_row(rows.last().unwrap(), s);
            rows.push(next);
        }
        rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    PositionOutOfRange { position: usize, length: usize },
    SymbolOutOfRange { symbol: SymbolId },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::PositionOutOfRange { position, length } => {
                write!(f, "position {} out of range 0..={}", position, length)
            }
            EvalError::SymbolOutOfRange { symbol } => {
                write!(f, "symbol id {} outside the alphabet", symbol)
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EvalError {}

fn check_string(alphabet: &Alphabet, w: &[SymbolId]) -> Result<(), EvalError> {
    match w.iter().find(|&&s| s >= alphabet.len()) {
        Some(&s) => Err(EvalError::SymbolOutOfRange { symbol: s }),
        None => Ok(()),
    }
}

/// Does `w` satisfy `phi` at position `i`? Position 0 is the `bos`
/// position; `satisfies(w, |w|, phi)` is the membership reading `w ⊨ φ`.
pub fn satisfies(w: &[SymbolId], i: usize, phi: &Formula) -> Result<bool, EvalError> {
    check_string(phi.alphabet(), w)?;
    if i > w.len() {
        return Err(EvalError::PositionOutOfRange {
            position: i,
            length: w.len(),
        });
    }
    let table = NodeTable::new(core::slice::from_ref(phi));
    let mut row = table.initial_row();
    for &s in &w[..i] {
        row = table.step_row(&row, s);
    }
    Ok(row[table.roots()[0]])
}

/// Membership shorthand: `w ⊨ φ`.
pub fn models(w: &[SymbolId], phi: &Formula) -> Result<bool, EvalError> {
    satisfies(w, w.len(), phi)
}

/// The state sequence of the formula-tuple encoder: entry `i`, `k` is the
/// truth of formula `k` at position `i`, for `i` in `0..=|w|`.
pub fn encode_with_tuple(tuple: &[Formula], w: &[SymbolId]) -> Result<Vec<Vec<bool>>, EvalError> {
    assert!(!tuple.is_empty() || true);
    if tuple.is_empty() {
        return Ok(alloc::vec![Vec::new(); w.len() + 1]);
    }
    check_string(tuple[0].alphabet(), w)?;
    let table = NodeTable::new(tuple);
    let rows = table.rows(w);
    Ok(rows
        .iter()
        .map(|row| table.roots().iter().map(|&r| row[r]).collect())
        .collect())
}

/// All strings of length at most `n` satisfying `phi`, in length-then-lex
/// order of symbol ids.
pub fn language_upto(phi: &Formula, n: usize) -> Vec<Vec<SymbolId>> {
    let table = NodeTable::new(core::slice::from_ref(phi));
    let root = table.roots()[0];
    let k = phi.alphabet().len();
    let mut out = Vec::new();
    // Depth-first over the prefix tree, carrying evaluation rows.
    let mut stack: Vec<(Vec<SymbolId>, Row)> = alloc::vec![(Vec::new(), table.initial_row())];
    let mut all: Vec<(Vec<SymbolId>, bool)> = Vec::new();
    while let Some((w, row)) = stack.pop() {
        all.push((w.clone(), row[root]));
        if w.len() < n {
            for s in 0..k {
                let mut wn = w.clone();
                wn.push(s);
                stack.push((wn, table.step_row(&row, s)));
            }
        }
    }
    all.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for (w, sat) in all {
        if sat {
            out.push(w);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse::parse_formula;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn f(text: &str, al: &Alphabet) -> Formula {
        parse_formula(text, al).unwrap()
    }

    fn s(al: &Alphabet, text: &str) -> Vec<SymbolId> {
        al.parse_string(text).unwrap()
    }

    #[test]
    fn bos_only_at_position_zero() {
        let al = ab();
        let w = s(&al, "ab");
        let bos = Formula::bos(&al);
        assert!(satisfies(&w, 0, &bos).unwrap());
        assert!(!satisfies(&w, 1, &bos).unwrap());
        assert!(!satisfies(&w, 2, &bos).unwrap());
    }

    #[test]
    fn yesterday_reads_previous_symbol() {
        let al = ab();
        let w = s(&al, "ab");
        let ya = f("Y a", &al);
        assert!(satisfies(&w, 2, &ya).unwrap());
        assert!(!satisfies(&w, 1, &ya).unwrap());
        assert!(!satisfies(&w, 0, &ya).unwrap());
    }

    #[test]
    fn since_clause_hand_evaluation() {
        // w=abb at i=3: j=1 satisfies a, positions 2,3 satisfy b.
        let al = ab();
        let w = s(&al, "abb");
        let phi = f("b S a", &al);
        assert!(satisfies(&w, 3, &phi).unwrap());
        // No witness for the right operand at all.
        let w2 = s(&al, "bb");
        assert!(!satisfies(&w2, 2, &phi).unwrap());
        // Witness exists but the left operand fails after it.
        let abc = Alphabet::new(["a", "b", "c"]).unwrap();
        let w3 = abc.parse_string("bc").unwrap();
        assert!(!satisfies(&w3, 2, &f("a S b", &abc)).unwrap());
        // At the bos position, S is vacuously false.
        assert!(!satisfies(&w, 0, &phi).unwrap());
    }

    #[test]
    fn position_out_of_range() {
        let al = ab();
        let w = s(&al, "a");
        assert!(matches!(
            satisfies(&w, 2, &f("a", &al)),
            Err(EvalError::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn symbol_predicate_false_at_bos_position() {
        let al = ab();
        let w = s(&al, "a");
        assert!(!satisfies(&w, 0, &f("a", &al)).unwrap());
    }

    #[test]
    fn encode_tuple_examples() {
        let al = ab();
        // (bos) on ab
        let enc = encode_with_tuple(&[Formula::bos(&al)], &s(&al, "ab")).unwrap();
        assert_eq!(
            enc,
            alloc::vec![
                alloc::vec![true],
                alloc::vec![false],
                alloc::vec![false]
            ]
        );
        // (a, b) on ab
        let enc = encode_with_tuple(&[f("a", &al), f("b", &al)], &s(&al, "ab")).unwrap();
        assert_eq!(
            enc,
            alloc::vec![
                alloc::vec![false, false],
                alloc::vec![true, false],
                alloc::vec![false, true]
            ]
        );
        // (H a) on aab: vacuous at bos, falsified by the final b.
        let enc = encode_with_tuple(&[f("H a", &al)], &s(&al, "aab")).unwrap();
        assert_eq!(
            enc,
            alloc::vec![
                alloc::vec![true],
                alloc::vec![true],
                alloc::vec![true],
                alloc::vec![false]
            ]
        );
    }

    #[test]
    fn language_upto_examples() {
        let al = ab();
        assert!(language_upto(&Formula::fls(&al), 3).is_empty());
        // bos holds only for the empty string.
        assert_eq!(
            language_upto(&Formula::bos(&al), 2),
            alloc::vec![Vec::<SymbolId>::new()]
        );
        // H a over {a}: empty string (vacuous), a, aa.
        let a_only = Alphabet::new(["a"]).unwrap();
        let ha = f("H a", &a_only);
        let lang = language_upto(&ha, 2);
        assert_eq!(
            lang,
            alloc::vec![
                Vec::<SymbolId>::new(),
                alloc::vec![0],
                alloc::vec![0, 0]
            ]
        );
    }
}
