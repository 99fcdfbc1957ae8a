use alloc::rc::Rc;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use super::alphabet::{Alphabet, SymbolId};

/// The seven core connectives. Sugar (`or`, `implies`, `iff`, `true`,
/// `false`, `P`) is expanded at construction and never appears in a tree.
#[derive(Clone, Debug)]
pub enum Op {
    Sym(SymbolId),
    Bos,
    Not(Formula),
    And(Formula, Formula),
    Y(Formula),
    H(Formula),
    S(Formula, Formula),
}

struct Node {
    op: Op,
    hash: u64,
    ops: u8,
    y_depth: u32,
}

const FRAG_Y: u8 = 1;
const FRAG_H: u8 = 2;
const FRAG_S: u8 = 4;

/// An immutable past temporal logic formula over a fixed alphabet.
///
/// Formulas are reference-counted trees with structural equality; cloning
/// and subterm sharing are cheap, and every node caches its structural
/// hash, operator set, and `Y`-nesting depth.
///
/// Positions run from 0 (the `bos` position) to `|w|`; symbol predicates
/// are false at position 0. The quantified operators `H` and `S` range
/// over positions `1..=i`, so `H φ` is vacuously true and `φ S ψ`
/// vacuously false at position 0. (Reading the quantifiers as including
/// position 0 instead is flagged in the module tests; the convention here
/// is the one consistent with the single-symbol-extension rules used by
/// the transformations.)
#[derive(Clone)]
pub struct Formula {
    alphabet: Alphabet,
    node: Rc<Node>,
}

fn mix(tag: u64, parts: &[u64]) -> u64 {
    // FNV-1a style combine; collisions are resolved by structural compare.
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for p in parts {
        h ^= *p;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Formula {
    fn build(alphabet: Alphabet, op: Op) -> Formula {
        let (hash, ops, y_depth) = match &op {
            Op::Sym(s) => (mix(1, &[*s as u64]), 0, 0),
            Op::Bos => (mix(2, &[]), 0, 0),
            Op::Not(a) => (mix(3, &[a.node.hash]), a.node.ops, a.node.y_depth),
            Op::And(a, b) => (
                mix(4, &[a.node.hash, b.node.hash]),
                a.node.ops | b.node.ops,
                a.node.y_depth.max(b.node.y_depth),
            ),
            Op::Y(a) => (
                mix(5, &[a.node.hash]),
                a.node.ops | FRAG_Y,
                a.node.y_depth + 1,
            ),
            Op::H(a) => (mix(6, &[a.node.hash]), a.node.ops | FRAG_H, a.node.y_depth),
            Op::S(a, b) => (
                mix(7, &[a.node.hash, b.node.hash]),
                a.node.ops | b.node.ops | FRAG_S,
                a.node.y_depth.max(b.node.y_depth),
            ),
        };
        Formula {
            alphabet,
            node: Rc::new(Node {
                op,
                hash,
                ops,
                y_depth,
            }),
        }
    }

    fn check_same(a: &Formula, b: &Formula) {
        assert!(
            a.alphabet == b.alphabet,
            "cannot combine formulas over different alphabets"
        );
    }

    pub fn sym(alphabet: &Alphabet, symbol: &str) -> Result<Formula, FormulaError> {
        match alphabet.id_of(symbol) {
            Some(id) => Ok(Self::build(alphabet.clone(), Op::Sym(id))),
            None => Err(FormulaError::UnknownSymbol(String::from(symbol))),
        }
    }

    pub fn sym_id(alphabet: &Alphabet, id: SymbolId) -> Formula {
        assert!(id < alphabet.len(), "symbol id out of range");
        Self::build(alphabet.clone(), Op::Sym(id))
    }

    pub fn bos(alphabet: &Alphabet) -> Formula {
        Self::build(alphabet.clone(), Op::Bos)
    }

    /// Canonical contradiction: `bos & !bos`.
    pub fn fls(alphabet: &Alphabet) -> Formula {
        let b = Self::bos(alphabet);
        b.and(&b.not())
    }

    /// Canonical tautology: `!(bos & !bos)`.
    pub fn tru(alphabet: &Alphabet) -> Formula {
        Self::fls(alphabet).not()
    }

    pub fn not(&self) -> Formula {
        Self::build(self.alphabet.clone(), Op::Not(self.clone()))
    }

    pub fn and(&self, other: &Formula) -> Formula {
        Self::check_same(self, other);
        Self::build(self.alphabet.clone(), Op::And(self.clone(), other.clone()))
    }

    pub fn y(&self) -> Formula {
        Self::build(self.alphabet.clone(), Op::Y(self.clone()))
    }

    pub fn h(&self) -> Formula {
        Self::build(self.alphabet.clone(), Op::H(self.clone()))
    }

    pub fn since(&self, other: &Formula) -> Formula {
        Self::check_same(self, other);
        Self::build(self.alphabet.clone(), Op::S(self.clone(), other.clone()))
    }

    pub fn or(&self, other: &Formula) -> Formula {
        self.not().and(&other.not()).not()
    }

    pub fn implies(&self, other: &Formula) -> Formula {
        self.not().or(other)
    }

    pub fn iff(&self, other: &Formula) -> Formula {
        self.and(other).or(&self.not().and(&other.not()))
    }

    /// `P φ`, "previously": stored as `!H!φ`.
    pub fn previously(&self) -> Formula {
        self.not().h().not()
    }

    pub fn op(&self) -> &Op {
        &self.node.op
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn structural_hash(&self) -> u64 {
        self.node.hash
    }

    /// Maximum number of nested `Y` operators on any root-to-leaf path.
    pub fn y_depth(&self) -> u32 {
        self.node.y_depth
    }

    /// The minimal operator set appearing in the tree.
    pub fn fragment(&self) -> FragmentSpec {
        FragmentSpec {
            y: self.node.ops & FRAG_Y != 0,
            h: self.node.ops & FRAG_H != 0,
            s: self.node.ops & FRAG_S != 0,
        }
    }

    pub fn is_canonical_false(&self) -> bool {
        match self.op() {
            Op::And(a, b) => match (a.op(), b.op()) {
                (Op::Bos, Op::Not(inner)) => matches!(inner.op(), Op::Bos),
                _ => false,
            },
            _ => false,
        }
    }

    pub fn is_canonical_true(&self) -> bool {
        match self.op() {
            Op::Not(a) => a.is_canonical_false(),
            _ => false,
        }
    }

    /// Bottom-up constant folding and light algebraic cleanup. Preserves
    /// semantics at every position; used after transformations to keep
    /// derived formulas readable.
    pub fn simplify(&self) -> Formula {
        let alpha = self.alphabet.clone();
        match self.op() {
            Op::Sym(_) | Op::Bos => self.clone(),
            Op::Not(a) => {
                let a = a.simplify();
                if a.is_canonical_true() {
                    Formula::fls(&alpha)
                } else if a.is_canonical_false() {
                    Formula::tru(&alpha)
                } else if let Op::Not(inner) = a.op() {
                    inner.clone()
                } else {
                    a.not()
                }
            }
            Op::And(a, b) => {
                let a = a.simplify();
                let b = b.simplify();
                if a.is_canonical_false() || b.is_canonical_false() {
                    Formula::fls(&alpha)
                } else if a.is_canonical_true() {
                    b
                } else if b.is_canonical_true() {
                    a
                } else if a == b {
                    a
                } else {
                    a.and(&b)
                }
            }
            Op::Y(a) => {
                let a = a.simplify();
                if a.is_canonical_false() {
                    Formula::fls(&alpha)
                } else if a.is_canonical_true() {
                    // Y⊤ holds exactly away from the bos position.
                    Formula::bos(&alpha).not()
                } else {
                    a.y()
                }
            }
            Op::H(a) => {
                let a = a.simplify();
                if a.is_canonical_true() {
                    Formula::tru(&alpha)
                } else if a.is_canonical_false() {
                    // H⊥ holds only at the bos position.
                    Formula::bos(&alpha)
                } else if let Op::H(_) = a.op() {
                    a
                } else {
                    a.h()
                }
            }
            Op::S(a, b) => {
                let a = a.simplify();
                let b = b.simplify();
                if b.is_canonical_false() {
                    Formula::fls(&alpha)
                } else if b.is_canonical_true() {
                    // Something since ⊤ holds exactly away from bos.
                    Formula::bos(&alpha).not()
                } else if a.is_canonical_false() {
                    // ⊥ S ψ collapses to ψ away from the bos position.
                    b.and(&Formula::bos(&alpha).not())
                } else {
                    a.since(&b)
                }
            }
        }
    }
}

/// An operator fragment: a subset of `{Y, H, S}` naming which temporal
/// operators a formula may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FragmentSpec {
    pub y: bool,
    pub h: bool,
    pub s: bool,
}

impl FragmentSpec {
    pub const EMPTY: FragmentSpec = FragmentSpec {
        y: false,
        h: false,
        s: false,
    };
    pub const FULL: FragmentSpec = FragmentSpec {
        y: true,
        h: true,
        s: true,
    };

    pub fn subset_of(&self, other: &FragmentSpec) -> bool {
        (!self.y || other.y) && (!self.h || other.h) && (!self.s || other.s)
    }

    pub fn union(&self, other: &FragmentSpec) -> FragmentSpec {
        FragmentSpec {
            y: self.y || other.y,
            h: self.h || other.h,
            s: self.s || other.s,
        }
    }
}

impl fmt::Display for FragmentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = alloc::vec::Vec::new();
        if self.y {
            parts.push("Y");
        }
        if self.h {
            parts.push("H");
        }
        if self.s {
            parts.push("S");
        }
        write!(f, "TL[{}]", parts.join(","))
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        if Rc::ptr_eq(&self.node, &other.node) {
            return true;
        }
        if self.node.hash != other.node.hash {
            return false;
        }
        match (&self.node.op, &other.node.op) {
            (Op::Sym(a), Op::Sym(b)) => a == b,
            (Op::Bos, Op::Bos) => true,
            (Op::Not(a), Op::Not(b)) | (Op::Y(a), Op::Y(b)) | (Op::H(a), Op::H(b)) => a == b,
            (Op::And(a1, a2), Op::And(b1, b2)) | (Op::S(a1, a2), Op::S(b1, b2)) => {
                a1 == b1 && a2 == b2
            }
            _ => false,
        }
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.node.hash);
    }
}

fn op_rank(op: &Op) -> u8 {
    match op {
        Op::Sym(_) => 0,
        Op::Bos => 1,
        Op::Not(_) => 2,
        Op::And(..) => 3,
        Op::Y(_) => 4,
        Op::H(_) => 5,
        Op::S(..) => 6,
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if Rc::ptr_eq(&self.node, &other.node) {
            return Ordering::Equal;
        }
        self.node
            .hash
            .cmp(&other.node.hash)
            .then_with(|| op_rank(&self.node.op).cmp(&op_rank(&other.node.op)))
            .then_with(|| match (&self.node.op, &other.node.op) {
                (Op::Sym(a), Op::Sym(b)) => a.cmp(b),
                (Op::Bos, Op::Bos) => Ordering::Equal,
                (Op::Not(a), Op::Not(b)) | (Op::Y(a), Op::Y(b)) | (Op::H(a), Op::H(b)) => a.cmp(b),
                (Op::And(a1, a2), Op::And(b1, b2)) | (Op::S(a1, a2), Op::S(b1, b2)) => {
                    a1.cmp(b1).then_with(|| a2.cmp(b2))
                }
                _ => unreachable!("rank already ordered distinct variants"),
            })
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaError {
    UnknownSymbol(String),
}

impl fmt::Display for FormulaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaError::UnknownSymbol(s) => write!(f, "unknown symbol `{}`", s),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FormulaError {}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn y_depth_counts_nesting() {
        let al = ab();
        let a = Formula::sym(&al, "a").unwrap();
        let b = Formula::sym(&al, "b").unwrap();
        assert_eq!(a.y_depth(), 0);
        assert_eq!(a.y().and(&b.h()).y_depth(), 1);
        assert_eq!(a.y().and(&b.h()).y().y_depth(), 2);
    }

    #[test]
    fn fragments() {
        let al = ab();
        let a = Formula::sym(&al, "a").unwrap();
        let b = Formula::sym(&al, "b").unwrap();
        assert_eq!(a.and(&b).fragment(), FragmentSpec::EMPTY);
        // P desugars through H.
        assert_eq!(
            a.previously().fragment(),
            FragmentSpec {
                y: false,
                h: true,
                s: false
            }
        );
        let since_y = a.since(&b).and(&a.y());
        assert_eq!(
            since_y.fragment(),
            FragmentSpec {
                y: true,
                h: false,
                s: true
            }
        );
    }

    #[test]
    fn previously_desugars_to_core() {
        let al = ab();
        let b = Formula::sym(&al, "b").unwrap();
        let p = b.previously();
        // ¬H¬b
        match p.op() {
            Op::Not(h) => match h.op() {
                Op::H(n) => match n.op() {
                    Op::Not(inner) => assert_eq!(inner, &b),
                    _ => panic!("expected negation under H"),
                },
                _ => panic!("expected H"),
            },
            _ => panic!("expected negation"),
        }
    }

    #[test]
    fn structural_equality_and_sharing() {
        let al = ab();
        let a = Formula::sym(&al, "a").unwrap();
        let x = a.h().and(&a.y());
        let y = Formula::sym(&al, "a").unwrap().h().and(&a.y());
        assert_eq!(x, y);
        assert_ne!(x, a.h());
    }

    #[test]
    fn canonical_constants() {
        let al = ab();
        assert!(Formula::tru(&al).is_canonical_true());
        assert!(Formula::fls(&al).is_canonical_false());
        assert!(!Formula::tru(&al).is_canonical_false());
    }

    #[test]
    fn simplify_folds_constants() {
        let al = ab();
        let a = Formula::sym(&al, "a").unwrap();
        let t = Formula::tru(&al);
        assert_eq!(t.and(&a).simplify(), a);
        assert_eq!(a.not().not().simplify(), a);
        assert_eq!(Formula::fls(&al).y().simplify(), Formula::fls(&al));
        assert_eq!(Formula::fls(&al).h().simplify(), Formula::bos(&al));
        assert_eq!(a.and(&a).simplify(), a);
    }
}
