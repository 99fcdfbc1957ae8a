//! Brute-force ground truth over bounded-length string sets: exhaustive
//! weighted-language comparison, truncated-mass accounting, state-encoder
//! equivalence search, and prefix-language reference checks.
//!
//! Enumeration is always in length-then-lexicographic order of symbol
//! ids, and counterexamples are the least disagreement in that order.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::logic::{Alphabet, SymbolId};
use crate::models::{ModelError, StateEncoder};
use crate::semiring::{ExtRat, SemiringError, SemiringKind, SemiringValue};

/// Iterator over all strings of length at most `bound`, length-lex order.
pub struct StringEnumerator {
    alphabet_size: usize,
    bound: usize,
    current: Option<Vec<SymbolId>>,
}

impl StringEnumerator {
    pub fn new(alphabet: &Alphabet, bound: usize) -> StringEnumerator {
        StringEnumerator {
            alphabet_size: alphabet.len(),
            bound,
            current: Some(Vec::new()),
        }
    }
}

impl Iterator for StringEnumerator {
    type Item = Vec<SymbolId>;

    fn next(&mut self) -> Option<Vec<SymbolId>> {
        let out = self.current.clone()?;
        // Advance: odometer within the current length, then next length.
        let mut w = out.clone();
        let mut i = w.len();
        loop {
            if i == 0 {
                if w.len() == self.bound {
                    self.current = None;
                } else {
                    self.current = Some(alloc::vec![0; out.len() + 1]);
                }
                break;
            }
            i -= 1;
            w[i] += 1;
            if w[i] < self.alphabet_size {
                for x in w.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                self.current = Some(w);
                break;
            }
        }
        Some(out)
    }
}

/// Exhaustive-comparison verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub bound: usize,
    pub strings_examined: usize,
    /// Length-lex-least disagreement, when one exists.
    pub counterexample: Option<Disagreement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub string: Vec<SymbolId>,
    pub left: SemiringValue,
    pub right: SemiringValue,
}

impl ComparisonReport {
    pub fn equal(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        match &self.counterexample {
            None => alloc::format!(
                "equal on all {} strings up to length {}",
                self.strings_examined,
                self.bound
            ),
            Some(d) => alloc::format!(
                "differ at \"{}\": {} vs {}",
                alphabet.format_string(&d.string),
                d.left,
                d.right
            ),
        }
    }
}

/// Compares two weighted languages exactly on every string of length at
/// most `bound`.
pub fn languages_equal_upto<F, G>(
    alphabet: &Alphabet,
    mut left: F,
    mut right: G,
    bound: usize,
) -> Result<ComparisonReport, SemiringError>
where
    F: FnMut(&[SymbolId]) -> SemiringValue,
    G: FnMut(&[SymbolId]) -> SemiringValue,
{
    let mut examined = 0;
    for w in StringEnumerator::new(alphabet, bound) {
        examined += 1;
        let l = left(&w);
        let r = right(&w);
        if l.kind() != r.kind() {
            return Err(SemiringError::Mismatch {
                left: l.kind(),
                right: r.kind(),
            });
        }
        if l != r {
            return Ok(ComparisonReport {
                bound,
                strings_examined: examined,
                counterexample: Some(Disagreement {
                    string: w,
                    left: l,
                    right: r,
                }),
            });
        }
    }
    Ok(ComparisonReport {
        bound,
        strings_examined: examined,
        counterexample: None,
    })
}

/// Exact total weight of all strings of length at most `bound` under a
/// real-weighted language. Infinite weights are rejected.
pub fn total_mass_upto<F>(
    alphabet: &Alphabet,
    mut weight: F,
    bound: usize,
) -> Result<BigRational, SemiringError>
where
    F: FnMut(&[SymbolId]) -> SemiringValue,
{
    let mut total = BigRational::zero();
    for w in StringEnumerator::new(alphabet, bound) {
        match weight(&w) {
            SemiringValue::ExtRat(ExtRat::Finite(r)) => total += r,
            SemiringValue::ExtRat(ExtRat::Infinity) => {
                return Err(SemiringError::BadLiteral(String::from(
                    "infinite weight in mass accounting",
                )))
            }
            v @ SemiringValue::Bool(_) => {
                return Err(SemiringError::Mismatch {
                    left: SemiringKind::Real,
                    right: v.kind(),
                })
            }
        }
    }
    Ok(total)
}

/// Verdict of the bounded state-encoder equivalence search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceReport {
    /// A bijection between observed state tokens making both encoders'
    /// traces agree on every string up to the bound.
    Equivalent { bijection: Vec<(u64, u64)> },
    /// The correspondence forced by some trace is not a function or not
    /// injective: the same state on one side meets two states on the other.
    Obstructed {
        string: Vec<SymbolId>,
        position: usize,
        detail: String,
    },
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        matches!(self, EquivalenceReport::Equivalent { .. })
    }
}

/// Greedily builds the token bijection induced by running both encoders
/// over every string of length at most `bound`.
pub fn encoders_equivalent_upto(
    left: &dyn StateEncoder,
    right: &dyn StateEncoder,
    bound: usize,
) -> Result<EquivalenceReport, ModelError> {
    use alloc::collections::BTreeMap;
    let alphabet = left.alphabet();
    if alphabet != right.alphabet() {
        return Err(ModelError::AlphabetMismatch);
    }
    let mut forward: BTreeMap<u64, u64> = BTreeMap::new();
    let mut backward: BTreeMap<u64, u64> = BTreeMap::new();
    for w in StringEnumerator::new(alphabet, bound) {
        let lt = left.run(&w)?;
        let rt = right.run(&w)?;
        debug_assert_eq!(lt.len(), rt.len());
        for (i, (&l, &r)) in lt.iter().zip(&rt).enumerate() {
            if let Some(&expect) = forward.get(&l) {
                if expect != r {
                    return Ok(EquivalenceReport::Obstructed {
                        string: w,
                        position: i,
                        detail: alloc::format!(
                            "left state {} maps to both {} and {}",
                            l,
                            expect,
                            r
                        ),
                    });
                }
            } else {
                forward.insert(l, r);
            }
            if let Some(&expect) = backward.get(&r) {
                if expect != l {
                    return Ok(EquivalenceReport::Obstructed {
                        string: w,
                        position: i,
                        detail: alloc::format!(
                            "right state {} maps to both {} and {}",
                            r,
                            expect,
                            l
                        ),
                    });
                }
            } else {
                backward.insert(r, l);
            }
        }
    }
    Ok(EquivalenceReport::Equivalent {
        bijection: forward.into_iter().collect(),
    })
}

/// Brute-force prefix-language referent: is there an extension `v` with
/// `|uv| ≤ bound` satisfying the membership test?
pub fn prefix_language_oracle<F>(u: &[SymbolId], alphabet: &Alphabet, mut member: F, bound: usize) -> bool
where
    F: FnMut(&[SymbolId]) -> bool,
{
    if u.len() > bound {
        return false;
    }
    let remaining = bound - u.len();
    for v in StringEnumerator::new(alphabet, remaining) {
        let mut uv = u.to_vec();
        uv.extend(v);
        if member(&uv) {
            return true;
        }
    }
    false
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceReport::Equivalent { bijection } => {
                write!(f, "equivalent via {} state pairs", bijection.len())
            }
            EquivalenceReport::Obstructed {
                position, detail, ..
            } => write!(f, "not equivalent at position {}: {}", position, detail),
        }
    }
}
