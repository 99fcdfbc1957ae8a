//! Single-symbol right extension: `w ⊨ next_σ(φ)` iff `wσ ⊨ φ`.
//!
//! This is the right Brzozowski derivative at the formula level. The
//! rewriting never introduces a temporal operator, so it stays inside the
//! operator fragment of its input.

use alloc::collections::BTreeMap;

use crate::logic::{Formula, Op, SymbolId};

fn go(phi: &Formula, sigma: SymbolId, memo: &mut BTreeMap<Formula, Formula>) -> Formula {
    if let Some(done) = memo.get(phi) {
        return done.clone();
    }
    let alphabet = phi.alphabet().clone();
    let result = match phi.op() {
        Op::Sym(s) => {
            if *s == sigma {
                Formula::tru(&alphabet)
            } else {
                Formula::fls(&alphabet)
            }
        }
        Op::Bos => Formula::fls(&alphabet),
        Op::Not(a) => go(a, sigma, memo).not(),
        Op::And(a, b) => go(a, sigma, memo).and(&go(b, sigma, memo)),
        Op::Y(a) => a.clone(),
        Op::H(a) => phi.and(&go(a, sigma, memo)),
        Op::S(a, b) => {
            let keep = go(a, sigma, memo).and(phi);
            keep.or(&go(b, sigma, memo))
        }
    };
    memo.insert(phi.clone(), result.clone());
    result
}

/// The formula satisfied by exactly the strings whose extension by
/// `sigma` satisfies `phi`.
pub fn next_sigma(phi: &Formula, sigma: SymbolId) -> Formula {
    assert!(
        sigma < phi.alphabet().len(),
        "extension symbol must belong to the formula's alphabet"
    );
    let mut memo = BTreeMap::new();
    go(phi, sigma, &mut memo).simplify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, satisfies, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn base_rules() {
        let al = ab();
        let a = parse_formula("a", &al).unwrap();
        let b = parse_formula("b", &al).unwrap();
        assert!(next_sigma(&a, 0).is_canonical_true());
        assert!(next_sigma(&b, 0).is_canonical_false());
        assert!(next_sigma(&Formula::bos(&al), 0).is_canonical_false());
    }

    #[test]
    fn yesterday_drops_to_operand() {
        let al = ab();
        let a = parse_formula("a", &al).unwrap();
        assert_eq!(next_sigma(&a.y(), 0), a);
    }

    #[test]
    fn since_rule_matches_semantics_by_brute_force() {
        let al = ab();
        let phi = parse_formula("a S b", &al).unwrap();
        let next = next_sigma(&phi, 0);
        // Spot the shape: (true & (a S b)) | next_a(b) simplifies to a S b.
        assert_eq!(next, phi);
        for w in [
            alloc::vec![],
            alloc::vec![0],
            alloc::vec![1],
            alloc::vec![0, 1],
            alloc::vec![1, 0, 0],
            alloc::vec![1, 1, 0, 1],
        ] {
            let mut wa = w.clone();
            wa.push(0);
            assert_eq!(
                satisfies(&w, w.len(), &next).unwrap(),
                satisfies(&wa, wa.len(), &phi).unwrap()
            );
        }
    }

    #[test]
    fn fragment_never_grows() {
        let al = ab();
        for text in ["H a", "a S b", "Y (a & H b)", "P a", "a & !b"] {
            let phi = parse_formula(text, &al).unwrap();
            for sigma in al.ids() {
                let next = next_sigma(&phi, sigma);
                assert!(
                    next.fragment().subset_of(&phi.fragment()),
                    "{} grew from {} to {}",
                    text,
                    phi.fragment(),
                    next.fragment()
                );
            }
        }
    }
}
