//! Property suites for the logic, automata, and model layers: the
//! incremental evaluator against the literal quantifier clauses, algebraic
//! identities, agreement between independent computation routes, and
//! structural invariants of the encoders.

mod common;

use common::{random_alphabet, random_formula, satisfies_literal, strings_upto, GenOptions};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use weft_core::automata::{dfa_run, minimize_dfa, nfa_weight, Dfa, WeightedNfa};
use weft_core::logic::{models, satisfies, Alphabet, SymbolId};
use weft_core::models::{verify_normalization, StateEncoder, TupleEncoder};
use weft_core::oracle::total_mass_upto;
use weft_core::semiring::{ExtRat, SemiringKind, SemiringValue};
use weft_core::transforms::next_sigma;
use weft_core::Formula;

proptest! {
    /// Exact semiring algebra: associativity, commutativity,
    /// distributivity, identities, and annihilation, over both domains.
    #[test]
    fn semiring_axioms(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let value = |rng: &mut StdRng, boolean: bool| -> SemiringValue {
            if boolean {
                SemiringValue::Bool(rng.gen())
            } else if rng.gen_ratio(1, 10) {
                SemiringValue::ExtRat(ExtRat::Infinity)
            } else {
                SemiringValue::rational(rng.gen_range(0..8), rng.gen_range(1..8))
            }
        };
        for boolean in [true, false] {
            let kind = if boolean { SemiringKind::Boolean } else { SemiringKind::Real };
            let (x, y, z) = (value(&mut rng, boolean), value(&mut rng, boolean), value(&mut rng, boolean));
            let zero = SemiringValue::zero(kind);
            let one = SemiringValue::one(kind);
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(
                x.mul(&y.add(&z).unwrap()).unwrap(),
                x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.add(&zero).unwrap(), x.clone());
            prop_assert_eq!(x.mul(&one).unwrap(), x.clone());
            prop_assert_eq!(x.mul(&zero).unwrap(), zero);
        }
    }

    /// The incremental evaluator agrees with the literal quantifier
    /// clauses at every position of random strings.
    #[test]
    fn evaluator_matches_quantifier_clauses(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let al = random_alphabet(&mut rng);
        let phi = random_formula(&mut rng, &al, 4, GenOptions::full());
        let len = rng.gen_range(0..=6);
        let w: Vec<SymbolId> = (0..len).map(|_| rng.gen_range(0..al.len())).collect();
        for i in 0..=w.len() {
            prop_assert_eq!(
                satisfies(&w, i, &phi).unwrap(),
                satisfies_literal(&w, i, &phi),
                "{} at {} of {:?}", phi, i, w
            );
        }
    }

    /// Double negation and the P/H duality.
    #[test]
    fn negation_laws(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let al = random_alphabet(&mut rng);
        let phi = random_formula(&mut rng, &al, 4, GenOptions::full());
        let len = rng.gen_range(0..=6);
        let w: Vec<SymbolId> = (0..len).map(|_| rng.gen_range(0..al.len())).collect();
        for i in 0..=w.len() {
            let direct = satisfies(&w, i, &phi).unwrap();
            prop_assert_eq!(satisfies(&w, i, &phi.not().not()).unwrap(), direct);
            // P φ = ¬H¬φ evaluates as "φ held at some earlier-or-current
            // non-bos position".
            let previously = satisfies(&w, i, &phi.previously()).unwrap();
            let expect = (1..=i).any(|j| satisfies(&w, j, &phi).unwrap());
            prop_assert_eq!(previously, expect);
        }
    }

    /// `H φ` holds exactly when `φ` holds at all positions `1..=i`, and
    /// simplification preserves satisfaction everywhere.
    #[test]
    fn h_subsumption_and_simplify(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let al = random_alphabet(&mut rng);
        let phi = random_formula(&mut rng, &al, 4, GenOptions::full());
        let simplified = phi.simplify();
        let len = rng.gen_range(0..=6);
        let w: Vec<SymbolId> = (0..len).map(|_| rng.gen_range(0..al.len())).collect();
        for i in 0..=w.len() {
            let all_past = (1..=i).all(|j| satisfies(&w, j, &phi).unwrap());
            prop_assert_eq!(satisfies(&w, i, &phi.h()).unwrap(), all_past);
            prop_assert_eq!(
                satisfies(&w, i, &simplified).unwrap(),
                satisfies(&w, i, &phi).unwrap(),
                "{} simplified to {}", phi, simplified
            );
        }
    }

    /// The single-symbol extension law, and its fragment preservation.
    #[test]
    fn next_extension_law(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let al = random_alphabet(&mut rng);
        let phi = random_formula(&mut rng, &al, 4, GenOptions::full());
        let sigma = rng.gen_range(0..al.len());
        let next = next_sigma(&phi, sigma);
        prop_assert!(next.fragment().subset_of(&phi.fragment()));
        let len = rng.gen_range(0..=5);
        let w: Vec<SymbolId> = (0..len).map(|_| rng.gen_range(0..al.len())).collect();
        let mut ws = w.clone();
        ws.push(sigma);
        prop_assert_eq!(models(&w, &next).unwrap(), models(&ws, &phi).unwrap());
    }
}

fn random_dfa(rng: &mut StdRng, al: &Alphabet, states: usize) -> Dfa {
    let names = (0..states).map(|i| format!("r{}", i)).collect();
    let table = (0..states)
        .map(|_| al.ids().map(|_| rng.gen_range(0..states)).collect())
        .collect();
    Dfa::total(al.clone(), names, table, 0).unwrap()
}

#[test]
fn delta_star_composes_on_random_machines() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        let al = random_alphabet(&mut rng);
        let states = rng.gen_range(1..=5);
        let dfa = random_dfa(&mut rng, &al, states);
        for _ in 0..20 {
            let u: Vec<SymbolId> = (0..rng.gen_range(0..=6))
                .map(|_| rng.gen_range(0..al.len()))
                .collect();
            let v: Vec<SymbolId> = (0..rng.gen_range(0..=6))
                .map(|_| rng.gen_range(0..al.len()))
                .collect();
            let uv: Vec<SymbolId> = u.iter().chain(&v).copied().collect();
            for q in 0..dfa.num_states() {
                assert_eq!(dfa.delta_star(q, &uv), dfa.delta_star(dfa.delta_star(q, &u), &v));
            }
        }
    }
}

#[test]
fn minimization_preserves_language_on_random_machines() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..30 {
        let al = random_alphabet(&mut rng);
        let states = rng.gen_range(1..=6);
        let dfa = random_dfa(&mut rng, &al, states);
        let accepting: Vec<bool> = (0..dfa.num_states()).map(|_| rng.gen()).collect();
        let minimized = minimize_dfa(&dfa, &|q| accepting[q]);
        for w in strings_upto(&al, 8) {
            let old = accepting[*dfa_run(&dfa, &w).unwrap().last().unwrap()];
            let new =
                minimized.accepting[*dfa_run(&minimized.dfa, &w).unwrap().last().unwrap()];
            assert_eq!(old, new, "{:?}", w);
        }
    }
}

#[test]
fn nfa_weight_agrees_with_path_enumeration_on_random_machines() {
    fn by_paths(m: &WeightedNfa, q: usize, w: &[SymbolId], acc: &SemiringValue) -> SemiringValue {
        match w.split_first() {
            None => acc.mul(m.ending(q)).unwrap(),
            Some((&s, rest)) => {
                let mut total = SemiringValue::zero(m.kind());
                for dst in 0..m.num_states() {
                    let step = m.weight_of(q, s, dst);
                    if step.is_zero() {
                        continue;
                    }
                    let sub = by_paths(m, dst, rest, &acc.mul(step).unwrap());
                    total = total.add(&sub).unwrap();
                }
                total
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..25 {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let n = rng.gen_range(1..=3);
        let mut transitions = Vec::new();
        for src in 0..n {
            for sym in al.ids() {
                for dst in 0..n {
                    if rng.gen_ratio(1, 2) {
                        transitions.push((
                            src,
                            sym,
                            dst,
                            SemiringValue::rational(rng.gen_range(0..4), rng.gen_range(1..4)),
                        ));
                    }
                }
            }
        }
        let ending = (0..n)
            .map(|_| SemiringValue::rational(rng.gen_range(0..3), rng.gen_range(1..3)))
            .collect();
        let m = WeightedNfa::new(al.clone(), (0..n).map(|i| format!("n{}", i)).collect(),
            SemiringKind::Real, &transitions, 0, ending).unwrap();
        for w in strings_upto(&al, 5) {
            let direct = nfa_weight(&m, &w).unwrap();
            let oracle = by_paths(&m, m.initial(), &w, &SemiringValue::one(m.kind()));
            assert_eq!(direct, oracle, "{:?}", w);
        }
    }
}

#[test]
fn autoregressor_chain_rule_on_fixtures() {
    // string weight factors through any split point with the suffix
    // carrying the shared end-of-string step.
    for a in [
        weft_core::fixtures::ab_star_autoregressor(),
        weft_core::fixtures::half_a_star_autoregressor(),
    ] {
        let al = a.alphabet().clone();
        for w in strings_upto(&al, 6) {
            let whole = a.string_weight(&w).unwrap();
            for k in 0..=w.len() {
                let split = a.suffix_weight(&w[..k], &w[k..]).unwrap();
                let mut prefix_steps = SemiringValue::one(a.kind());
                for i in 0..k {
                    let step = a
                        .symbol_weight(&w[..i], weft_core::models::OutSym::Sym(w[i]))
                        .unwrap();
                    prefix_steps = prefix_steps.mul(&step).unwrap();
                }
                assert_eq!(prefix_steps.mul(&split).unwrap(), whole, "{:?} at {}", w, k);
            }
        }
    }
}

#[test]
fn empty_suffix_weight_is_the_eos_weight() {
    let a = weft_core::fixtures::half_a_star_autoregressor();
    let u = vec![0, 0];
    assert_eq!(
        a.suffix_weight(&u, &[]).unwrap(),
        a.symbol_weight(&u, weft_core::models::OutSym::Eos).unwrap()
    );
}

#[test]
fn normalized_fixture_mass_is_monotone_and_bounded() {
    let a = weft_core::fixtures::half_a_star_autoregressor();
    assert!(verify_normalization(&a).unwrap().is_normalized());
    let al = a.alphabet().clone();
    let one = num_rational::BigRational::from(num_bigint::BigInt::from(1));
    let mut last = num_rational::BigRational::from(num_bigint::BigInt::from(0));
    for bound in 0..=10 {
        let mass = total_mass_upto(&al, |w| a.string_weight(w).unwrap(), bound).unwrap();
        assert!(mass >= last);
        assert!(mass <= one);
        last = mass;
    }
}

#[test]
fn encoders_are_prefix_deterministic() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..20 {
        let al = random_alphabet(&mut rng);
        let m = rng.gen_range(1..=2);
        let tuple: Vec<Formula> = (0..m)
            .map(|_| random_formula(&mut rng, &al, 3, GenOptions::full()))
            .collect();
        let encoder = TupleEncoder::with_alphabet(al.clone(), tuple).unwrap();
        let shared: Vec<SymbolId> = (0..rng.gen_range(0..=4))
            .map(|_| rng.gen_range(0..al.len()))
            .collect();
        let extend = |rng: &mut StdRng, base: &[SymbolId]| {
            let mut w = base.to_vec();
            for _ in 0..rng.gen_range(0..=3) {
                w.push(rng.gen_range(0..al.len()));
            }
            w
        };
        let w1 = extend(&mut rng, &shared);
        let w2 = extend(&mut rng, &shared);
        let t1 = encoder.run(&w1).unwrap();
        let t2 = encoder.run(&w2).unwrap();
        for i in 0..=shared.len() {
            assert_eq!(t1[i], t2[i]);
        }
    }
}
