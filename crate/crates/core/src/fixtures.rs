//! The worked examples used throughout the suites: the two small DFAs and
//! the weighted branching machine from the figure, the (ab)* Boolean
//! autoregressor, the (1/2 a)* and (1 a)* machines, the (aab)* machine,
//! and the alternating-block language family.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::automata::{Dfa, StateSet, WeightedNfa};
use crate::logic::{Alphabet, Formula};
use crate::models::{Autoregressor, Classifier, OutputTable, RowTable, TupleEncoder};
use crate::semiring::{SemiringKind, SemiringValue};

pub fn ab_alphabet() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

pub fn a_alphabet() -> Alphabet {
    Alphabet::new(["a"]).unwrap()
}

/// Two states exchanged by `a` then `b`; counter-free with stability
/// index 2. Missing transitions are completed with a sink.
pub fn fig1a_dfa() -> Dfa {
    Dfa::completed(
        ab_alphabet(),
        alloc::vec!["q1".to_string(), "q2".to_string()],
        alloc::vec![
            alloc::vec![Some(1), None], // q1 --a--> q2
            alloc::vec![None, Some(0)], // q2 --b--> q1
        ],
        0,
    )
    .unwrap()
}

/// Two states exchanged by `a` alone; not counter-free.
pub fn fig1b_dfa() -> Dfa {
    Dfa::completed(
        ab_alphabet(),
        alloc::vec!["q1".to_string(), "q2".to_string()],
        alloc::vec![
            alloc::vec![Some(1), None], // q1 --a--> q2
            alloc::vec![Some(0), None], // q2 --a--> q1
        ],
        0,
    )
    .unwrap()
}

/// The counter-free weighted NFA with no equivalent weighted DFA: a
/// half-weight branch into two self-looping states with loop weights 1/2
/// and 3/4 and ending weights 1/2 and 1/4.
pub fn fig1c_wnfa() -> WeightedNfa {
    fig1c_with_loops(SemiringValue::rational(1, 2), SemiringValue::rational(3, 4))
}

/// The same shape with both loops at 1/2, making the sibling states twins.
pub fn fig1c_wnfa_equal_loops() -> WeightedNfa {
    fig1c_with_loops(SemiringValue::rational(1, 2), SemiringValue::rational(1, 2))
}

fn fig1c_with_loops(loop1: SemiringValue, loop2: SemiringValue) -> WeightedNfa {
    let half = SemiringValue::rational(1, 2);
    WeightedNfa::new(
        a_alphabet(),
        alloc::vec!["q0".to_string(), "q1".to_string(), "q2".to_string()],
        SemiringKind::Real,
        &[
            (0, 0, 1, half.clone()),
            (0, 0, 2, half),
            (1, 0, 1, loop1),
            (2, 0, 2, loop2),
        ],
        0,
        alloc::vec![
            SemiringValue::rational(0, 1),
            SemiringValue::rational(1, 2),
            SemiringValue::rational(1, 4),
        ],
    )
    .unwrap()
}

/// Minimal machine for (aab)* over {a, b}, with its accepting set.
pub fn aab_star_dfa() -> (Dfa, StateSet) {
    let dfa = Dfa::completed(
        ab_alphabet(),
        alloc::vec!["s0".to_string(), "s1".to_string(), "s2".to_string()],
        alloc::vec![
            alloc::vec![Some(1), None],
            alloc::vec![Some(2), None],
            alloc::vec![None, Some(0)],
        ],
        0,
    )
    .unwrap();
    (dfa, [0].into_iter().collect())
}

/// Minimal machine for (ab)* over {a, b}, with its accepting set.
pub fn ab_star_dfa() -> (Dfa, StateSet) {
    let dfa = Dfa::completed(
        ab_alphabet(),
        alloc::vec!["even".to_string(), "odd".to_string()],
        alloc::vec![
            alloc::vec![Some(1), None], // even --a--> odd
            alloc::vec![None, Some(0)], // odd --b--> even
        ],
        0,
    )
    .unwrap();
    (dfa, [0].into_iter().collect())
}

/// The alternating-block family over {a, b}: member 1 is `a*` and each
/// successor appends the other letter's block, so member 2 is `a*b*`,
/// member 3 is `a*b*a*`, and so on. Returns the chain machine and its
/// accepting set (every block state).
pub fn l_k(k: usize) -> (Dfa, StateSet) {
    assert!(k >= 1, "the family starts at member 1");
    let names: Vec<String> = (0..k).map(|i| alloc::format!("blk{}", i)).collect();
    let mut table: Vec<Vec<Option<usize>>> = Vec::new();
    for i in 0..k {
        // Block i repeats its own letter (a for even i, b for odd) and
        // advances on the other one.
        let own = i % 2;
        let mut row = alloc::vec![None, None];
        row[own] = Some(i);
        if i + 1 < k {
            row[1 - own] = Some(i + 1);
        }
        table.push(row);
    }
    let dfa = Dfa::completed(ab_alphabet(), names, table, 0).unwrap();
    (dfa, (0..k).collect())
}

/// The Boolean (ab)* autoregressor over the formula tuple (bos, a, b):
/// `a` and end-of-string are allowed exactly in the bos and after-`b`
/// states, `b` exactly after `a`.
pub fn ab_star_autoregressor() -> Autoregressor {
    let al = ab_alphabet();
    let tuple = alloc::vec![
        Formula::bos(&al),
        Formula::sym(&al, "a").unwrap(),
        Formula::sym(&al, "b").unwrap(),
    ];
    let encoder = TupleEncoder::new(tuple).unwrap();
    let allow = |cond: bool| SemiringValue::Bool(cond);
    let mut rows = RowTable::new();
    for h in 0u64..8 {
        let q_bos = h & 1 != 0;
        let q_a = h & 2 != 0;
        let q_b = h & 4 != 0;
        rows.insert(
            h,
            alloc::vec![
                allow(q_bos || q_b), // next symbol a
                allow(q_a),          // next symbol b
                allow(q_bos || q_b), // end of string
            ],
        );
    }
    Autoregressor::new(encoder.into(), rows).unwrap()
}

fn one_state_dfa(al: Alphabet) -> Dfa {
    let row: Vec<usize> = al.ids().map(|_| 0).collect();
    Dfa::total(al, alloc::vec!["s".to_string()], alloc::vec![row], 0).unwrap()
}

/// The (1/2 a)* real autoregressor: one state emitting `a` with weight
/// 1/2 and stopping with weight 1/2.
pub fn half_a_star_autoregressor() -> Autoregressor {
    let dfa = one_state_dfa(a_alphabet());
    let mut rows = RowTable::new();
    rows.insert(
        0,
        alloc::vec![SemiringValue::rational(1, 2), SemiringValue::rational(1, 2)],
    );
    Autoregressor::new(dfa.into(), rows).unwrap()
}

/// The (1 a)* classifier: weight 1 on every string of `a`s.
pub fn one_a_star_classifier() -> Classifier {
    let dfa = one_state_dfa(a_alphabet());
    let mut out = OutputTable::new();
    out.insert(0, SemiringValue::rational(1, 1));
    Classifier::new(dfa.into(), out).unwrap()
}

/// The same weighted language written as a candidate autoregressor row;
/// not normalized, and the verifier rejects it.
pub fn one_a_star_autoregressor_candidate() -> Autoregressor {
    let dfa = one_state_dfa(a_alphabet());
    let mut rows = RowTable::new();
    rows.insert(
        0,
        alloc::vec![SemiringValue::rational(1, 1), SemiringValue::rational(1, 1)],
    );
    Autoregressor::new(dfa.into(), rows).unwrap()
}

/// Embedding-only transformer: bos, a, b map to the three unit vectors;
/// no layers, so the trace is the embedding sequence.
pub fn uhat_embed_model() -> crate::uhat::UhatModel {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let r = |n: i64| BigRational::from(BigInt::from(n));
    crate::uhat::UhatModel::new(
        ab_alphabet(),
        3,
        1,
        alloc::vec![r(1), r(0), r(0)],
        alloc::vec![
            alloc::vec![r(0), r(1), r(0)],
            alloc::vec![r(0), r(0), r(1)]
        ],
        Vec::new(),
    )
    .unwrap()
}

/// One attention layer with constant scores, so every position attends to
/// its predecessor; the value map copies the predecessor's embedding into
/// the upper half of the state, giving a (current, previous) pair encoder.
pub fn uhat_copy_previous_model() -> crate::uhat::UhatModel {
    use crate::uhat::{AffineMap, FfnStep, Head, Layer, UhatModel};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let r = |n: i64| BigRational::from(BigInt::from(n));
    let zero_map = |rows: usize, cols: usize| AffineMap {
        weight: alloc::vec![alloc::vec![r(0); cols]; rows],
        bias: alloc::vec![r(0); rows],
    };
    let identity = AffineMap {
        weight: (0..6)
            .map(|i| (0..6).map(|j| if i == j { r(1) } else { r(0) }).collect())
            .collect(),
        bias: alloc::vec![r(0); 6],
    };
    let mut shift = zero_map(6, 6);
    for i in 0..3 {
        shift.weight[3 + i][i] = r(1);
    }
    let head = Head {
        query: zero_map(1, 6),
        key: zero_map(1, 6),
        value: shift,
    };
    let layer = Layer {
        heads: alloc::vec![head],
        attn_residual: true,
        ffn: alloc::vec![FfnStep::Affine(identity)],
        ffn_residual: false,
    };
    UhatModel::new(
        ab_alphabet(),
        6,
        1,
        alloc::vec![r(1), r(0), r(0), r(0), r(0), r(0)],
        alloc::vec![
            alloc::vec![r(0), r(1), r(0), r(0), r(0), r(0)],
            alloc::vec![r(0), r(0), r(1), r(0), r(0), r(0)]
        ],
        alloc::vec![layer],
    )
    .unwrap()
}

/// A catalog artifact: any of the machine or model kinds the fixtures
/// cover.
#[derive(Clone, Debug)]
pub enum FixtureArtifact {
    Dfa {
        dfa: Dfa,
        accepting: Option<StateSet>,
    },
    Wnfa(WeightedNfa),
    Autoregressor(Autoregressor),
    Classifier(Classifier),
    Uhat(crate::uhat::UhatModel),
}

/// Looks a fixture up by catalog name.
pub fn fixture(name: &str) -> Option<FixtureArtifact> {
    Some(match name {
        "fig1a_dfa" => FixtureArtifact::Dfa {
            dfa: fig1a_dfa(),
            accepting: None,
        },
        "fig1b_dfa" => FixtureArtifact::Dfa {
            dfa: fig1b_dfa(),
            accepting: None,
        },
        "fig1c_wnfa" => FixtureArtifact::Wnfa(fig1c_wnfa()),
        "ab_star_dfa" => {
            let (dfa, accepting) = ab_star_dfa();
            FixtureArtifact::Dfa {
                dfa,
                accepting: Some(accepting),
            }
        }
        "aab_star_dfa" => {
            let (dfa, accepting) = aab_star_dfa();
            FixtureArtifact::Dfa {
                dfa,
                accepting: Some(accepting),
            }
        }
        "ab_star_autoregressor" => FixtureArtifact::Autoregressor(ab_star_autoregressor()),
        "half_a_star_autoregressor" => {
            FixtureArtifact::Autoregressor(half_a_star_autoregressor())
        }
        "one_a_star_classifier" => FixtureArtifact::Classifier(one_a_star_classifier()),
        "uhat_embed" => FixtureArtifact::Uhat(uhat_embed_model()),
        "uhat_copy_previous" => FixtureArtifact::Uhat(uhat_copy_previous_model()),
        _ => {
            let k: usize = name.strip_prefix("l_")?.parse().ok()?;
            if k == 0 {
                return None;
            }
            let (dfa, accepting) = l_k(k);
            FixtureArtifact::Dfa {
                dfa,
                accepting: Some(accepting),
            }
        }
    })
}

/// Names of the catalog fixtures, for the command line.
pub fn catalog() -> Vec<&'static str> {
    alloc::vec![
        "fig1a_dfa",
        "fig1b_dfa",
        "fig1c_wnfa",
        "ab_star_dfa",
        "aab_star_dfa",
        "ab_star_autoregressor",
        "half_a_star_autoregressor",
        "one_a_star_classifier",
        "l_1",
        "l_2",
        "l_3",
        "l_4",
        "l_5",
        "l_6",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::dfa_run;

    #[test]
    fn l2_is_a_star_b_star() {
        let (m, acc) = l_k(2);
        let al = m.alphabet().clone();
        for (text, expect) in [
            ("", true),
            ("a", true),
            ("aa", true),
            ("b", true),
            ("ab", true),
            ("aabb", true),
            ("ba", false),
            ("aba", false),
        ] {
            let w = al.parse_string(text).unwrap();
            let last = *dfa_run(&m, &w).unwrap().last().unwrap();
            assert_eq!(acc.contains(&last), expect, "{:?}", text);
        }
    }

    #[test]
    fn l1_is_a_star() {
        let (m, acc) = l_k(1);
        let al = m.alphabet().clone();
        for (text, expect) in [("", true), ("aaa", true), ("b", false), ("ab", false)] {
            let w = al.parse_string(text).unwrap();
            let last = *dfa_run(&m, &w).unwrap().last().unwrap();
            assert_eq!(acc.contains(&last), expect, "{:?}", text);
        }
    }

    #[test]
    fn fig1c_ending_weights() {
        let m = fig1c_wnfa();
        assert_eq!(m.ending(0), &SemiringValue::rational(0, 1));
        assert_eq!(m.ending(1), &SemiringValue::rational(1, 2));
        assert_eq!(m.ending(2), &SemiringValue::rational(1, 4));
    }

    #[test]
    fn ab_star_autoregressor_spec_values() {
        use crate::models::OutSym;
        let a = ab_star_autoregressor();
        let al = a.alphabet().clone();
        let t = SemiringValue::Bool(true);
        let f = SemiringValue::Bool(false);
        // At the start, a is allowed.
        assert_eq!(a.symbol_weight(&[], OutSym::Sym(0)).unwrap(), t);
        // After a, stopping is not allowed.
        let w = al.parse_string("a").unwrap();
        assert_eq!(a.symbol_weight(&w, OutSym::Eos).unwrap(), f);
        // Whole strings.
        assert_eq!(a.string_weight(&al.parse_string("ab").unwrap()).unwrap(), t);
        assert_eq!(a.string_weight(&al.parse_string("ba").unwrap()).unwrap(), f);
        assert_eq!(a.string_weight(&[]).unwrap(), t);
    }

    #[test]
    fn half_a_star_closed_form() {
        let a = half_a_star_autoregressor();
        // a^n has weight (1/2)^{n+1}; aaa gives 1/16.
        let w = alloc::vec![0, 0, 0];
        assert_eq!(a.string_weight(&w).unwrap(), SemiringValue::rational(1, 16));
        let u = alloc::vec![0, 0];
        use crate::models::OutSym;
        assert_eq!(
            a.symbol_weight(&u, OutSym::Sym(0)).unwrap(),
            SemiringValue::rational(1, 2)
        );
    }
}
