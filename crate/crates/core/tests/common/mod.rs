//! Shared helpers for the integration suites: deterministic random
//! generators and the literal quantifier-clause evaluation oracle.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

use weft_core::logic::{Alphabet, Formula, Op, SymbolId};
use weft_core::oracle::StringEnumerator;

/// Direct transcription of the satisfaction clauses with explicit
/// quantifiers, independent of the incremental evaluator it checks:
/// symbol predicates read `w_i` (position 0 carries `bos`), `Y` steps
/// back one position, and `H`/`S` quantify over positions `1..=i`.
pub fn satisfies_literal(w: &[SymbolId], i: usize, phi: &Formula) -> bool {
    match phi.op() {
        Op::Sym(s) => i >= 1 && w[i - 1] == *s,
        Op::Bos => i == 0,
        Op::Not(a) => !satisfies_literal(w, i, a),
        Op::And(a, b) => satisfies_literal(w, i, a) && satisfies_literal(w, i, b),
        Op::Y(a) => i > 0 && satisfies_literal(w, i - 1, a),
        Op::H(a) => (1..=i).all(|j| satisfies_literal(w, j, a)),
        Op::S(a, b) => (1..=i).any(|j| {
            satisfies_literal(w, j, b) && (j + 1..=i).all(|j2| satisfies_literal(w, j2, a))
        }),
    }
}

/// Operator menu for random formula generation.
#[derive(Clone, Copy)]
pub struct GenOptions {
    pub allow_y: bool,
    pub allow_h: bool,
    pub allow_s: bool,
    /// Remaining `Y`-nesting budget; `u32::MAX` means unbounded.
    pub y_budget: u32,
}

impl GenOptions {
    pub fn full() -> GenOptions {
        GenOptions {
            allow_y: true,
            allow_h: true,
            allow_s: true,
            y_budget: u32::MAX,
        }
    }

    pub fn hy_depth_one() -> GenOptions {
        GenOptions {
            allow_y: true,
            allow_h: true,
            allow_s: false,
            y_budget: 1,
        }
    }
}

/// A random formula of the given depth over the alphabet, drawn from the
/// allowed operators (sugar included, which desugars on construction).
pub fn random_formula(rng: &mut StdRng, al: &Alphabet, depth: usize, opts: GenOptions) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..8) {
            0 => Formula::bos(al),
            1 => Formula::tru(al),
            2 => Formula::fls(al),
            _ => Formula::sym_id(al, rng.gen_range(0..al.len())),
        };
    }
    let mut menu: Vec<u32> = vec![0, 0, 1, 1, 2, 3]; // not, and, or, atom
    if opts.allow_y && opts.y_budget > 0 {
        menu.extend([4, 4]);
    }
    if opts.allow_h {
        menu.extend([5, 5]);
    }
    if opts.allow_s {
        menu.extend([6, 6]);
    }
    match menu[rng.gen_range(0..menu.len())] {
        0 => random_formula(rng, al, depth - 1, opts).not(),
        1 => {
            let a = random_formula(rng, al, depth - 1, opts);
            let b = random_formula(rng, al, depth - 1, opts);
            a.and(&b)
        }
        2 => {
            let a = random_formula(rng, al, depth - 1, opts);
            let b = random_formula(rng, al, depth - 1, opts);
            a.or(&b)
        }
        3 => random_formula(rng, al, 0, opts),
        4 => {
            let mut inner = opts;
            inner.y_budget = opts.y_budget.saturating_sub(1);
            random_formula(rng, al, depth - 1, inner).y()
        }
        5 => random_formula(rng, al, depth - 1, opts).h(),
        _ => {
            let a = random_formula(rng, al, depth - 1, opts);
            let b = random_formula(rng, al, depth - 1, opts);
            a.since(&b)
        }
    }
}

/// A random alphabet of one to three single-letter symbols.
pub fn random_alphabet(rng: &mut StdRng) -> Alphabet {
    let letters = ["a", "b", "c"];
    let k = rng.gen_range(1..=3);
    Alphabet::new(letters[..k].to_vec()).unwrap()
}

/// All strings of length at most `bound` in length-lex order.
pub fn strings_upto(al: &Alphabet, bound: usize) -> Vec<Vec<SymbolId>> {
    StringEnumerator::new(al, bound).collect()
}

/// String weight of an autoregressor computed through its compiled
/// machine view: the product of per-step row entries along the DFA run
/// and the end-of-string entry at the final state. Fast path for bulk
/// comparisons; spot-checked against the direct evaluation in the suites.
pub fn machine_string_weight(
    a: &weft_core::models::Autoregressor,
    machine: &weft_core::models::EncoderMachine,
    w: &[SymbolId],
) -> weft_core::SemiringValue {
    let run = weft_core::automata::dfa_run(&machine.dfa, w).expect("alphabet checked");
    let mut product = weft_core::SemiringValue::one(a.kind());
    for (i, &sym) in w.iter().enumerate() {
        let row = a.row(machine.tokens[run[i]]).expect("total rows");
        product = product.mul(&row[sym]).expect("same kind");
    }
    let eos = a.alphabet().len();
    let row = a.row(machine.tokens[run[w.len()]]).expect("total rows");
    product.mul(&row[eos]).expect("same kind")
}
