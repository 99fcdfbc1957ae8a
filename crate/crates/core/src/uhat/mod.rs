//! Exact evaluation of strictly-masked rightmost unique-hard-attention
//! transformers, and extraction of the finite state encoders they induce.
//!
//! All coefficients and activations are exact rationals, so the rightmost
//! argmax tie-breaking is deterministic and traces are bit-identical
//! across runs. The feed-forward blocks are compositions of affine maps
//! and rectifiers with optional residual connections around the attention
//! and feed-forward sublayers.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::automata::Dfa;
use crate::logic::{Alphabet, SymbolId};
use crate::models::{EncoderMachine, ModelError, StateEncoder};

pub type Vector = Vec<BigRational>;
pub type Matrix = Vec<Vec<BigRational>>;

/// `x ↦ Wx + b` with `W` given in row-major form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub weight: Matrix,
    pub bias: Vector,
}

impl AffineMap {
    pub fn out_dim(&self) -> usize {
        self.weight.len()
    }

    pub fn in_dim(&self) -> usize {
        self.weight.first().map(Vec::len).unwrap_or(0)
    }

    fn check(&self, in_dim: usize, what: &str) -> Result<usize, UhatError> {
        if self.weight.is_empty()
            || self.weight.iter().any(|row| row.len() != in_dim)
            || self.bias.len() != self.weight.len()
        {
            return Err(UhatError::Dimension {
                what: what.to_string(),
            });
        }
        Ok(self.out_dim())
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        self.weight
            .iter()
            .zip(&self.bias)
            .map(|(row, b)| {
                let mut acc = b.clone();
                for (w, v) in row.iter().zip(x) {
                    if !w.is_zero() && !v.is_zero() {
                        acc += w * v;
                    }
                }
                acc
            })
            .collect()
    }
}

/// One attention head: affine query/key maps into the key width and an
/// affine value map back into the model width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Head {
    pub query: AffineMap,
    pub key: AffineMap,
    pub value: AffineMap,
}

/// A step of the position-wise feed-forward pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FfnStep {
    Affine(AffineMap),
    Relu,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub heads: Vec<Head>,
    pub attn_residual: bool,
    pub ffn: Vec<FfnStep>,
    pub ffn_residual: bool,
}

/// A rightmost unique-hard-attention transformer with strict future
/// masking and no position embeddings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UhatModel {
    alphabet: Alphabet,
    dim: usize,
    key_dim: usize,
    bos_embedding: Vector,
    embeddings: Vec<Vector>,
    layers: Vec<Layer>,
}

impl UhatModel {
    pub fn new(
        alphabet: Alphabet,
        dim: usize,
        key_dim: usize,
        bos_embedding: Vector,
        embeddings: Vec<Vector>,
        layers: Vec<Layer>,
    ) -> Result<UhatModel, UhatError> {
        if bos_embedding.len() != dim {
            return Err(UhatError::Dimension {
                what: "bos embedding".to_string(),
            });
        }
        if embeddings.len() != alphabet.len() || embeddings.iter().any(|e| e.len() != dim) {
            return Err(UhatError::Dimension {
                what: "symbol embeddings".to_string(),
            });
        }
        for (li, layer) in layers.iter().enumerate() {
            for (hi, head) in layer.heads.iter().enumerate() {
                let what = alloc::format!("layer {} head {}", li, hi);
                if head.query.check(dim, &what)? != key_dim
                    || head.key.check(dim, &what)? != key_dim
                {
                    return Err(UhatError::Dimension { what });
                }
                if head.value.check(dim, &what)? != dim {
                    return Err(UhatError::Dimension { what });
                }
            }
            let mut width = dim;
            for (si, step) in layer.ffn.iter().enumerate() {
                if let FfnStep::Affine(map) = step {
                    width = map.check(width, &alloc::format!("layer {} ffn step {}", li, si))?;
                }
            }
            if width != dim {
                return Err(UhatError::Dimension {
                    what: alloc::format!("layer {} ffn output", li),
                });
            }
        }
        Ok(UhatModel {
            alphabet,
            dim,
            key_dim,
            bos_embedding,
            embeddings,
            layers,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn key_dim(&self) -> usize {
        self.key_dim
    }

    pub fn bos_embedding(&self) -> &Vector {
        &self.bos_embedding
    }

    pub fn embedding(&self, s: SymbolId) -> &Vector {
        &self.embeddings[s]
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }
}

/// The per-position states of one forward pass: entry `i` is the state
/// after reading `w_i` (entry 0 after the prepended `bos`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UhatTrace {
    pub states: Vec<Vector>,
}

/// Strictly-masked rightmost-hard attention over exact rational scores:
/// position `i` receives the value at the rightmost position `j < i`
/// maximizing the dot-product score, and position 0 receives zero.
pub fn attend(
    queries: &[Vector],
    keys: &[Vector],
    values: &[Vector],
) -> Result<Vec<Vector>, UhatError> {
    let n = queries.len();
    if keys.len() != n || values.len() != n {
        return Err(UhatError::Dimension {
            what: "attention sequence lengths".to_string(),
        });
    }
    let key_width = keys.first().map(Vec::len).unwrap_or(0);
    if queries.iter().any(|q| q.len() != key_width) || keys.iter().any(|k| k.len() != key_width) {
        return Err(UhatError::Dimension {
            what: "query/key width".to_string(),
        });
    }
    let value_width = values.first().map(Vec::len).unwrap_or(0);
    if values.iter().any(|v| v.len() != value_width) {
        return Err(UhatError::Dimension {
            what: "value width".to_string(),
        });
    }
    let dot = |a: &Vector, b: &Vector| -> BigRational {
        let mut acc = BigRational::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        acc
    };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i == 0 {
            out.push(alloc::vec![BigRational::zero(); value_width]);
            continue;
        }
        let mut best_j = 0usize;
        let mut best = dot(&queries[i], &keys[0]);
        for j in 1..i {
            let score = dot(&queries[i], &keys[j]);
            // `>=` keeps the rightmost among equal maxima.
            if score >= best {
                best = score;
                best_j = j;
            }
        }
        out.push(values[best_j].clone());
    }
    Ok(out)
}

/// The full forward pass over `bos · w` with exact arithmetic.
pub fn encode(model: &UhatModel, w: &[SymbolId]) -> Result<UhatTrace, UhatError> {
    if let Some(&bad) = w.iter().find(|&&s| s >= model.alphabet.len()) {
        return Err(UhatError::SymbolOutsideAlphabet(bad));
    }
    let mut states: Vec<Vector> = Vec::with_capacity(w.len() + 1);
    states.push(model.bos_embedding.clone());
    for &s in w {
        states.push(model.embeddings[s].clone());
    }
    for layer in &model.layers {
        // Attention sublayer: heads are summed.
        let mut combined: Vec<Vector> = alloc::vec![alloc::vec![BigRational::zero(); model.dim]; states.len()];
        for head in &layer.heads {
            let queries: Vec<Vector> = states.iter().map(|h| head.query.apply(h)).collect();
            let keys: Vec<Vector> = states.iter().map(|h| head.key.apply(h)).collect();
            let values: Vec<Vector> = states.iter().map(|h| head.value.apply(h)).collect();
            let contrib = attend(&queries, &keys, &values)?;
            for (acc, c) in combined.iter_mut().zip(contrib) {
                for (a, v) in acc.iter_mut().zip(c) {
                    *a += v;
                }
            }
        }
        let after_attn: Vec<Vector> = states
            .iter()
            .zip(combined)
            .map(|(h, c)| {
                if layer.attn_residual {
                    h.iter().zip(c).map(|(a, b)| a + b).collect()
                } else {
                    c
                }
            })
            .collect();
        // Feed-forward sublayer.
        states = after_attn
            .iter()
            .map(|h| {
                let mut x = h.clone();
                for step in &layer.ffn {
                    x = match step {
                        FfnStep::Affine(map) => map.apply(&x),
                        FfnStep::Relu => x
                            .into_iter()
                            .map(|v| if v < BigRational::zero() { BigRational::zero() } else { v })
                            .collect(),
                    };
                }
                if layer.ffn_residual {
                    h.iter().zip(x).map(|(a, b)| a + b).collect()
                } else {
                    x
                }
            })
            .collect();
    }
    Ok(UhatTrace { states })
}

/// The distinct state vectors observed over all strings of length at most
/// `bound`, interned in order of first appearance along a length-then-lex
/// enumeration.
#[derive(Clone, Debug)]
pub struct StateTable {
    pub states: Vec<Vector>,
    /// Whether no new state first appeared at the final length, i.e. the
    /// table at `bound` equals the table at `bound - 1`.
    pub saturated: bool,
    pub bound: usize,
}

/// Enumerates traces of all strings up to `bound` and interns the states.
pub fn extract_states(model: &UhatModel, bound: usize) -> Result<ExtractedEncoder, UhatError> {
    let mut index: BTreeMap<Vector, u64> = BTreeMap::new();
    let mut states: Vec<Vector> = Vec::new();
    let mut last_new_length = 0usize;
    let intern = |v: &Vector, length: usize,
                      states: &mut Vec<Vector>,
                      index: &mut BTreeMap<Vector, u64>,
                      last_new: &mut usize| {
        if !index.contains_key(v) {
            index.insert(v.clone(), states.len() as u64);
            states.push(v.clone());
            *last_new = (*last_new).max(length);
        }
    };

    // Transition observations for the machine view.
    let mut transitions: BTreeMap<(u64, SymbolId), u64> = BTreeMap::new();
    let mut consistent = true;

    let mut layer: Vec<Vec<SymbolId>> = alloc::vec![Vec::new()];
    for length in 0..=bound {
        for w in &layer {
            let trace = encode(model, w)?;
            for (i, state) in trace.states.iter().enumerate() {
                intern(state, i, &mut states, &mut index, &mut last_new_length);
                let _ = i;
            }
            for i in 0..w.len() {
                let src = index[&trace.states[i]];
                let dst = index[&trace.states[i + 1]];
                match transitions.get(&(src, w[i])) {
                    Some(&seen) if seen != dst => consistent = false,
                    Some(_) => {}
                    None => {
                        transitions.insert((src, w[i]), dst);
                    }
                }
            }
        }
        if length == bound {
            break;
        }
        let mut next = Vec::new();
        for w in &layer {
            for s in model.alphabet.ids() {
                let mut w2 = w.clone();
                w2.push(s);
                next.push(w2);
            }
        }
        layer = next;
    }

    let saturated = bound > 0 && last_new_length < bound;
    let initial = index[&encode(model, &[])?.states[0]];
    Ok(ExtractedEncoder {
        model: model.clone(),
        table: StateTable {
            states,
            saturated,
            bound,
        },
        index,
        transitions,
        markov_consistent: consistent,
        initial,
    })
}

/// A transformer together with its extracted state table, usable as a
/// state encoder for strings no longer than the extraction bound.
#[derive(Clone, Debug)]
pub struct ExtractedEncoder {
    model: UhatModel,
    table: StateTable,
    index: BTreeMap<Vector, u64>,
    transitions: BTreeMap<(u64, SymbolId), u64>,
    markov_consistent: bool,
    initial: u64,
}

pub use ExtractedEncoder as UhatEncoder;

impl ExtractedEncoder {
    pub fn model(&self) -> &UhatModel {
        &self.model
    }

    pub fn table(&self) -> &StateTable {
        &self.table
    }

    pub fn saturated(&self) -> bool {
        self.table.saturated
    }

    pub fn num_states(&self) -> usize {
        self.table.states.len()
    }
}

impl StateEncoder for ExtractedEncoder {
    fn alphabet(&self) -> &Alphabet {
        self.model.alphabet()
    }

    fn run(&self, w: &[SymbolId]) -> Result<Vec<u64>, ModelError> {
        if w.len() > self.table.bound {
            return Err(ModelError::EncoderNotFinite(alloc::format!(
                "string of length {} exceeds the extraction bound {}",
                w.len(),
                self.table.bound
            )));
        }
        let trace = encode(&self.model, w).map_err(|e| ModelError::EncoderNotFinite(alloc::format!("{}", e)))?;
        trace
            .states
            .iter()
            .map(|s| {
                self.index.get(s).copied().ok_or_else(|| {
                    ModelError::EncoderNotFinite("state outside the extracted table".to_string())
                })
            })
            .collect()
    }

    fn machine(&self) -> Result<EncoderMachine, ModelError> {
        if !self.table.saturated {
            return Err(ModelError::EncoderNotFinite(
                "state extraction did not saturate".to_string(),
            ));
        }
        if !self.markov_consistent {
            return Err(ModelError::EncoderNotFinite(
                "observed states do not determine successor states".to_string(),
            ));
        }
        let n = self.table.states.len();
        let mut table: Vec<Vec<usize>> = Vec::with_capacity(n);
        for q in 0..n as u64 {
            let mut row = Vec::with_capacity(self.model.alphabet.len());
            for s in self.model.alphabet.ids() {
                match self.transitions.get(&(q, s)) {
                    Some(&dst) => row.push(dst as usize),
                    None => {
                        return Err(ModelError::EncoderNotFinite(alloc::format!(
                            "no observed transition from state {} on symbol {}",
                            q,
                            self.model.alphabet.symbol(s)
                        )))
                    }
                }
            }
            table.push(row);
        }
        let names: Vec<String> = (0..n).map(|i| alloc::format!("u{}", i)).collect();
        let dfa = Dfa::total(self.model.alphabet.clone(), names, table, self.initial as usize)?;
        Ok(EncoderMachine {
            dfa,
            tokens: (0..n as u64).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UhatError {
    Dimension { what: String },
    SymbolOutsideAlphabet(SymbolId),
}

impl fmt::Display for UhatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UhatError::Dimension { what } => write!(f, "dimension mismatch in {}", what),
            UhatError::SymbolOutsideAlphabet(s) => {
                write!(f, "symbol id {} outside the alphabet", s)
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for UhatError {}
