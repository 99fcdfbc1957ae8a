//! Classifiers, autoregressors, and step functions over state encoders.
//!
//! A state encoder maps a string to a sequence of states, one per position
//! (position 0 for the `bos` marker), where each state depends only on the
//! prefix read so far. States are identified by opaque `u64` tokens whose
//! equality is meaningful within one encoder. A classifier attaches a
//! single output weight per state, read at the last position; an
//! autoregressor attaches a weight per next symbol (including end of
//! string) and multiplies them along the string.

mod linalg;
mod normalize;

pub use linalg::gaussian_solve;
pub use normalize::{verify_normalization, NormalizationFailure, NormalizationReport};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::automata::{dfa_run, is_counter_free_dfa, minimize_dfa, AutomatonError, Dfa};
use crate::logic::{encode_with_tuple, models, Alphabet, EvalError, Formula, SymbolId};
use crate::semiring::{SemiringKind, SemiringValue};
use crate::transforms::{subformula_dfa, TransformError, DEFAULT_STATE_BUDGET};
use crate::uhat::UhatEncoder;

/// Anything that sends a string to a per-position sequence of states from
/// a finite universe, where the state at position `i` depends only on the
/// first `i` symbols.
pub trait StateEncoder {
    fn alphabet(&self) -> &Alphabet;

    /// State tokens at positions `0..=|w|`.
    fn run(&self, w: &[SymbolId]) -> Result<Vec<u64>, ModelError>;

    /// An explicit finite-machine form: a DFA plus the encoder token
    /// carried by each DFA state.
    fn machine(&self) -> Result<EncoderMachine, ModelError>;
}

/// A DFA whose states are labeled with encoder tokens.
#[derive(Clone, Debug)]
pub struct EncoderMachine {
    pub dfa: Dfa,
    pub tokens: Vec<u64>,
}

impl EncoderMachine {
    pub fn token_after(&self, w: &[SymbolId]) -> Result<u64, ModelError> {
        let run = dfa_run(&self.dfa, w)?;
        Ok(self.tokens[*run.last().expect("runs are nonempty")])
    }
}

/// State encoder given by a tuple of formulas: the state at position `i`
/// is the bitmask of which formulas hold there (formula 0 in the least
/// significant bit).
#[derive(Clone, Debug)]
pub struct TupleEncoder {
    alphabet: Alphabet,
    formulas: Vec<Formula>,
}

impl TupleEncoder {
    /// Builds from a nonempty tuple; the alphabet is taken from the first
    /// formula.
    pub fn new(formulas: Vec<Formula>) -> Result<TupleEncoder, ModelError> {
        let first = formulas.first().ok_or(ModelError::EmptyTuple)?;
        let alphabet = first.alphabet().clone();
        Self::with_alphabet(alphabet, formulas)
    }

    /// Builds from any tuple, including the empty one (a single-state
    /// encoder).
    pub fn with_alphabet(
        alphabet: Alphabet,
        formulas: Vec<Formula>,
    ) -> Result<TupleEncoder, ModelError> {
        if formulas.len() > 60 {
            return Err(ModelError::TupleTooLarge(formulas.len()));
        }
        for f in &formulas {
            if f.alphabet() != &alphabet {
                return Err(ModelError::AlphabetMismatch);
            }
        }
        Ok(TupleEncoder { alphabet, formulas })
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn arity(&self) -> usize {
        self.formulas.len()
    }
}

impl StateEncoder for TupleEncoder {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn run(&self, w: &[SymbolId]) -> Result<Vec<u64>, ModelError> {
        if self.formulas.is_empty() {
            return Ok(alloc::vec![0; w.len() + 1]);
        }
        let rows = encode_with_tuple(&self.formulas, w)?;
        Ok(rows
            .iter()
            .map(|bits| {
                bits.iter()
                    .enumerate()
                    .fold(0u64, |m, (i, &b)| if b { m | (1 << i) } else { m })
            })
            .collect())
    }

    fn machine(&self) -> Result<EncoderMachine, ModelError> {
        if self.formulas.is_empty() {
            let dfa = Dfa::total(
                self.alphabet.clone(),
                alloc::vec![String::from("s")],
                alloc::vec![self.alphabet.ids().map(|_| 0).collect()],
                0,
            )?;
            return Ok(EncoderMachine {
                dfa,
                tokens: alloc::vec![0],
            });
        }
        let sub = subformula_dfa(&self.formulas, DEFAULT_STATE_BUDGET)?;
        let tokens: Vec<u64> = (0..sub.dfa.num_states()).map(|s| sub.root_mask(s)).collect();
        Ok(EncoderMachine {
            dfa: sub.dfa,
            tokens,
        })
    }
}

/// State encoder given directly by a DFA; tokens are state ids.
#[derive(Clone, Debug)]
pub struct DfaEncoder {
    dfa: Dfa,
}

impl DfaEncoder {
    pub fn new(dfa: Dfa) -> DfaEncoder {
        DfaEncoder { dfa }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }
}

impl StateEncoder for DfaEncoder {
    fn alphabet(&self) -> &Alphabet {
        self.dfa.alphabet()
    }

    fn run(&self, w: &[SymbolId]) -> Result<Vec<u64>, ModelError> {
        Ok(dfa_run(&self.dfa, w)?.into_iter().map(|q| q as u64).collect())
    }

    fn machine(&self) -> Result<EncoderMachine, ModelError> {
        Ok(EncoderMachine {
            dfa: self.dfa.clone(),
            tokens: (0..self.dfa.num_states()).map(|q| q as u64).collect(),
        })
    }
}

/// The three encoder realizations used by the crate.
#[derive(Clone, Debug)]
pub enum Encoder {
    Tuple(TupleEncoder),
    Dfa(DfaEncoder),
    Uhat(UhatEncoder),
}

impl Encoder {
    pub fn as_tuple(&self) -> Option<&TupleEncoder> {
        match self {
            Encoder::Tuple(t) => Some(t),
            _ => None,
        }
    }
}

impl StateEncoder for Encoder {
    fn alphabet(&self) -> &Alphabet {
        match self {
            Encoder::Tuple(e) => e.alphabet(),
            Encoder::Dfa(e) => e.alphabet(),
            Encoder::Uhat(e) => e.alphabet(),
        }
    }

    fn run(&self, w: &[SymbolId]) -> Result<Vec<u64>, ModelError> {
        match self {
            Encoder::Tuple(e) => e.run(w),
            Encoder::Dfa(e) => e.run(w),
            Encoder::Uhat(e) => e.run(w),
        }
    }

    fn machine(&self) -> Result<EncoderMachine, ModelError> {
        match self {
            Encoder::Tuple(e) => e.machine(),
            Encoder::Dfa(e) => e.machine(),
            Encoder::Uhat(e) => e.machine(),
        }
    }
}

impl From<TupleEncoder> for Encoder {
    fn from(e: TupleEncoder) -> Encoder {
        Encoder::Tuple(e)
    }
}

impl From<DfaEncoder> for Encoder {
    fn from(e: DfaEncoder) -> Encoder {
        Encoder::Dfa(e)
    }
}

impl From<Dfa> for Encoder {
    fn from(dfa: Dfa) -> Encoder {
        Encoder::Dfa(DfaEncoder::new(dfa))
    }
}

impl From<UhatEncoder> for Encoder {
    fn from(e: UhatEncoder) -> Encoder {
        Encoder::Uhat(e)
    }
}

/// Output weight per encoder token.
pub type OutputTable = BTreeMap<u64, SemiringValue>;

/// Per-token next-symbol weight rows; entry `s` is the weight of symbol
/// `s` and the final entry is the end-of-string weight.
pub type RowTable = BTreeMap<u64, Vec<SemiringValue>>;

/// A symbol to emit next: an alphabet symbol or end of string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutSym {
    Sym(SymbolId),
    Eos,
}

impl OutSym {
    pub fn row_index(&self, alphabet: &Alphabet) -> usize {
        match self {
            OutSym::Sym(s) => *s,
            OutSym::Eos => alphabet.len(),
        }
    }
}

/// A state encoder with a scalar output read at the last position.
#[derive(Clone, Debug)]
pub struct Classifier {
    encoder: Encoder,
    output: OutputTable,
    kind: SemiringKind,
}

impl Classifier {
    pub fn new(encoder: Encoder, output: OutputTable) -> Result<Classifier, ModelError> {
        let kind = output
            .values()
            .next()
            .ok_or(ModelError::EmptyOutput)?
            .kind();
        if output.values().any(|v| v.kind() != kind) {
            return Err(ModelError::MixedSemirings);
        }
        Ok(Classifier {
            encoder,
            output,
            kind,
        })
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    pub fn output(&self) -> &OutputTable {
        &self.output
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.encoder.alphabet()
    }

    /// The weight of `w`: the output at the final encoder state (the
    /// `bos`-position state when `w` is empty).
    pub fn weight(&self, w: &[SymbolId]) -> Result<SemiringValue, ModelError> {
        let states = self.encoder.run(w)?;
        let last = *states.last().expect("run is nonempty");
        self.output
            .get(&last)
            .cloned()
            .ok_or(ModelError::MissingOutput(last))
    }
}

/// The weight a classifier assigns to a string.
pub fn classifier_weight(c: &Classifier, w: &[SymbolId]) -> Result<SemiringValue, ModelError> {
    c.weight(w)
}

/// A state encoder with per-position next-symbol weight rows.
#[derive(Clone, Debug)]
pub struct Autoregressor {
    encoder: Encoder,
    rows: RowTable,
    kind: SemiringKind,
}

impl Autoregressor {
    pub fn new(encoder: Encoder, rows: RowTable) -> Result<Autoregressor, ModelError> {
        let width = encoder.alphabet().len() + 1;
        let first = rows.values().next().ok_or(ModelError::EmptyOutput)?;
        let kind = first
            .first()
            .ok_or(ModelError::RowWrongLength { expected: width })?
            .kind();
        for row in rows.values() {
            if row.len() != width {
                return Err(ModelError::RowWrongLength { expected: width });
            }
            if row.iter().any(|v| v.kind() != kind) {
                return Err(ModelError::MixedSemirings);
            }
        }
        Ok(Autoregressor {
            encoder,
            rows,
            kind,
        })
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    pub fn rows(&self) -> &RowTable {
        &self.rows
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.encoder.alphabet()
    }

    pub fn row(&self, token: u64) -> Result<&Vec<SemiringValue>, ModelError> {
        self.rows.get(&token).ok_or(ModelError::MissingOutput(token))
    }

    /// Weight of emitting `sigma` after having read `u`.
    pub fn symbol_weight(&self, u: &[SymbolId], sigma: OutSym) -> Result<SemiringValue, ModelError> {
        let states = self.encoder.run(u)?;
        let last = *states.last().expect("run is nonempty");
        let row = self.row(last)?;
        Ok(row[sigma.row_index(self.encoder.alphabet())].clone())
    }

    /// Weight of the suffix `v` (then end of string) after the prefix `u`:
    /// the product of the per-step symbol weights and the final
    /// end-of-string weight.
    pub fn suffix_weight(&self, u: &[SymbolId], v: &[SymbolId]) -> Result<SemiringValue, ModelError> {
        let mut current: Vec<SymbolId> = u.to_vec();
        let mut product = SemiringValue::one(self.kind);
        for &s in v {
            let step = self.symbol_weight(&current, OutSym::Sym(s))?;
            product = product.mul(&step).expect("same kind");
            current.push(s);
        }
        let eos = self.symbol_weight(&current, OutSym::Eos)?;
        Ok(product.mul(&eos).expect("same kind"))
    }

    /// Weight of the whole string: the empty-prefix suffix weight.
    pub fn string_weight(&self, w: &[SymbolId]) -> Result<SemiringValue, ModelError> {
        self.suffix_weight(&[], w)
    }
}

pub fn symbol_weight(
    a: &Autoregressor,
    u: &[SymbolId],
    sigma: OutSym,
) -> Result<SemiringValue, ModelError> {
    a.symbol_weight(u, sigma)
}

pub fn suffix_weight(
    a: &Autoregressor,
    u: &[SymbolId],
    v: &[SymbolId],
) -> Result<SemiringValue, ModelError> {
    a.suffix_weight(u, v)
}

pub fn string_weight(a: &Autoregressor, w: &[SymbolId]) -> Result<SemiringValue, ModelError> {
    a.string_weight(w)
}

/// One summand of a step function: a weight gated by membership in a
/// counter-free regular language.
#[derive(Clone, Debug)]
pub enum LanguageTerm {
    Formula(Formula),
    Machine { dfa: Dfa, accepting: Vec<bool> },
}

impl LanguageTerm {
    pub fn member(&self, w: &[SymbolId]) -> Result<bool, ModelError> {
        match self {
            LanguageTerm::Formula(phi) => Ok(models(w, phi)?),
            LanguageTerm::Machine { dfa, accepting } => {
                let run = dfa_run(dfa, w)?;
                Ok(accepting[*run.last().expect("nonempty")])
            }
        }
    }
}

/// A finite sum of weights gated by counter-free languages.
#[derive(Clone, Debug)]
pub struct StepFunction {
    terms: Vec<(SemiringValue, LanguageTerm)>,
    kind: SemiringKind,
}

impl StepFunction {
    /// Validates weights (one semiring) and counter-freeness of every
    /// machine-given language. Formula-given languages are counter-free by
    /// construction (the subformula automaton of a formula is aperiodic on
    /// its reachable part) and are not re-checked here.
    pub fn new(
        terms: Vec<(SemiringValue, LanguageTerm)>,
        kind: SemiringKind,
    ) -> Result<StepFunction, ModelError> {
        for (w, _) in &terms {
            if w.kind() != kind {
                return Err(ModelError::MixedSemirings);
            }
        }
        for (index, (_, term)) in terms.iter().enumerate() {
            if let LanguageTerm::Machine { dfa, accepting } = term {
                let minimized = minimize_dfa(dfa, &|q| accepting[q]);
                if !is_counter_free_dfa(&minimized.dfa).counter_free {
                    return Err(ModelError::NotCounterFree { term: index });
                }
            }
        }
        Ok(StepFunction { terms, kind })
    }

    pub fn terms(&self) -> &[(SemiringValue, LanguageTerm)] {
        &self.terms
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn evaluate(&self, w: &[SymbolId]) -> Result<SemiringValue, ModelError> {
        let mut total = SemiringValue::zero(self.kind);
        for (weight, term) in &self.terms {
            if term.member(w)? {
                total = total.add(weight).expect("same kind");
            }
        }
        Ok(total)
    }
}

/// Rewrites a formula-tuple classifier as a step function with one term
/// per truth assignment: the term's language is the conjunction of
/// formula literals matching the assignment, its weight the classifier
/// output there.
pub fn classifier_to_step_function(c: &Classifier) -> Result<StepFunction, ModelError> {
    let tuple = c.encoder().as_tuple().ok_or(ModelError::NotTupleEncoder)?;
    let m = tuple.arity();
    if m > 16 {
        return Err(ModelError::TupleTooLarge(m));
    }
    let alphabet = tuple.alphabet().clone();
    let mut terms = Vec::new();
    for h in 0u64..(1 << m) {
        let weight = c
            .output()
            .get(&h)
            .cloned()
            .unwrap_or_else(|| SemiringValue::zero(c.kind()));
        let mut cell: Option<Formula> = None;
        for (i, phi) in tuple.formulas().iter().enumerate() {
            let lit = if h & (1 << i) != 0 {
                phi.clone()
            } else {
                phi.not()
            };
            cell = Some(match cell {
                None => lit,
                Some(acc) => acc.and(&lit),
            });
        }
        let cell = cell.unwrap_or_else(|| Formula::tru(&alphabet));
        terms.push((weight, LanguageTerm::Formula(cell)));
    }
    StepFunction::new(terms, c.kind())
}

/// Rewrites a step function with formula-given languages as a classifier
/// over the tuple of those formulas: the output at assignment `h` is the
/// sum of the weights of the terms `h` satisfies.
pub fn step_function_to_classifier(s: &StepFunction) -> Result<Classifier, ModelError> {
    let mut tuple = Vec::new();
    for (_, term) in s.terms() {
        match term {
            LanguageTerm::Formula(phi) => tuple.push(phi.clone()),
            LanguageTerm::Machine { .. } => return Err(ModelError::NotFormulaTerm),
        }
    }
    let m = tuple.len();
    if m > 16 {
        return Err(ModelError::TupleTooLarge(m));
    }
    let alphabet = tuple
        .first()
        .map(|f| f.alphabet().clone())
        .ok_or(ModelError::EmptyOutput)?;
    let encoder = TupleEncoder::with_alphabet(alphabet, tuple)?;
    let mut output = OutputTable::new();
    for h in 0u64..(1 << m) {
        let mut total = SemiringValue::zero(s.kind());
        for (i, (weight, _)) in s.terms().iter().enumerate() {
            if h & (1 << i) != 0 {
                total = total.add(weight).expect("same kind");
            }
        }
        output.insert(h, total);
    }
    Classifier::new(encoder.into(), output)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    EmptyTuple,
    EmptyOutput,
    TupleTooLarge(usize),
    AlphabetMismatch,
    MixedSemirings,
    RowWrongLength { expected: usize },
    MissingOutput(u64),
    NotTupleEncoder,
    NotFormulaTerm,
    NotCounterFree { term: usize },
    /// The encoder has no finite machine form available (for transformer
    /// encoders: extraction did not saturate or was inconsistent).
    EncoderNotFinite(String),
    Eval(EvalError),
    Automaton(AutomatonError),
    Transform(alloc::boxed::Box<TransformError>),
}

impl From<EvalError> for ModelError {
    fn from(e: EvalError) -> Self {
        ModelError::Eval(e)
    }
}

impl From<AutomatonError> for ModelError {
    fn from(e: AutomatonError) -> Self {
        ModelError::Automaton(e)
    }
}

impl From<TransformError> for ModelError {
    fn from(e: TransformError) -> Self {
        ModelError::Transform(alloc::boxed::Box::new(e))
    }
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyTuple => write!(f, "formula tuple must be nonempty (or use with_alphabet)"),
            ModelError::EmptyOutput => write!(f, "output table must be nonempty"),
            ModelError::TupleTooLarge(m) => write!(f, "tuple of {} formulas too large", m),
            ModelError::AlphabetMismatch => write!(f, "alphabet mismatch"),
            ModelError::MixedSemirings => write!(f, "weights mix semirings"),
            ModelError::RowWrongLength { expected } => {
                write!(f, "output row must have {} entries", expected)
            }
            ModelError::MissingOutput(t) => write!(f, "no output attached to state token {}", t),
            ModelError::NotTupleEncoder => write!(f, "operation requires a formula-tuple encoder"),
            ModelError::NotFormulaTerm => write!(f, "operation requires formula-given languages"),
            ModelError::NotCounterFree { term } => {
                write!(f, "step-function term {} is not counter-free", term)
            }
            ModelError::EncoderNotFinite(why) => write!(f, "no finite machine form: {}", why),
            ModelError::Eval(e) => write!(f, "{}", e),
            ModelError::Automaton(e) => write!(f, "{}", e),
            ModelError::Transform(e) => write!(f, "{}", e),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModelError {}
