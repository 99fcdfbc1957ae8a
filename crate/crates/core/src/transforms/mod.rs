//! The constructive transformations: single-symbol right extension
//! (`next`), prefix-language formulas, formula-to-automaton compilation,
//! the classifier/autoregressor conversions in the Boolean semiring, the
//! bigram rewriting that eliminates one level of `Y`, and the
//! stutter-invariance test.

mod bigram;
mod closure;
mod convert;
mod next;
mod prefix;
mod stutter;

pub use bigram::{bigram_map, noy_transform, BigramError};
pub use closure::{build_closure_dfa, subformula_dfa, ClosureDfa, SubformulaDfa, DEFAULT_STATE_BUDGET};
pub use convert::{autoregressor_to_classifier, classifier_to_autoregressor};
pub use next::next_sigma;
pub use prefix::prefix_transform;
pub use stutter::{stutter_invariant, witness_separates, StutterReport};

use alloc::string::String;
use core::fmt;

use crate::models::ModelError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformError {
    /// The subformula automaton exceeded the configured state budget.
    StateBudgetExceeded { budget: usize },
    /// The classifier-to-autoregressor construction requires a nonempty
    /// language.
    EmptyLanguage,
    /// The conversion requires a formula-tuple encoder.
    NotTupleEncoder,
    /// The bigram rewriting is defined for the `TL[H,Y]` fragment with
    /// `Y`-depth at most one.
    FragmentTooLarge(String),
    Model(ModelError),
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::StateBudgetExceeded { budget } => {
                write!(f, "subformula automaton exceeded state budget {}", budget)
            }
            TransformError::EmptyLanguage => write!(
                f,
                "the construction requires a nonempty language: an autoregressor must assign every prefix a continuation"
            ),
            TransformError::NotTupleEncoder => {
                write!(f, "conversion requires a formula-tuple state encoder")
            }
            TransformError::FragmentTooLarge(msg) => write!(f, "{}", msg),
            TransformError::Model(e) => write!(f, "{}", e),
        }
    }
}

impl From<ModelError> for TransformError {
    fn from(e: ModelError) -> Self {
        TransformError::Model(e)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TransformError {}
