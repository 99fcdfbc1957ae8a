//! Past temporal logic: abstract syntax, concrete syntax, positional
//! semantics, operator fragments, and formula-tuple state encoders.

mod alphabet;
mod ast;
mod eval;
mod parse;
mod print;

pub use alphabet::{Alphabet, AlphabetError, SymbolId};
pub use ast::{Formula, FormulaError, FragmentSpec, Op};
pub use eval::{encode_with_tuple, language_upto, models, satisfies, EvalError, NodeTable, Row};
pub use parse::{parse_formula, ParseError};
