//! Semiring-weighted language models over past temporal logic, counter-free
//! automata, and unique-hard-attention transformers.
//!
//! The crate is organized around three interchangeable kinds of *state
//! encoder* (formula tuples, deterministic automata, and transformer
//! traces), two ways of attaching outputs to them (classifiers, which read
//! a single weight at the last position, and autoregressors, which emit a
//! next-symbol weight distribution at every position), and the exact
//! transformations connecting them.
//!
//! Everything is computed with exact arithmetic: Boolean or arbitrary
//! precision rational. No operation introduces floating point.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature only forwards to the numeric dependencies and enables
//! `std::error::Error` impls.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod automata;
pub mod fixtures;
pub mod logic;
pub mod models;
pub mod oracle;
pub mod semiring;
pub mod transforms;
pub mod uhat;

pub use logic::{Alphabet, Formula, FragmentSpec, SymbolId};
pub use semiring::{ExtRat, SemiringError, SemiringKind, SemiringValue};
