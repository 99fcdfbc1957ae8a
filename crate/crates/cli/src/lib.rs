//! Library surface of the command-line crate: the file formats, reusable
//! by tests and other tooling.

pub mod formats;
