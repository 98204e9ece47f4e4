//! Document format and command-line front end for `qfa-core`.

pub mod cli;
pub mod document;

pub use document::{parse, serialize, Document, DocumentError, Metadata};
