//! Models, reference simulators and exact converters for one-way quantum
//! finite automata (Nayak QFA, Kondacs–Watrous QFA, QFA with control
//! language) and their classical counterparts (generalized and ordinary
//! probabilistic finite automata).
//!
//! The crate is `no_std` and only needs `alloc`. Serialization and the
//! command-line front end live in the companion `qfa` crate.
//!
//! Every quantum model reads `¢ w $`: both end-markers are tape symbols
//! with their own unitaries (and measurements). Generalized automata are
//! marker-free, so a converted machine is directly in the
//! `v · A_{w_1} ··· A_{w_m} · f` normal form.
#![no_std]

extern crate alloc;

pub mod analysis;
pub mod convert;
pub mod fixtures;
pub mod linalg;
pub mod models;
pub mod sim;

pub use linalg::{ComplexMatrix, HermitianBasis, ProjectorFamily, RealMatrix};
pub use models::{
    Alphabet, Automaton, CutpointSpec, Gpfa, Kwqfa, ModelError, Nqfa, Pfa, Qfc, TapeSymbol,
    Violation, Word,
};
pub use num_complex::Complex64;
pub use sim::{RunResult, StepRecord};
