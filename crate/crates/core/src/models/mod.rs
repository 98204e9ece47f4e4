//! Automaton models and their validating constructors.
//!
//! Every constructor takes a raw, name-based description and either
//! returns a model satisfying all of its invariants or the complete list
//! of violations found; it never stops at the first problem.

mod alphabet;
mod gpfa;
mod nqfa;
mod qfc;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::linalg::{LinalgError, ProjectorDefect};

pub use alphabet::{Alphabet, TapeSymbol, Word, LEFT_MARKER, RIGHT_MARKER};
pub use gpfa::{Gpfa, GpfaDescription, Pfa};
pub use nqfa::{Halting, Kwqfa, KwqfaDescription, Nqfa, NqfaDescription, PartitionDescription};
pub use qfc::{ControlDescription, ControlDfa, Qfc, QfcDescription};

/// One violated model invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyAlphabet,
    InvalidSymbolName {
        name: String,
    },
    ReservedSymbol {
        name: String,
    },
    DuplicateSymbol {
        name: String,
    },
    NoStates,
    DuplicateState {
        name: String,
    },
    UnknownState {
        field: &'static str,
        name: String,
    },
    UnpartitionedState {
        name: String,
    },
    RepeatedInPartition {
        name: String,
    },
    InitialHalting {
        name: String,
    },
    MissingEntry {
        field: &'static str,
        symbol: String,
    },
    UnknownSymbol {
        field: &'static str,
        symbol: String,
    },
    DuplicateEntry {
        field: &'static str,
        symbol: String,
    },
    WrongDimension {
        field: String,
        expected: usize,
        found: usize,
    },
    NotUnitary {
        symbol: String,
        defect: f64,
    },
    Measurement {
        symbol: String,
        defect: ProjectorDefect,
    },
    MeasurementShape {
        symbol: String,
        error: LinalgError,
    },
    NotIdentityMeasurement {
        symbol: String,
    },
    EmptyObservable,
    DuplicateLabel {
        label: String,
    },
    Observable {
        defect: ProjectorDefect,
    },
    ObservableShape {
        error: LinalgError,
    },
    ControlAlphabetMismatch {
        missing_in_control: Vec<String>,
        missing_in_observable: Vec<String>,
    },
    NoControlStates,
    DuplicateControlState {
        name: String,
    },
    UnknownControlState {
        field: String,
        name: String,
    },
    UnknownControlLabel {
        state: String,
        label: String,
    },
    DuplicateTransition {
        state: String,
        label: String,
    },
    MissingTransition {
        state: String,
        label: String,
    },
    EmptyVector {
        field: &'static str,
    },
    NonFinite {
        field: String,
    },
    NegativeEntry {
        field: String,
    },
    NotDistribution {
        sum: f64,
    },
    RowSum {
        symbol: String,
        row: usize,
        sum: f64,
    },
    NotIndicator {
        index: usize,
        value: f64,
    },
}

impl Violation {
    /// Location of the offending item in the document schema.
    pub fn path(&self) -> String {
        match self {
            Self::EmptyAlphabet
            | Self::InvalidSymbolName { .. }
            | Self::ReservedSymbol { .. }
            | Self::DuplicateSymbol { .. } => "alphabet".into(),
            Self::NoStates | Self::DuplicateState { .. } => "states".into(),
            Self::UnknownState { field, .. } => (*field).into(),
            Self::UnpartitionedState { .. } | Self::RepeatedInPartition { .. } => {
                "partition".into()
            }
            Self::InitialHalting { .. } => "initial".into(),
            Self::MissingEntry { field, symbol }
            | Self::UnknownSymbol { field, symbol }
            | Self::DuplicateEntry { field, symbol } => format!("{field}.{symbol}"),
            Self::WrongDimension { field, .. } => field.clone(),
            Self::NotUnitary { symbol, .. } => format!("unitaries.{symbol}"),
            Self::Measurement { symbol, .. }
            | Self::MeasurementShape { symbol, .. }
            | Self::NotIdentityMeasurement { symbol } => format!("measurements.{symbol}"),
            Self::EmptyObservable
            | Self::DuplicateLabel { .. }
            | Self::Observable { .. }
            | Self::ObservableShape { .. } => "observable".into(),
            Self::ControlAlphabetMismatch { .. } => "control.alphabet".into(),
            Self::NoControlStates | Self::DuplicateControlState { .. } => "control.states".into(),
            Self::UnknownControlState { field, .. } => field.clone(),
            Self::UnknownControlLabel { state, label }
            | Self::DuplicateTransition { state, label }
            | Self::MissingTransition { state, label } => {
                format!("control.transitions.{state}.{label}")
            }
            Self::EmptyVector { field } => (*field).into(),
            Self::NonFinite { field } | Self::NegativeEntry { field } => field.clone(),
            Self::NotDistribution { .. } => "initial".into(),
            Self::RowSum { symbol, row, .. } => format!("matrices.{symbol}[{row}]"),
            Self::NotIndicator { index, .. } => format!("final[{index}]"),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyAlphabet => write!(f, "alphabet is empty"),
            Self::InvalidSymbolName { name } => write!(
                f,
                "invalid symbol name {name:?} (must be non-empty, without commas or whitespace)"
            ),
            Self::ReservedSymbol { name } => write!(f, "symbol {name:?} is a reserved end-marker"),
            Self::DuplicateSymbol { name } => write!(f, "symbol {name:?} listed twice"),
            Self::NoStates => write!(f, "state set is empty"),
            Self::DuplicateState { name } => write!(f, "state {name:?} listed twice"),
            Self::UnknownState { field, name } => write!(f, "{field}: unknown state {name:?}"),
            Self::UnpartitionedState { name } => {
                write!(f, "state {name:?} is missing from the halting partition")
            }
            Self::RepeatedInPartition { name } => {
                write!(f, "state {name:?} appears more than once in the halting partition")
            }
            Self::InitialHalting { name } => {
                write!(f, "initial state must be non-halting ({name:?} is halting)")
            }
            Self::MissingEntry { field, symbol } => write!(f, "{field}: no entry for {symbol:?}"),
            Self::UnknownSymbol { field, symbol } => {
                write!(f, "{field}: {symbol:?} is not a tape symbol")
            }
            Self::DuplicateEntry { field, symbol } => {
                write!(f, "{field}: {symbol:?} given more than once")
            }
            Self::WrongDimension {
                field,
                expected,
                found,
            } => write!(f, "{field}: expected dimension {expected}, found {found}"),
            Self::NotUnitary { symbol, defect } => {
                write!(f, "U_{symbol} not unitary (‖U†U − I‖ = {defect:e})")
            }
            Self::Measurement { symbol, defect } => write!(f, "M_{symbol} {defect}"),
            Self::MeasurementShape { symbol, error } => write!(f, "M_{symbol}: {error}"),
            Self::NotIdentityMeasurement { symbol } => {
                write!(f, "M_{symbol} is not the identity measurement")
            }
            Self::EmptyObservable => write!(f, "observable has no projectors"),
            Self::DuplicateLabel { label } => write!(f, "observable label {label:?} repeated"),
            Self::Observable { defect } => write!(f, "observable {defect}"),
            Self::ObservableShape { error } => write!(f, "observable: {error}"),
            Self::ControlAlphabetMismatch {
                missing_in_control,
                missing_in_observable,
            } => write!(
                f,
                "control alphabet differs from observable labels \
                 (not in control: {missing_in_control:?}, not in observable: {missing_in_observable:?})"
            ),
            Self::NoControlStates => write!(f, "control automaton has no states"),
            Self::DuplicateControlState { name } => {
                write!(f, "control state {name:?} listed twice")
            }
            Self::UnknownControlState { field, name } => {
                write!(f, "{field}: unknown control state {name:?}")
            }
            Self::UnknownControlLabel { state, label } => {
                write!(f, "transition ({state}, {label}) uses an unknown label")
            }
            Self::DuplicateTransition { state, label } => {
                write!(f, "transition ({state}, {label}) defined twice")
            }
            Self::MissingTransition { state, label } => {
                write!(f, "missing transition for ({state}, {label})")
            }
            Self::EmptyVector { field } => write!(f, "{field} is empty"),
            Self::NonFinite { field } => write!(f, "{field}: non-finite entry"),
            Self::NegativeEntry { field } => write!(f, "{field}: negative probability"),
            Self::NotDistribution { sum } => {
                write!(f, "initial vector sums to {sum}, not 1")
            }
            Self::RowSum { symbol, row, sum } => {
                write!(f, "row {row} of A_{symbol} sums to {sum}, not 1")
            }
            Self::NotIndicator { index, value } => {
                write!(f, "final vector entry {index} is {value}, expected 0 or 1")
            }
        }
    }
}

/// Non-empty list of violations returned by a failed constructor.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelError {
    pub violations: Vec<Violation>,
}

impl ModelError {
    pub(crate) fn check(violations: Vec<Violation>) -> Result<(), Self> {
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Self { violations })
        }
    }
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for ModelError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("symbol index {index} outside alphabet of size {size}")]
    SymbolOutOfRange { index: usize, size: usize },
    #[error("alphabets differ")]
    AlphabetMismatch,
}

/// Cutpoint `λ ∈ [0, 1)`; a word is a member iff its value is strictly
/// greater than `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutpointSpec {
    lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("cutpoint {0} outside [0, 1)")]
pub struct CutpointError(pub f64);

impl CutpointSpec {
    pub fn new(lambda: f64) -> Result<Self, CutpointError> {
        if (0.0..1.0).contains(&lambda) {
            Ok(Self { lambda })
        } else {
            Err(CutpointError(lambda))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Kind tag shared by the document format and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Nqfa,
    Kwqfa,
    Qfc,
    Gpfa,
    Pfa,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [Self::Nqfa, Self::Kwqfa, Self::Qfc, Self::Gpfa, Self::Pfa];

    pub fn name(self) -> &'static str {
        match self {
            Self::Nqfa => "nqfa",
            Self::Kwqfa => "kwqfa",
            Self::Qfc => "qfc",
            Self::Gpfa => "gpfa",
            Self::Pfa => "pfa",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Any of the supported models.
#[derive(Debug, Clone, PartialEq)]
pub enum Automaton {
    Nqfa(Nqfa),
    Kwqfa(Kwqfa),
    Qfc(Qfc),
    Gpfa(Gpfa),
    Pfa(Pfa),
}

impl Automaton {
    pub fn kind(&self) -> ModelKind {
        match self {
            Self::Nqfa(_) => ModelKind::Nqfa,
            Self::Kwqfa(_) => ModelKind::Kwqfa,
            Self::Qfc(_) => ModelKind::Qfc,
            Self::Gpfa(_) => ModelKind::Gpfa,
            Self::Pfa(_) => ModelKind::Pfa,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Self::Nqfa(m) => m.alphabet(),
            Self::Kwqfa(m) => m.alphabet(),
            Self::Qfc(m) => m.alphabet(),
            Self::Gpfa(m) => m.alphabet(),
            Self::Pfa(m) => m.alphabet(),
        }
    }

    /// Number of states (quantum basis states for the quantum models).
    pub fn state_count(&self) -> usize {
        match self {
            Self::Nqfa(m) => m.state_count(),
            Self::Kwqfa(m) => m.state_count(),
            Self::Qfc(m) => m.state_count(),
            Self::Gpfa(m) => m.state_count(),
            Self::Pfa(m) => m.state_count(),
        }
    }
}

impl From<Nqfa> for Automaton {
    fn from(m: Nqfa) -> Self {
        Self::Nqfa(m)
    }
}

impl From<Kwqfa> for Automaton {
    fn from(m: Kwqfa) -> Self {
        Self::Kwqfa(m)
    }
}

impl From<Qfc> for Automaton {
    fn from(m: Qfc) -> Self {
        Self::Qfc(m)
    }
}

impl From<Gpfa> for Automaton {
    fn from(m: Gpfa) -> Self {
        Self::Gpfa(m)
    }
}

impl From<Pfa> for Automaton {
    fn from(m: Pfa) -> Self {
        Self::Pfa(m)
    }
}

/// Checks that named entries cover a set of keys exactly once, returning
/// the entries in key order (`None` where missing).
pub(crate) fn index_entries<'a, T>(
    field: &'static str,
    keys: &[&str],
    entries: &'a [(String, T)],
    violations: &mut Vec<Violation>,
) -> Vec<Option<&'a T>> {
    let mut slots: Vec<Option<&T>> = alloc::vec![None; keys.len()];
    for (name, value) in entries {
        match keys.iter().position(|k| k == name) {
            Some(i) if slots[i].is_some() => violations.push(Violation::DuplicateEntry {
                field,
                symbol: name.clone(),
            }),
            Some(i) => slots[i] = Some(value),
            None => violations.push(Violation::UnknownSymbol {
                field,
                symbol: name.clone(),
            }),
        }
    }
    for (i, slot) in slots.iter().enumerate() {
        if slot.is_none() {
            violations.push(Violation::MissingEntry {
                field,
                symbol: keys[i].into(),
            });
        }
    }
    slots
}
