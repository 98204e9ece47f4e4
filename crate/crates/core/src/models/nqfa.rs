use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{index_entries, Alphabet, ModelError, TapeSymbol, Violation};
use crate::linalg::{
    projector_defects, unitarity_defect, ComplexMatrix, ProjectorFamily, TOL_VALID,
};

/// Which block of the halting partition a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halting {
    NonHalting,
    Accepting,
    Rejecting,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartitionDescription {
    pub non_halting: Vec<String>,
    pub accepting: Vec<String>,
    pub rejecting: Vec<String>,
}

/// Raw, name-keyed description of a Nayak QFA.
#[derive(Debug, Clone, PartialEq)]
pub struct NqfaDescription {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub partition: PartitionDescription,
    /// One unitary per tape symbol, markers included.
    pub unitaries: Vec<(String, ComplexMatrix)>,
    /// One projective measurement per tape symbol, markers included.
    pub measurements: Vec<(String, Vec<ComplexMatrix>)>,
}

/// Raw description of a Kondacs–Watrous QFA (no intermediate measurements).
#[derive(Debug, Clone, PartialEq)]
pub struct KwqfaDescription {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub partition: PartitionDescription,
    pub unitaries: Vec<(String, ComplexMatrix)>,
}

/// Nayak QFA. Each tape symbol `γ` applies `U_γ`, then the projective
/// measurement `M_γ`, then the halting measurement given by the partition
/// of basis states into non-halting, accepting and rejecting blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Nqfa {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    halting: Vec<Halting>,
    unitaries: Vec<ComplexMatrix>,
    measurements: Vec<ProjectorFamily>,
}

/// Kondacs–Watrous QFA: an [`Nqfa`] whose every `M_γ` is `{I}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kwqfa {
    inner: Nqfa,
}

struct Skeleton {
    alphabet: Option<Alphabet>,
    initial: Option<usize>,
    halting: Vec<Halting>,
}

/// Validates the alphabet, state names, initial state and partition.
fn check_skeleton(
    alphabet: &[String],
    states: &[String],
    initial: &str,
    partition: &PartitionDescription,
    violations: &mut Vec<Violation>,
) -> Skeleton {
    let alphabet = match Alphabet::new(alphabet.iter().cloned()) {
        Ok(a) => Some(a),
        Err(v) => {
            violations.extend(v);
            None
        }
    };
    if states.is_empty() {
        violations.push(Violation::NoStates);
    }
    for (i, s) in states.iter().enumerate() {
        if states[..i].contains(s) {
            violations.push(Violation::DuplicateState { name: s.clone() });
        }
    }
    let mut assigned: Vec<Option<Halting>> = alloc::vec![None; states.len()];
    let blocks = [
        (
            "partition.non_halting",
            &partition.non_halting,
            Halting::NonHalting,
        ),
        (
            "partition.accepting",
            &partition.accepting,
            Halting::Accepting,
        ),
        (
            "partition.rejecting",
            &partition.rejecting,
            Halting::Rejecting,
        ),
    ];
    for (field, names, kind) in blocks {
        for name in names {
            match states.iter().position(|s| s == name) {
                None => violations.push(Violation::UnknownState {
                    field,
                    name: name.clone(),
                }),
                Some(i) if assigned[i].is_some() => {
                    violations.push(Violation::RepeatedInPartition { name: name.clone() })
                }
                Some(i) => assigned[i] = Some(kind),
            }
        }
    }
    for (i, slot) in assigned.iter().enumerate() {
        if slot.is_none() && !states[..i].contains(&states[i]) {
            violations.push(Violation::UnpartitionedState {
                name: states[i].clone(),
            });
        }
    }
    let initial_index = states.iter().position(|s| s == initial);
    match initial_index {
        None => violations.push(Violation::UnknownState {
            field: "initial",
            name: initial.into(),
        }),
        Some(i) => {
            if matches!(assigned[i], Some(Halting::Accepting | Halting::Rejecting)) {
                violations.push(Violation::InitialHalting {
                    name: initial.into(),
                });
            }
        }
    }
    Skeleton {
        alphabet,
        initial: initial_index,
        halting: assigned
            .into_iter()
            .map(|h| h.unwrap_or(Halting::NonHalting))
            .collect(),
    }
}

/// Validates per-tape-symbol unitaries, returning them in tape order.
pub(super) fn check_unitaries(
    alphabet: &Alphabet,
    n: usize,
    entries: &[(String, ComplexMatrix)],
    violations: &mut Vec<Violation>,
) -> Vec<ComplexMatrix> {
    let names: Vec<&str> = alphabet
        .tape_symbols()
        .map(|t| alphabet.tape_name(t))
        .collect();
    let slots = index_entries("unitaries", &names, entries, violations);
    let mut out = Vec::with_capacity(names.len());
    for (name, slot) in names.iter().zip(slots) {
        let Some(u) = slot else { continue };
        if u.rows() != n || u.cols() != n {
            violations.push(Violation::WrongDimension {
                field: format!("unitaries.{name}"),
                expected: n,
                found: if u.rows() != n { u.rows() } else { u.cols() },
            });
            continue;
        }
        let defect = unitarity_defect(u).unwrap_or(f64::INFINITY);
        if defect > TOL_VALID {
            violations.push(Violation::NotUnitary {
                symbol: (*name).into(),
                defect,
            });
        }
        out.push(u.clone());
    }
    out
}

impl Nqfa {
    pub fn new(desc: NqfaDescription) -> Result<Self, ModelError> {
        let mut violations = Vec::new();
        let skeleton = check_skeleton(
            &desc.alphabet,
            &desc.states,
            &desc.initial,
            &desc.partition,
            &mut violations,
        );
        let n = desc.states.len();
        let Some(alphabet) = skeleton.alphabet else {
            return Err(ModelError { violations });
        };
        let unitaries = check_unitaries(&alphabet, n, &desc.unitaries, &mut violations);

        let names: Vec<&str> = alphabet
            .tape_symbols()
            .map(|t| alphabet.tape_name(t))
            .collect();
        let slots = index_entries("measurements", &names, &desc.measurements, &mut violations);
        let mut measurements = Vec::with_capacity(names.len());
        for (name, slot) in names.iter().zip(slots) {
            let Some(projectors) = slot else { continue };
            if let Some(p) = projectors.iter().find(|p| p.rows() != n) {
                violations.push(Violation::WrongDimension {
                    field: format!("measurements.{name}"),
                    expected: n,
                    found: p.rows(),
                });
                continue;
            }
            match projector_defects(projectors, TOL_VALID) {
                Err(error) => violations.push(Violation::MeasurementShape {
                    symbol: (*name).into(),
                    error,
                }),
                Ok(defects) if !defects.is_empty() => {
                    violations.extend(defects.into_iter().map(|defect| Violation::Measurement {
                        symbol: (*name).into(),
                        defect,
                    }))
                }
                Ok(_) => measurements.push(
                    ProjectorFamily::new(projectors.clone(), None, TOL_VALID)
                        .expect("family already validated"),
                ),
            }
        }
        ModelError::check(violations)?;
        Ok(Self {
            alphabet,
            states: desc.states,
            initial: skeleton.initial.expect("checked"),
            halting: skeleton.halting,
            unitaries,
            measurements,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn halting(&self) -> &[Halting] {
        &self.halting
    }

    /// Indicator of the states in one partition block.
    pub fn block_mask(&self, block: Halting) -> Vec<bool> {
        self.halting.iter().map(|&h| h == block).collect()
    }

    pub fn unitary(&self, symbol: TapeSymbol) -> &ComplexMatrix {
        &self.unitaries[symbol.index(self.alphabet.len())]
    }

    pub fn measurement(&self, symbol: TapeSymbol) -> &ProjectorFamily {
        &self.measurements[symbol.index(self.alphabet.len())]
    }

    pub fn to_description(&self) -> NqfaDescription {
        let k = self.to_kwqfa_description();
        NqfaDescription {
            alphabet: k.alphabet,
            states: k.states,
            initial: k.initial,
            partition: k.partition,
            unitaries: k.unitaries,
            measurements: self
                .alphabet
                .tape_symbols()
                .map(|t| {
                    (
                        self.alphabet.tape_name(t).into(),
                        self.measurement(t).projectors().to_vec(),
                    )
                })
                .collect(),
        }
    }

    fn to_kwqfa_description(&self) -> KwqfaDescription {
        let block = |h: Halting| -> Vec<String> {
            self.states
                .iter()
                .zip(&self.halting)
                .filter(|(_, &b)| b == h)
                .map(|(s, _)| s.clone())
                .collect()
        };
        KwqfaDescription {
            alphabet: self.alphabet.symbols().to_vec(),
            states: self.states.clone(),
            initial: self.states[self.initial].clone(),
            partition: PartitionDescription {
                non_halting: block(Halting::NonHalting),
                accepting: block(Halting::Accepting),
                rejecting: block(Halting::Rejecting),
            },
            unitaries: self
                .alphabet
                .tape_symbols()
                .map(|t| (self.alphabet.tape_name(t).into(), self.unitary(t).clone()))
                .collect(),
        }
    }
}

impl KwqfaDescription {
    /// The same machine with `{I}` as every intermediate measurement.
    pub fn with_identity_measurements(self) -> NqfaDescription {
        let n = self.states.len().max(1);
        let measurements = self
            .unitaries
            .iter()
            .map(|(name, _)| (name.clone(), alloc::vec![ComplexMatrix::identity(n)]))
            .collect();
        NqfaDescription {
            alphabet: self.alphabet,
            states: self.states,
            initial: self.initial,
            partition: self.partition,
            unitaries: self.unitaries,
            measurements,
        }
    }
}

impl Kwqfa {
    pub fn new(desc: KwqfaDescription) -> Result<Self, ModelError> {
        Nqfa::new(desc.with_identity_measurements()).map(|inner| Self { inner })
    }

    /// Accepts an NQFA whose intermediate measurements are all `{I}`.
    pub fn from_nqfa(nqfa: Nqfa) -> Result<Self, ModelError> {
        let violations = nqfa
            .alphabet
            .tape_symbols()
            .filter(|&t| !nqfa.measurement(t).is_identity(TOL_VALID))
            .map(|t| Violation::NotIdentityMeasurement {
                symbol: nqfa.alphabet.tape_name(t).into(),
            })
            .collect();
        ModelError::check(violations)?;
        Ok(Self { inner: nqfa })
    }

    pub fn as_nqfa(&self) -> &Nqfa {
        &self.inner
    }

    pub fn into_nqfa(self) -> Nqfa {
        self.inner
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    pub fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    pub fn to_description(&self) -> KwqfaDescription {
        self.inner.to_kwqfa_description()
    }
}
