use alloc::string::String;
use alloc::vec::Vec;

use super::nqfa::check_unitaries;
use super::{Alphabet, ModelError, TapeSymbol, Violation};
use crate::linalg::{projector_defects, ComplexMatrix, ProjectorFamily, TOL_VALID};

/// Raw description of the control automaton over observable outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlDescription {
    /// Outcome alphabet `C`; must equal the observable's labels.
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub start: String,
    pub accepting: Vec<String>,
    /// `(state, label, next state)` triples; the table must be total.
    pub transitions: Vec<(String, String, String)>,
}

/// Raw description of a QFA with control language.
#[derive(Debug, Clone, PartialEq)]
pub struct QfcDescription {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub unitaries: Vec<(String, ComplexMatrix)>,
    /// Labeled projectors of the observable measured after every unitary.
    pub observable: Vec<(String, ComplexMatrix)>,
    pub control: ControlDescription,
}

/// Complete DFA over the observable's outcome labels. Label indices follow
/// the observable's projector order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlDfa {
    states: Vec<String>,
    labels: Vec<String>,
    start: usize,
    accepting: Vec<bool>,
    table: Vec<usize>,
}

impl ControlDfa {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    /// `δ(state, label)`
    pub fn next(&self, state: usize, label: usize) -> usize {
        self.table[state * self.labels.len() + label]
    }

    /// Runs the DFA on a label sequence from the start state.
    pub fn accepts(&self, labels: &[usize]) -> bool {
        let end = labels.iter().fold(self.start, |d, &c| self.next(d, c));
        self.accepting[end]
    }
}

/// QFA with control language: per-symbol unitaries, one labeled observable
/// measured after each unitary, and a regular control language (given as a
/// DFA) that the sequence of outcomes must belong to for acceptance.
#[derive(Debug, Clone, PartialEq)]
pub struct Qfc {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    unitaries: Vec<ComplexMatrix>,
    observable: ProjectorFamily,
    control: ControlDfa,
}

fn find(names: &[String], name: &str) -> Option<usize> {
    names.iter().position(|s| s == name)
}

fn check_control(
    desc: &ControlDescription,
    labels: &[String],
    violations: &mut Vec<Violation>,
) -> Option<ControlDfa> {
    let before = violations.len();
    let missing_in_control: Vec<String> = labels
        .iter()
        .filter(|l| !desc.alphabet.contains(l))
        .cloned()
        .collect();
    let missing_in_observable: Vec<String> = desc
        .alphabet
        .iter()
        .filter(|l| !labels.contains(l))
        .cloned()
        .collect();
    if !missing_in_control.is_empty() || !missing_in_observable.is_empty() {
        violations.push(Violation::ControlAlphabetMismatch {
            missing_in_control,
            missing_in_observable,
        });
    }
    if desc.states.is_empty() {
        violations.push(Violation::NoControlStates);
    }
    for (i, s) in desc.states.iter().enumerate() {
        if desc.states[..i].contains(s) {
            violations.push(Violation::DuplicateControlState { name: s.clone() });
        }
    }
    let start = find(&desc.states, &desc.start);
    if start.is_none() {
        violations.push(Violation::UnknownControlState {
            field: "control.start".into(),
            name: desc.start.clone(),
        });
    }
    let mut accepting = alloc::vec![false; desc.states.len()];
    for name in &desc.accepting {
        match find(&desc.states, name) {
            Some(i) => accepting[i] = true,
            None => violations.push(Violation::UnknownControlState {
                field: "control.accepting".into(),
                name: name.clone(),
            }),
        }
    }
    let k = labels.len();
    let mut table: Vec<Option<usize>> = alloc::vec![None; desc.states.len() * k];
    for (from, label, to) in &desc.transitions {
        let src = find(&desc.states, from);
        let dst = find(&desc.states, to);
        if src.is_none() {
            violations.push(Violation::UnknownControlState {
                field: alloc::format!("control.transitions.{from}"),
                name: from.clone(),
            });
        }
        if dst.is_none() {
            violations.push(Violation::UnknownControlState {
                field: alloc::format!("control.transitions.{from}.{label}"),
                name: to.clone(),
            });
        }
        let Some(c) = find(labels, label) else {
            if !desc.alphabet.contains(label) {
                violations.push(Violation::UnknownControlLabel {
                    state: from.clone(),
                    label: label.clone(),
                });
            }
            continue;
        };
        if let (Some(d), Some(d2)) = (src, dst) {
            let slot = &mut table[d * k + c];
            if slot.is_some() {
                violations.push(Violation::DuplicateTransition {
                    state: from.clone(),
                    label: label.clone(),
                });
            }
            *slot = Some(d2);
        }
    }
    for (d, state) in desc.states.iter().enumerate() {
        if desc.states[..d].contains(state) {
            continue;
        }
        for (c, label) in labels.iter().enumerate() {
            if table[d * k + c].is_none() {
                violations.push(Violation::MissingTransition {
                    state: state.clone(),
                    label: label.clone(),
                });
            }
        }
    }
    if violations.len() > before {
        return None;
    }
    Some(ControlDfa {
        states: desc.states.clone(),
        labels: labels.to_vec(),
        start: start?,
        accepting,
        table: table.into_iter().map(|s| s.expect("total")).collect(),
    })
}

impl Qfc {
    pub fn new(desc: QfcDescription) -> Result<Self, ModelError> {
        let mut violations = Vec::new();
        let alphabet = match Alphabet::new(desc.alphabet.iter().cloned()) {
            Ok(a) => Some(a),
            Err(v) => {
                violations.extend(v);
                None
            }
        };
        let n = desc.states.len();
        if n == 0 {
            violations.push(Violation::NoStates);
        }
        for (i, s) in desc.states.iter().enumerate() {
            if desc.states[..i].contains(s) {
                violations.push(Violation::DuplicateState { name: s.clone() });
            }
        }
        let initial = find(&desc.states, &desc.initial);
        if initial.is_none() {
            violations.push(Violation::UnknownState {
                field: "initial",
                name: desc.initial.clone(),
            });
        }
        let unitaries = match &alphabet {
            Some(a) if n > 0 => check_unitaries(a, n, &desc.unitaries, &mut violations),
            _ => Vec::new(),
        };

        let labels: Vec<String> = desc.observable.iter().map(|(l, _)| l.clone()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                violations.push(Violation::DuplicateLabel { label: l.clone() });
            }
        }
        let projectors: Vec<ComplexMatrix> =
            desc.observable.iter().map(|(_, p)| p.clone()).collect();
        let mut observable = None;
        if projectors.is_empty() {
            violations.push(Violation::EmptyObservable);
        } else if let Some(p) = projectors.iter().find(|p| p.rows() != n) {
            violations.push(Violation::WrongDimension {
                field: "observable".into(),
                expected: n,
                found: p.rows(),
            });
        } else {
            match projector_defects(&projectors, TOL_VALID) {
                Err(error) => violations.push(Violation::ObservableShape { error }),
                Ok(defects) if !defects.is_empty() => violations.extend(
                    defects
                        .into_iter()
                        .map(|defect| Violation::Observable { defect }),
                ),
                Ok(_) => {
                    observable =
                        ProjectorFamily::new(projectors, Some(labels.clone()), TOL_VALID).ok()
                }
            }
        }
        let control = check_control(&desc.control, &labels, &mut violations);
        ModelError::check(violations)?;
        Ok(Self {
            alphabet: alphabet.expect("checked"),
            states: desc.states,
            initial: initial.expect("checked"),
            unitaries,
            observable: observable.expect("checked"),
            control: control.expect("checked"),
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

    pub fn unitary(&self, symbol: TapeSymbol) -> &ComplexMatrix {
        &self.unitaries[symbol.index(self.alphabet.len())]
    }

    pub fn observable(&self) -> &ProjectorFamily {
        &self.observable
    }

    pub fn control(&self) -> &ControlDfa {
        &self.control
    }

    pub fn to_description(&self) -> QfcDescription {
        let labels = self.control.labels();
        let d = &self.control;
        QfcDescription {
            alphabet: self.alphabet.symbols().to_vec(),
            states: self.states.clone(),
            initial: self.states[self.initial].clone(),
            unitaries: self
                .alphabet
                .tape_symbols()
                .map(|t| (self.alphabet.tape_name(t).into(), self.unitary(t).clone()))
                .collect(),
            observable: labels
                .iter()
                .cloned()
                .zip(self.observable.projectors().iter().cloned())
                .collect(),
            control: ControlDescription {
                alphabet: labels.to_vec(),
                states: d.states.clone(),
                start: d.states[d.start].clone(),
                accepting: (0..d.state_count())
                    .filter(|&i| d.accepting[i])
                    .map(|i| d.states[i].clone())
                    .collect(),
                transitions: (0..d.state_count())
                    .flat_map(|s| {
                        labels.iter().enumerate().map(move |(c, l)| {
                            (
                                d.states[s].clone(),
                                l.clone(),
                                d.states[d.next(s, c)].clone(),
                            )
                        })
                    })
                    .collect(),
            },
        }
    }
}
