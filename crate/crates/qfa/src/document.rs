//! JSON documents holding exactly one automaton.
//!
//! Every number is a decimal string and every complex number is a
//! `[re, im]` pair of them, so a document round-trips exactly. Keys are
//! emitted in a fixed order and unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use qfa_core::models::{
    ControlDescription, GpfaDescription, KwqfaDescription, ModelKind, NqfaDescription,
    PartitionDescription, QfcDescription,
};
use qfa_core::{Automaton, Complex64, ComplexMatrix, Gpfa, Kwqfa, ModelError, Nqfa, Pfa, Qfc};

pub const FORMAT_VERSION: &str = "1";

/// Optional provenance carried alongside the model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Metadata {
    fn is_empty(&self) -> bool {
        self.name.is_none() && self.description.is_none() && self.seed.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub automaton: Automaton,
    pub metadata: Metadata,
}

impl Document {
    pub fn new(automaton: impl Into<Automaton>) -> Self {
        Self {
            automaton: automaton.into(),
            metadata: Metadata::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("syntax error at byte {offset} (line {line}, column {column}): {message}")]
    Syntax {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported format_version {0:?} (expected \"1\")")]
    UnsupportedVersion(String),
    #[error("unknown kind {0:?} (expected nqfa, kwqfa, qfc, gpfa or pfa)")]
    UnknownKind(String),
    #[error("invalid {kind}: {}", format_violations(.violations))]
    Validation {
        kind: ModelKind,
        /// `(document path, message)` per violated invariant.
        violations: Vec<(String, String)>,
    },
}

fn format_violations(v: &[(String, String)]) -> String {
    v.iter()
        .map(|(p, m)| format!("{p}: {m}"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// A finite real number written as a decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Decimal(f64);

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // `{:?}` is the shortest string that parses back to the same f64.
        s.serialize_str(&format!("{:?}", self.0))
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct DecimalVisitor;
        impl Visitor<'_> for DecimalVisitor {
            type Value = Decimal;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal number written as a string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Decimal, E> {
                let looks_decimal = !v.is_empty()
                    && v.bytes().all(|b| {
                        b.is_ascii_digit() || matches!(b, b'-' | b'+' | b'.' | b'e' | b'E')
                    });
                match v.parse::<f64>() {
                    Ok(x) if looks_decimal && x.is_finite() => Ok(Decimal(x)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_str(DecimalVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Complex(Decimal, Decimal);

type Matrix = Vec<Vec<Complex>>;
type RealRows = Vec<Vec<Decimal>>;

fn to_matrix(m: &ComplexMatrix) -> Matrix {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|z| Complex(Decimal(z.re), Decimal(z.im)))
                .collect()
        })
        .collect()
}

fn from_matrix(path: &str, m: Matrix) -> Result<ComplexMatrix, DocumentError> {
    let rows = m
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|Complex(a, b)| Complex64::new(a.0, b.0))
                .collect()
        })
        .collect();
    ComplexMatrix::from_rows(rows).map_err(|e| DocumentError::Schema {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn to_reals(v: &[f64]) -> Vec<Decimal> {
    v.iter().copied().map(Decimal).collect()
}

fn from_reals(v: Vec<Decimal>) -> Vec<f64> {
    v.into_iter().map(|d| d.0).collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Partition {
    non_halting: Vec<String>,
    accepting: Vec<String>,
    rejecting: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantumBody {
    format_version: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    metadata: Metadata,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: String,
    partition: Partition,
    unitaries: BTreeMap<String, Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    measurements: Option<BTreeMap<String, Vec<Matrix>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabeledProjector {
    label: String,
    projector: Matrix,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Transition {
    from: String,
    label: String,
    to: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Control {
    alphabet: Vec<String>,
    states: Vec<String>,
    start: String,
    accepting: Vec<String>,
    transitions: Vec<Transition>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QfcBody {
    format_version: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    metadata: Metadata,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: String,
    unitaries: BTreeMap<String, Matrix>,
    observable: Vec<LabeledProjector>,
    control: Control,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearBody {
    format_version: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    metadata: Metadata,
    alphabet: Vec<String>,
    initial: Vec<Decimal>,
    matrices: BTreeMap<String, RealRows>,
    #[serde(rename = "final")]
    final_vector: Vec<Decimal>,
}

/// Header fields shared by every kind.
struct Header {
    format_version: String,
    kind: String,
    metadata: Metadata,
}

fn header(kind: ModelKind, metadata: &Metadata) -> Header {
    Header {
        format_version: FORMAT_VERSION.into(),
        kind: kind.name().into(),
        metadata: metadata.clone(),
    }
}

fn quantum_body(h: Header, d: &NqfaDescription, with_measurements: bool) -> QuantumBody {
    QuantumBody {
        format_version: h.format_version,
        kind: h.kind,
        metadata: h.metadata,
        alphabet: d.alphabet.clone(),
        states: d.states.clone(),
        initial: d.initial.clone(),
        partition: Partition {
            non_halting: d.partition.non_halting.clone(),
            accepting: d.partition.accepting.clone(),
            rejecting: d.partition.rejecting.clone(),
        },
        unitaries: d
            .unitaries
            .iter()
            .map(|(s, u)| (s.clone(), to_matrix(u)))
            .collect(),
        measurements: with_measurements.then(|| {
            d.measurements
                .iter()
                .map(|(s, ps)| (s.clone(), ps.iter().map(to_matrix).collect()))
                .collect()
        }),
    }
}

fn linear_body(h: Header, d: &GpfaDescription) -> LinearBody {
    LinearBody {
        format_version: h.format_version,
        kind: h.kind,
        metadata: h.metadata,
        alphabet: d.alphabet.clone(),
        initial: to_reals(&d.initial),
        matrices: d
            .matrices
            .iter()
            .map(|(s, rows)| (s.clone(), rows.iter().map(|r| to_reals(r)).collect()))
            .collect(),
        final_vector: to_reals(&d.final_vector),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents always serialize");
    text.push('\n');
    text
}

/// Serializes a document. Output is deterministic: struct fields in a
/// fixed order, symbol-keyed maps sorted by key.
pub fn serialize(doc: &Document) -> String {
    let h = header(doc.automaton.kind(), &doc.metadata);
    match &doc.automaton {
        Automaton::Nqfa(m) => to_json(&quantum_body(h, &m.to_description(), true)),
        Automaton::Kwqfa(m) => {
            let d = m.to_description().with_identity_measurements();
            to_json(&quantum_body(h, &d, false))
        }
        Automaton::Qfc(m) => to_json(&qfc_body(h, &m.to_description())),
        Automaton::Gpfa(m) => to_json(&linear_body(h, &m.to_description())),
        Automaton::Pfa(m) => to_json(&linear_body(h, &m.to_description())),
    }
}

fn qfc_body(h: Header, d: &QfcDescription) -> QfcBody {
    QfcBody {
        format_version: h.format_version,
        kind: h.kind,
        metadata: h.metadata,
        alphabet: d.alphabet.clone(),
        states: d.states.clone(),
        initial: d.initial.clone(),
        unitaries: d
            .unitaries
            .iter()
            .map(|(s, u)| (s.clone(), to_matrix(u)))
            .collect(),
        observable: d
            .observable
            .iter()
            .map(|(label, p)| LabeledProjector {
                label: label.clone(),
                projector: to_matrix(p),
            })
            .collect(),
        control: Control {
            alphabet: d.control.alphabet.clone(),
            states: d.control.states.clone(),
            start: d.control.start.clone(),
            accepting: d.control.accepting.clone(),
            transitions: d
                .control
                .transitions
                .iter()
                .map(|(from, label, to)| Transition {
                    from: from.clone(),
                    label: label.clone(),
                    to: to.clone(),
                })
                .collect(),
        },
    }
}

/// 0-based byte offset of a 1-based (line, column) position.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn syntax_error(text: &str, e: &serde_json::Error) -> DocumentError {
    let message = e.to_string();
    // Drop serde_json's own " at line L column C" suffix.
    let message = match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    };
    DocumentError::Syntax {
        offset: byte_offset(text, e.line(), e.column()),
        line: e.line(),
        column: e.column(),
        message,
    }
}

fn decode<B: de::DeserializeOwned>(value: Value) -> Result<B, DocumentError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        DocumentError::Schema {
            path: if path == "." { String::new() } else { path },
            message: e.into_inner().to_string(),
        }
    })
}

fn validation(kind: ModelKind) -> impl Fn(ModelError) -> DocumentError {
    move |e| DocumentError::Validation {
        kind,
        violations: e
            .violations
            .iter()
            .map(|v| (v.path(), v.to_string()))
            .collect(),
    }
}

fn matrices(
    field: &str,
    map: BTreeMap<String, Matrix>,
) -> Result<Vec<(String, ComplexMatrix)>, DocumentError> {
    map.into_iter()
        .map(|(s, m)| {
            let path = format!("{field}.{s}");
            Ok((s, from_matrix(&path, m)?))
        })
        .collect()
}

fn quantum_description(body: QuantumBody) -> Result<(NqfaDescription, bool), DocumentError> {
    let has_measurements = body.measurements.is_some();
    let measurements = body
        .measurements
        .unwrap_or_default()
        .into_iter()
        .map(|(s, family)| {
            let family = family
                .into_iter()
                .enumerate()
                .map(|(i, m)| from_matrix(&format!("measurements.{s}[{i}]"), m))
                .collect::<Result<_, _>>()?;
            Ok((s, family))
        })
        .collect::<Result<_, DocumentError>>()?;
    let desc = NqfaDescription {
        alphabet: body.alphabet,
        states: body.states,
        initial: body.initial,
        partition: PartitionDescription {
            non_halting: body.partition.non_halting,
            accepting: body.partition.accepting,
            rejecting: body.partition.rejecting,
        },
        unitaries: matrices("unitaries", body.unitaries)?,
        measurements,
    };
    Ok((desc, has_measurements))
}

fn linear_description(body: LinearBody) -> GpfaDescription {
    GpfaDescription {
        alphabet: body.alphabet,
        initial: from_reals(body.initial),
        matrices: body
            .matrices
            .into_iter()
            .map(|(s, rows)| (s, rows.into_iter().map(from_reals).collect()))
            .collect(),
        final_vector: from_reals(body.final_vector),
    }
}

fn schema(path: &str, message: &str) -> DocumentError {
    DocumentError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// Parses and validates a document.
pub fn parse(text: &str) -> Result<Document, DocumentError> {
    let value: Value = serde_json::from_str(text).map_err(|e| syntax_error(text, &e))?;
    let Value::Object(top) = &value else {
        return Err(schema("", "document must be a JSON object"));
    };
    match top.get("format_version") {
        Some(Value::String(v)) if v == FORMAT_VERSION => {}
        Some(Value::String(v)) => return Err(DocumentError::UnsupportedVersion(v.clone())),
        Some(_) => return Err(schema("format_version", "expected a string")),
        None => return Err(schema("format_version", "missing field")),
    }
    let kind = match top.get("kind") {
        Some(Value::String(k)) => {
            ModelKind::from_name(k).ok_or_else(|| DocumentError::UnknownKind(k.clone()))?
        }
        Some(_) => return Err(schema("kind", "expected a string")),
        None => return Err(schema("kind", "missing field")),
    };
    let invalid = validation(kind);
    let (automaton, metadata): (Automaton, Metadata) = match kind {
        ModelKind::Nqfa | ModelKind::Kwqfa => {
            let env = decode::<QuantumBody>(value)?;
            let metadata = env.metadata.clone();
            let (desc, has_measurements) = quantum_description(env)?;
            let automaton = if kind == ModelKind::Nqfa {
                if !has_measurements {
                    return Err(schema("measurements", "missing field"));
                }
                Nqfa::new(desc).map_err(invalid)?.into()
            } else {
                if has_measurements {
                    return Err(schema(
                        "measurements",
                        "a kwqfa has no intermediate measurements",
                    ));
                }
                Kwqfa::new(KwqfaDescription {
                    alphabet: desc.alphabet,
                    states: desc.states,
                    initial: desc.initial,
                    partition: desc.partition,
                    unitaries: desc.unitaries,
                })
                .map_err(invalid)?
                .into()
            };
            (automaton, metadata)
        }
        ModelKind::Qfc => {
            let env = decode::<QfcBody>(value)?;
            let metadata = env.metadata.clone();
            let b = env;
            let observable = b
                .observable
                .into_iter()
                .enumerate()
                .map(|(i, p)| {
                    Ok((
                        p.label,
                        from_matrix(&format!("observable[{i}]"), p.projector)?,
                    ))
                })
                .collect::<Result<_, DocumentError>>()?;
            let desc = QfcDescription {
                alphabet: b.alphabet,
                states: b.states,
                initial: b.initial,
                unitaries: matrices("unitaries", b.unitaries)?,
                observable,
                control: ControlDescription {
                    alphabet: b.control.alphabet,
                    states: b.control.states,
                    start: b.control.start,
                    accepting: b.control.accepting,
                    transitions: b
                        .control
                        .transitions
                        .into_iter()
                        .map(|t| (t.from, t.label, t.to))
                        .collect(),
                },
            };
            (Qfc::new(desc).map_err(invalid)?.into(), metadata)
        }
        ModelKind::Gpfa => {
            let env = decode::<LinearBody>(value)?;
            let metadata = env.metadata.clone();
            (
                Gpfa::new(linear_description(env)).map_err(invalid)?.into(),
                metadata,
            )
        }
        ModelKind::Pfa => {
            let env = decode::<LinearBody>(value)?;
            let metadata = env.metadata.clone();
            (
                Pfa::new(linear_description(env)).map_err(invalid)?.into(),
                metadata,
            )
        }
    };
    Ok(Document {
        automaton,
        metadata,
    })
}
