//! Small hand-built machines with known acceptance functions.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

// Float math for no_std builds; shadowed by inherent methods whenever std
// is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::ComplexMatrix;
use crate::models::{
    ControlDescription, GpfaDescription, Kwqfa, KwqfaDescription, Nqfa, NqfaDescription,
    PartitionDescription, Pfa, Qfc, QfcDescription,
};

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Permutation matrix sending basis state `j` to `image[j]`.
fn permutation(image: &[usize]) -> ComplexMatrix {
    let n = image.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (j, &i) in image.iter().enumerate() {
        m[(i, j)].re = 1.0;
    }
    m
}

fn rotation_description(theta: f64) -> KwqfaDescription {
    let (s, c) = theta.sin_cos();
    let mut rot = ComplexMatrix::identity(4);
    rot[(0, 0)].re = c;
    rot[(0, 1)].re = -s;
    rot[(1, 0)].re = s;
    rot[(1, 1)].re = c;
    KwqfaDescription {
        alphabet: names(&["a"]),
        states: names(&["q0", "q1", "qacc", "qrej"]),
        initial: "q0".into(),
        partition: PartitionDescription {
            non_halting: names(&["q0", "q1"]),
            accepting: names(&["qacc"]),
            rejecting: names(&["qrej"]),
        },
        unitaries: vec![
            ("¢".into(), ComplexMatrix::identity(4)),
            ("a".into(), rot),
            // q0 → qrej, q1 → qacc and back.
            ("$".into(), permutation(&[3, 2, 1, 0])),
        ],
    }
}

/// `R(θ)`: `a` rotates `span(q0, q1)` by `θ`; the right end-marker sends
/// `q1` to acceptance and `q0` to rejection, so `f(a^k) = sin²(kθ)`.
pub fn rotation_kwqfa(theta: f64) -> Kwqfa {
    Kwqfa::new(rotation_description(theta)).expect("rotation fixture is valid")
}

/// `D(θ)`: the unitaries of `R(θ)` with a full computational-basis
/// measurement after every `a`. Each `a` step then acts as the Markov
/// chain `[[cos²θ, sin²θ], [sin²θ, cos²θ]]` on `(q0, q1)`; at `θ = π/4`
/// every non-empty `a^k` is accepted with probability exactly 1/2.
pub fn dephasing_nqfa(theta: f64) -> Nqfa {
    let mut desc = rotation_description(theta).with_identity_measurements();
    let dephase = vec![
        ComplexMatrix::coordinate_projector(4, &[0]),
        ComplexMatrix::coordinate_projector(4, &[1]),
        ComplexMatrix::coordinate_projector(4, &[2, 3]),
    ];
    for (name, family) in &mut desc.measurements {
        if name == "a" {
            *family = dephase.clone();
        }
    }
    Nqfa::new(desc).expect("dephasing fixture is valid")
}

/// Two states over `{a, b}`; every input symbol is the identity and the
/// right end-marker swaps `q0` with the accepting state, so every word
/// is accepted with probability 1.
pub fn identity_kwqfa() -> Kwqfa {
    Kwqfa::new(KwqfaDescription {
        alphabet: names(&["a", "b"]),
        states: names(&["q0", "qacc"]),
        initial: "q0".into(),
        partition: PartitionDescription {
            non_halting: names(&["q0"]),
            accepting: names(&["qacc"]),
            rejecting: vec![],
        },
        unitaries: vec![
            ("¢".into(), ComplexMatrix::identity(2)),
            ("a".into(), ComplexMatrix::identity(2)),
            ("b".into(), ComplexMatrix::identity(2)),
            ("$".into(), permutation(&[1, 0])),
        ],
    })
    .expect("identity fixture is valid")
}

/// Same as [`identity_kwqfa`] but as a raw NQFA description with explicit
/// `{I}` measurements.
pub fn identity_nqfa_description() -> NqfaDescription {
    identity_kwqfa()
        .to_description()
        .with_identity_measurements()
}

/// One quantum state, observable `{I}` labeled `c`, and a one-state
/// control DFA that accepts `c*` (or nothing when `accept_all` is false).
pub fn trivial_qfc(accept_all: bool) -> Qfc {
    let id = ComplexMatrix::identity(1);
    Qfc::new(QfcDescription {
        alphabet: names(&["a"]),
        states: names(&["q0"]),
        initial: "q0".into(),
        unitaries: ["¢", "a", "$"]
            .iter()
            .map(|s| (s.to_string(), id.clone()))
            .collect(),
        observable: vec![("c".into(), id.clone())],
        control: ControlDescription {
            alphabet: names(&["c"]),
            states: names(&["d0"]),
            start: "d0".into(),
            accepting: if accept_all { names(&["d0"]) } else { vec![] },
            transitions: vec![("d0".into(), "c".into(), "d0".into())],
        },
    })
    .expect("trivial QFC is valid")
}

/// Binary-expansion PFA over `{0, 1}`: `value(w) = 0.w` read as a binary
/// fraction, most significant digit first.
///
/// From the scanning state each digit halts with probability 1/2, into
/// the accepting sink on `1` and the rejecting sink on `0`, so digit `i`
/// contributes `w_i · 2^{-i}`.
pub fn binary_expansion_pfa() -> Pfa {
    Pfa::new(GpfaDescription {
        alphabet: names(&["0", "1"]),
        initial: vec![1.0, 0.0, 0.0],
        matrices: vec![
            (
                "0".into(),
                vec![
                    vec![0.5, 0.0, 0.5],
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                ],
            ),
            (
                "1".into(),
                vec![
                    vec![0.5, 0.5, 0.0],
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                ],
            ),
        ],
        final_vector: vec![0.0, 1.0, 0.0],
    })
    .expect("binary-expansion PFA is valid")
}
