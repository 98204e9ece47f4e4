//! Converters between models that preserve the acceptance function.
//!
//! The two quantum-to-GPFA compilers vectorize density matrices in the
//! orthonormal Hermitian basis of [`hermitian_basis`]. A real-linear map on
//! Hermitian matrices then becomes a real `n² × n²` matrix, built column by
//! column by pushing each basis element through the map.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{hermitian_basis, ComplexMatrix, HermitianBasis, RealMatrix};
use crate::models::{
    ControlDescription, Gpfa, Halting, Kwqfa, Nqfa, Pfa, Qfc, QfcDescription, TapeSymbol,
};

/// Outcome label of the non-halting block in [`kwqfa_to_qfc`].
pub const LABEL_GO: &str = "g";
/// Outcome label of the accepting block in [`kwqfa_to_qfc`].
pub const LABEL_ACCEPT: &str = "a";
/// Outcome label of the rejecting block in [`kwqfa_to_qfc`].
pub const LABEL_REJECT: &str = "r";

/// Identity embedding: a KWQFA is an NQFA with `{I}` measurements.
pub fn kwqfa_to_nqfa(m: &Kwqfa) -> Nqfa {
    m.as_nqfa().clone()
}

/// One tape symbol of an NQFA in vectorized form.
///
/// With `Φ(ρ) = Σ_j P_j U ρ U† P_j`, `transfer` is the column-operator
/// matrix of the survival map `ρ ↦ Π_non Φ(ρ) Π_non` and `acceptance` the
/// covector of `ρ ↦ trace(Π_acc Φ(ρ))`, both in the Hermitian basis.
#[derive(Debug, Clone)]
pub struct SymbolSuperoperator {
    pub transfer: RealMatrix,
    pub acceptance: Vec<f64>,
    /// Largest imaginary part discarded while vectorizing.
    pub max_imaginary: f64,
}

pub fn survival_superoperator(
    m: &Nqfa,
    symbol: TapeSymbol,
    basis: &HermitianBasis,
) -> SymbolSuperoperator {
    let dim = basis.len();
    let non = m.block_mask(Halting::NonHalting);
    let acc = m.block_mask(Halting::Accepting);
    let u = m.unitary(symbol);
    let measurement = m.measurement(symbol);
    let mut transfer = RealMatrix::zeros(dim, dim);
    let mut acceptance = vec![0.0; dim];
    let mut max_imaginary: f64 = 0.0;
    for (i, e) in basis.elements().iter().enumerate() {
        let image = measurement.dephase(&e.conjugate_by(u));
        let coords = basis
            .coordinates(&image.restrict_to(&non))
            .expect("basis dimension matches");
        for (j, z) in coords.into_iter().enumerate() {
            transfer[(j, i)] = z.re;
            max_imaginary = max_imaginary.max(z.im.abs());
        }
        let accepted: Complex64 = (0..image.rows())
            .filter(|&k| acc[k])
            .map(|k| image[(k, k)])
            .sum();
        acceptance[i] = accepted.re;
        max_imaginary = max_imaginary.max(accepted.im.abs());
    }
    SymbolSuperoperator {
        transfer,
        acceptance,
        max_imaginary,
    }
}

/// Row-form block matrix on `(r, acc)`: `r' = T r`, `acc' = acc + a · r`.
fn accumulator_block(op: &SymbolSuperoperator) -> RealMatrix {
    let dim = op.acceptance.len();
    let mut block = RealMatrix::zeros(dim + 1, dim + 1);
    for i in 0..dim {
        for j in 0..dim {
            block[(i, j)] = op.transfer[(j, i)];
        }
        block[(i, dim)] = op.acceptance[i];
    }
    block[(dim, dim)] = 1.0;
    block
}

fn initial_density(n: usize, q0: usize) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(n, n);
    rho[(q0, q0)] = Complex64::new(1.0, 0.0);
    rho
}

/// Compiles an `n`-state NQFA into a GPFA with exactly `n² + 1` states
/// computing the same acceptance probability on every word.
///
/// The first `n²` coordinates hold the vectorized surviving density
/// matrix and the last one accumulates accepted probability. The `¢` step
/// is folded into the initial vector and the `$` step into the final
/// vector, which reads the accumulator after the last step.
pub fn nqfa_to_gpfa(m: &Nqfa) -> Gpfa {
    let n = m.state_count();
    let basis = hermitian_basis(n).expect("an NQFA has at least one state");
    let sigma = m.alphabet().len();
    let block = |t: TapeSymbol| accumulator_block(&survival_superoperator(m, t, &basis));

    let mut start = basis
        .coordinates(&initial_density(n, m.initial()))
        .expect("dimension matches")
        .into_iter()
        .map(|z| z.re)
        .collect::<Vec<_>>();
    start.push(0.0);
    let initial = block(TapeSymbol::LeftMarker).left_mul(&start);

    let mut read_accumulator = vec![0.0; n * n + 1];
    read_accumulator[n * n] = 1.0;
    let final_vector = block(TapeSymbol::RightMarker).right_mul(&read_accumulator);

    let matrices = (0..sigma).map(|s| block(TapeSymbol::Input(s))).collect();
    Gpfa::from_parts(m.alphabet().clone(), initial, matrices, final_vector)
}

/// Turns a KWQFA into a QFC with the same states and unitaries.
///
/// The observable is the halting measurement, with outcomes `g`
/// (non-halting span), `a` (accepting span) and `r` (rejecting span). The
/// control language is `g* a (a|r|g)*`, recognized by the 3-state DFA
///
/// | state      | g          | a          | r          | accepting |
/// |------------|------------|------------|------------|-----------|
/// | `running`  | `running`  | `accepted` | `rejected` | no        |
/// | `accepted` | `accepted` | `accepted` | `accepted` | yes       |
/// | `rejected` | `rejected` | `rejected` | `rejected` | no        |
///
/// Outcome sequences whose first non-`g` outcome is `a` carry exactly the
/// probability the KWQFA accepts with at that step, summed over all
/// continuations.
pub fn kwqfa_to_qfc(m: &Kwqfa) -> Qfc {
    let nqfa = m.as_nqfa();
    let n = nqfa.state_count();
    let projector = |h: Halting| {
        let idx: Vec<usize> = (0..n).filter(|&i| nqfa.halting()[i] == h).collect();
        ComplexMatrix::coordinate_projector(n, &idx)
    };
    let s = |x: &str| x.to_string();
    let (running, accepted, rejected) = (s("running"), s("accepted"), s("rejected"));
    let mut transitions = vec![
        (running.clone(), s(LABEL_GO), running.clone()),
        (running.clone(), s(LABEL_ACCEPT), accepted.clone()),
        (running.clone(), s(LABEL_REJECT), rejected.clone()),
    ];
    for sink in [&accepted, &rejected] {
        for label in [LABEL_GO, LABEL_ACCEPT, LABEL_REJECT] {
            transitions.push((sink.clone(), s(label), sink.clone()));
        }
    }
    let desc = m.to_description();
    Qfc::new(QfcDescription {
        alphabet: desc.alphabet,
        states: desc.states,
        initial: desc.initial,
        unitaries: desc.unitaries,
        observable: vec![
            (s(LABEL_GO), projector(Halting::NonHalting)),
            (s(LABEL_ACCEPT), projector(Halting::Accepting)),
            (s(LABEL_REJECT), projector(Halting::Rejecting)),
        ],
        control: ControlDescription {
            alphabet: vec![s(LABEL_GO), s(LABEL_ACCEPT), s(LABEL_REJECT)],
            states: vec![running.clone(), accepted.clone(), rejected],
            start: running,
            accepting: vec![accepted],
            transitions,
        },
    })
    .expect("generated QFC is valid")
}

/// Row-form matrix of one QFC step on the family `{ρ_d}`: block `(d, d')`
/// collects `P_c U ρ_d U† P_c` for every label `c` with `δ(d, c) = d'`.
fn qfc_step_matrix(m: &Qfc, symbol: TapeSymbol, basis: &HermitianBasis) -> RealMatrix {
    let dim = basis.len();
    let dfa = m.control();
    let size = dfa.state_count() * dim;
    let u = m.unitary(symbol);
    let projectors = m.observable().projectors();
    // Column images are shared by every source block.
    let images: Vec<Vec<Vec<f64>>> = basis
        .elements()
        .iter()
        .map(|e| {
            let evolved = e.conjugate_by(u);
            projectors
                .iter()
                .map(|p| {
                    basis
                        .coordinates(&evolved.sandwich(p))
                        .expect("dimension matches")
                        .into_iter()
                        .map(|z| z.re)
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut out = RealMatrix::zeros(size, size);
    for d in 0..dfa.state_count() {
        for (i, per_label) in images.iter().enumerate() {
            for (c, coords) in per_label.iter().enumerate() {
                let target = dfa.next(d, c);
                for (j, &x) in coords.iter().enumerate() {
                    out[(d * dim + i, target * dim + j)] += x;
                }
            }
        }
    }
    out
}

/// Compiles a QFC with `n` quantum states and `|D|` control states into a
/// GPFA with exactly `|D| · n²` states. The `¢` step is folded into the
/// initial vector and the `$` step into the final vector, which sums
/// `trace(ρ_d)` over accepting control states.
pub fn qfc_to_gpfa(m: &Qfc) -> Gpfa {
    let n = m.state_count();
    let basis = hermitian_basis(n).expect("a QFC has at least one state");
    let dim = basis.len();
    let dfa = m.control();
    let size = dfa.state_count() * dim;

    let mut start = vec![0.0; size];
    let rho0 = basis
        .coordinates(&initial_density(n, m.initial()))
        .expect("dimension matches");
    for (j, z) in rho0.into_iter().enumerate() {
        start[dfa.start() * dim + j] = z.re;
    }
    let initial = qfc_step_matrix(m, TapeSymbol::LeftMarker, &basis).left_mul(&start);

    let traces = basis.traces();
    let mut accepting_trace = vec![0.0; size];
    for d in (0..dfa.state_count()).filter(|&d| dfa.is_accepting(d)) {
        accepting_trace[d * dim..(d + 1) * dim].copy_from_slice(&traces);
    }
    let final_vector =
        qfc_step_matrix(m, TapeSymbol::RightMarker, &basis).right_mul(&accepting_trace);

    let matrices = (0..m.alphabet().len())
        .map(|s| qfc_step_matrix(m, TapeSymbol::Input(s), &basis))
        .collect();
    Gpfa::from_parts(m.alphabet().clone(), initial, matrices, final_vector)
}

/// A PFA already is a GPFA.
pub fn pfa_to_gpfa(m: &Pfa) -> Gpfa {
    m.as_gpfa().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::models::Word;
    use crate::sim::{run_gpfa, run_nqfa, run_qfc};
    use core::f64::consts::FRAC_PI_4;

    fn sin2(k: usize) -> f64 {
        let s = (k as f64 * FRAC_PI_4).sin();
        s * s
    }

    #[test]
    fn state_counts() {
        let r = fixtures::rotation_kwqfa(FRAC_PI_4);
        assert_eq!(nqfa_to_gpfa(r.as_nqfa()).state_count(), 17);
        let id = fixtures::identity_kwqfa();
        assert_eq!(nqfa_to_gpfa(id.as_nqfa()).state_count(), 5);
        let q = kwqfa_to_qfc(&r);
        assert_eq!(q.control().state_count(), 3);
        assert_eq!(qfc_to_gpfa(&q).state_count(), 3 * 16);
        assert_eq!(qfc_to_gpfa(&fixtures::trivial_qfc(true)).state_count(), 1);
    }

    #[test]
    fn rotation_through_every_pipeline() {
        let r = fixtures::rotation_kwqfa(FRAC_PI_4);
        let via_nqfa = nqfa_to_gpfa(&kwqfa_to_nqfa(&r));
        let qfc = kwqfa_to_qfc(&r);
        let via_qfc = qfc_to_gpfa(&qfc);
        for k in 0..=16 {
            let w = Word::repeat(0, k);
            assert_eq!(
                run_nqfa(&kwqfa_to_nqfa(&r), &w).unwrap(),
                run_nqfa(r.as_nqfa(), &w).unwrap()
            );
            assert!((run_gpfa(&via_nqfa, &w).unwrap() - sin2(k)).abs() < 1e-9);
            assert!((run_qfc(&qfc, &w).unwrap().final_accept - sin2(k)).abs() < 1e-12);
            assert!((run_gpfa(&via_qfc, &w).unwrap() - sin2(k)).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_machine_converts_to_constant_one() {
        let id = fixtures::identity_kwqfa();
        let g = nqfa_to_gpfa(id.as_nqfa());
        let q = kwqfa_to_qfc(&id);
        for w in ["", "a", "a,b,b,a"] {
            let w = id.alphabet().parse_word(w).unwrap();
            assert!((run_gpfa(&g, &w).unwrap() - 1.0).abs() < 1e-12);
            assert!((run_qfc(&q, &w).unwrap().final_accept - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dephasing_converted_value() {
        let g = nqfa_to_gpfa(&fixtures::dephasing_nqfa(FRAC_PI_4));
        assert!(run_gpfa(&g, &Word::empty()).unwrap().abs() < 1e-9);
        for k in 1..=32 {
            assert!((run_gpfa(&g, &Word::repeat(0, k)).unwrap() - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn superoperators_are_real() {
        let m = fixtures::dephasing_nqfa(0.9);
        let basis = hermitian_basis(4).unwrap();
        for t in m.alphabet().tape_symbols() {
            assert!(survival_superoperator(&m, t, &basis).max_imaginary <= 1e-12);
        }
    }

    #[test]
    fn pfa_embedding_is_exact() {
        let b = fixtures::binary_expansion_pfa();
        let g = pfa_to_gpfa(&b);
        let one = g.alphabet().parse_word("1").unwrap();
        assert_eq!(run_gpfa(&g, &one).unwrap(), 0.5);
        assert_eq!(&g, b.as_gpfa());
    }
}
