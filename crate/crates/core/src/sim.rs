//! Step-exact reference simulators. Every converter is judged against
//! these.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::models::{Automaton, Gpfa, Halting, InputError, Kwqfa, Nqfa, Qfc, TapeSymbol, Word};

/// Tolerance for probability conservation along a run.
pub const TOL_SIM: f64 = 1e-9;

/// State of a run after one tape symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub symbol: TapeSymbol,
    pub cumulative_accept: f64,
    pub cumulative_reject: f64,
    /// Trace of the unhalted (sub-normalized) density matrix.
    pub surviving_trace: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_accept: f64,
    pub final_reject: f64,
    /// Unhalted mass left after the run. Zero for the quantum models: the
    /// mass surviving the right end-marker is folded into `final_reject`,
    /// but the last trace record still shows it.
    pub residual: f64,
    pub trace: Vec<StepRecord>,
}

impl RunResult {
    /// `max_step |accept + reject + surviving − 1|`, including the final
    /// folded totals.
    pub fn conservation_error(&self) -> f64 {
        self.trace
            .iter()
            .map(|s| (s.cumulative_accept + s.cumulative_reject + s.surviving_trace - 1.0).abs())
            .chain(core::iter::once(
                (self.final_accept + self.final_reject + self.residual - 1.0).abs(),
            ))
            .fold(0.0, f64::max)
    }

    /// Cumulative accept and reject never decrease along the trace.
    pub fn is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| {
            w[1].cumulative_accept >= w[0].cumulative_accept
                && w[1].cumulative_reject >= w[0].cumulative_reject
        })
    }
}

/// Runs an NQFA on `¢ w $`, starting from `|q0⟩⟨q0|`.
pub fn run_nqfa(m: &Nqfa, w: &Word) -> Result<RunResult, InputError> {
    run_nqfa_observed(m, w, |_, _| {})
}

/// [`run_nqfa`] with a callback receiving each step record together with
/// the surviving density matrix.
pub fn run_nqfa_observed<F>(m: &Nqfa, w: &Word, mut observe: F) -> Result<RunResult, InputError>
where
    F: FnMut(&StepRecord, &ComplexMatrix),
{
    m.alphabet().check_word(w)?;
    let n = m.state_count();
    let non = m.block_mask(Halting::NonHalting);
    let acc = m.block_mask(Halting::Accepting);
    let rej = m.block_mask(Halting::Rejecting);

    let mut rho = ComplexMatrix::zeros(n, n);
    rho[(m.initial(), m.initial())] = Complex64::new(1.0, 0.0);
    let mut accept = 0.0;
    let mut reject = 0.0;
    let mut trace = Vec::with_capacity(w.len() + 2);
    for symbol in w.tape() {
        let evolved = rho.conjugate_by(m.unitary(symbol));
        let measured = m.measurement(symbol).dephase(&evolved);
        // Halting probabilities are traces of PSD blocks; clamp the
        // rounding noise so the cumulative sums stay monotone.
        accept += measured.partial_trace_on(&acc).max(0.0);
        reject += measured.partial_trace_on(&rej).max(0.0);
        rho = measured.restrict_to(&non);
        let record = StepRecord {
            symbol,
            cumulative_accept: accept,
            cumulative_reject: reject,
            surviving_trace: rho.trace().re,
        };
        observe(&record, &rho);
        trace.push(record);
    }
    let leftover = trace.last().map_or(0.0, |s| s.surviving_trace);
    Ok(RunResult {
        final_accept: accept,
        final_reject: reject + leftover,
        residual: 0.0,
        trace,
    })
}

/// Pure-state simulation of a KWQFA: tracks the state vector and the
/// halted mass directly, without density matrices.
pub fn run_kwqfa_pure(m: &Kwqfa, w: &Word) -> Result<f64, InputError> {
    let m = m.as_nqfa();
    m.alphabet().check_word(w)?;
    let mut psi = vec![Complex64::new(0.0, 0.0); m.state_count()];
    psi[m.initial()] = Complex64::new(1.0, 0.0);
    let mut accept = 0.0;
    for symbol in w.tape() {
        psi = m.unitary(symbol).mul_vector(&psi);
        for (amp, h) in psi.iter_mut().zip(m.halting()) {
            match h {
                Halting::NonHalting => {}
                Halting::Accepting => {
                    accept += amp.norm_sqr();
                    *amp = Complex64::new(0.0, 0.0);
                }
                Halting::Rejecting => *amp = Complex64::new(0.0, 0.0),
            }
        }
    }
    Ok(accept)
}

/// Runs a QFC on `¢ w $`, carrying one unnormalized density matrix per
/// control state. Summing over control states performs the sum over all
/// outcome sequences in the control language without enumerating them.
pub fn run_qfc(m: &Qfc, w: &Word) -> Result<RunResult, InputError> {
    m.alphabet().check_word(w)?;
    let n = m.state_count();
    let dfa = m.control();
    let mut blocks: Vec<Option<ComplexMatrix>> = vec![None; dfa.state_count()];
    let mut start = ComplexMatrix::zeros(n, n);
    start[(m.initial(), m.initial())] = Complex64::new(1.0, 0.0);
    blocks[dfa.start()] = Some(start);

    let mut trace = Vec::with_capacity(w.len() + 2);
    for symbol in w.tape() {
        let u = m.unitary(symbol);
        let mut next: Vec<Option<ComplexMatrix>> = vec![None; dfa.state_count()];
        for (d, rho) in blocks.iter().enumerate() {
            let Some(rho) = rho else { continue };
            let evolved = rho.conjugate_by(u);
            for (c, p) in m.observable().projectors().iter().enumerate() {
                let part = evolved.sandwich(p);
                let slot = &mut next[dfa.next(d, c)];
                *slot = Some(match slot.take() {
                    Some(acc) => &acc + &part,
                    None => part,
                });
            }
        }
        blocks = next;
        let total: f64 = blocks.iter().flatten().map(|r| r.trace().re).sum();
        trace.push(StepRecord {
            symbol,
            cumulative_accept: 0.0,
            cumulative_reject: 0.0,
            surviving_trace: total,
        });
    }
    let accept: f64 = blocks
        .iter()
        .enumerate()
        .filter(|(d, _)| dfa.is_accepting(*d))
        .filter_map(|(_, r)| r.as_ref())
        .map(|r| r.trace().re)
        .sum();
    Ok(RunResult {
        final_accept: accept,
        final_reject: 1.0 - accept,
        residual: 0.0,
        trace,
    })
}

/// `v · A_{w_1} ··· A_{w_m} · f`, folding the row vector left to right.
pub fn run_gpfa(g: &Gpfa, w: &Word) -> Result<f64, InputError> {
    g.alphabet().check_word(w)?;
    let x = gpfa_state(g, g.initial().to_vec(), w);
    Ok(dot(&x, g.final_vector()))
}

/// Row vector `x · A_{w_1} ··· A_{w_m}`.
pub fn gpfa_state(g: &Gpfa, x: Vec<f64>, w: &Word) -> Vec<f64> {
    w.symbols().iter().fold(x, |x, &s| g.matrix(s).left_mul(&x))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Acceptance probability (or GPFA value) of any model on `w`.
pub fn value(m: &Automaton, w: &Word) -> Result<f64, InputError> {
    match m {
        Automaton::Nqfa(m) => run_nqfa(m, w).map(|r| r.final_accept),
        Automaton::Kwqfa(m) => run_nqfa(m.as_nqfa(), w).map(|r| r.final_accept),
        Automaton::Qfc(m) => run_qfc(m, w).map(|r| r.final_accept),
        Automaton::Gpfa(g) => run_gpfa(g, w),
        Automaton::Pfa(p) => run_gpfa(p.as_gpfa(), w),
    }
}

/// Full run record for the quantum models; `None` for GPFA and PFA.
pub fn run(m: &Automaton, w: &Word) -> Result<Option<RunResult>, InputError> {
    match m {
        Automaton::Nqfa(m) => run_nqfa(m, w).map(Some),
        Automaton::Kwqfa(m) => run_nqfa(m.as_nqfa(), w).map(Some),
        Automaton::Qfc(m) => run_qfc(m, w).map(Some),
        Automaton::Gpfa(_) | Automaton::Pfa(_) => {
            m.alphabet().check_word(w)?;
            Ok(None)
        }
    }
}

/// `(k, value(σ^k))` for `k = 0..=max_len`.
pub fn sweep(
    m: &Automaton,
    symbol: usize,
    max_len: usize,
) -> Result<Vec<(usize, f64)>, InputError> {
    if symbol >= m.alphabet().len() {
        return Err(InputError::SymbolOutOfRange {
            index: symbol,
            size: m.alphabet().len(),
        });
    }
    (0..=max_len)
        .map(|k| value(m, &Word::repeat(symbol, k)).map(|v| (k, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use core::f64::consts::FRAC_PI_4;

    fn sin2(k: usize) -> f64 {
        let s = (k as f64 * FRAC_PI_4).sin();
        s * s
    }

    #[test]
    fn identity_machine_accepts_everything() {
        let m = fixtures::identity_kwqfa();
        for w in ["", "a", "b,a,b,b"] {
            let w = m.alphabet().parse_word(w).unwrap();
            let r = run_nqfa(m.as_nqfa(), &w).unwrap();
            assert_eq!(r.final_accept, 1.0);
            assert_eq!(r.final_reject, 0.0);
            assert_eq!(r.trace.len(), w.len() + 2);
        }
    }

    #[test]
    fn rotation_follows_sine_squared() {
        let m = fixtures::rotation_kwqfa(FRAC_PI_4);
        for (k, want) in [(1, 0.5), (2, 1.0), (4, 0.0)] {
            let r = run_nqfa(m.as_nqfa(), &Word::repeat(0, k)).unwrap();
            assert!((r.final_accept - want).abs() < 1e-12, "k={k}");
        }
        for k in 0..=16 {
            let r = run_nqfa(m.as_nqfa(), &Word::repeat(0, k)).unwrap();
            assert!((r.final_accept - sin2(k)).abs() < 1e-12);
            assert!(r.conservation_error() < 1e-12 && r.is_monotone(), "{r:?}");
        }
    }

    #[test]
    fn dephasing_freezes_at_one_half() {
        let m = fixtures::dephasing_nqfa(FRAC_PI_4);
        assert_eq!(run_nqfa(&m, &Word::empty()).unwrap().final_accept, 0.0);
        for k in 1..=8 {
            let r = run_nqfa(&m, &Word::repeat(0, k)).unwrap();
            assert!((r.final_accept - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_is_folded_into_rejection() {
        let m = fixtures::rotation_kwqfa(0.3);
        let r = run_nqfa(m.as_nqfa(), &Word::repeat(0, 3)).unwrap();
        let last = r.trace.last().unwrap();
        assert_eq!(r.residual, 0.0);
        assert!((r.final_reject - (last.cumulative_reject + last.surviving_trace)).abs() < 1e-15);
    }

    #[test]
    fn pure_state_agrees_with_density_matrix() {
        let m = fixtures::rotation_kwqfa(0.37);
        for k in 0..10 {
            let w = Word::repeat(0, k);
            let pure = run_kwqfa_pure(&m, &w).unwrap();
            let dense = run_nqfa(m.as_nqfa(), &w).unwrap().final_accept;
            assert!((pure - dense).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_qfc() {
        for k in 0..4 {
            let w = Word::repeat(0, k);
            assert_eq!(
                run_qfc(&fixtures::trivial_qfc(true), &w)
                    .unwrap()
                    .final_accept,
                1.0
            );
            assert_eq!(
                run_qfc(&fixtures::trivial_qfc(false), &w)
                    .unwrap()
                    .final_accept,
                0.0
            );
        }
    }

    #[test]
    fn gpfa_values() {
        let b = fixtures::binary_expansion_pfa();
        let g = b.as_gpfa();
        let w = |s: &str| g.alphabet().parse_word(s).unwrap();
        assert_eq!(run_gpfa(g, &w("1")).unwrap(), 0.5);
        assert_eq!(run_gpfa(g, &w("1,1")).unwrap(), 0.75);
        assert_eq!(run_gpfa(g, &w("1,0,1,1")).unwrap(), 0.6875);
        assert_eq!(run_gpfa(g, &w("")).unwrap(), 0.0);
    }

    #[test]
    fn unknown_symbol_index_is_an_input_error() {
        let m = fixtures::rotation_kwqfa(0.1);
        assert_eq!(
            run_nqfa(m.as_nqfa(), &Word::from_indices(vec![0, 3])),
            Err(InputError::SymbolOutOfRange { index: 3, size: 1 })
        );
        assert!(run_qfc(&fixtures::trivial_qfc(true), &Word::from_indices(vec![1])).is_err());
    }

    #[test]
    fn sweeps() {
        let r: Automaton = fixtures::rotation_kwqfa(FRAC_PI_4).into();
        let rows = sweep(&r, 0, 4).unwrap();
        let want = [0.0, 0.5, 1.0, 0.5, 0.0];
        for ((k, v), w) in rows.iter().zip(want) {
            assert!((v - w).abs() < 1e-12, "k={k}");
        }
        let id: Automaton = fixtures::identity_kwqfa().into();
        assert!(sweep(&id, 1, 3).unwrap().iter().all(|&(_, v)| v == 1.0));
        let d: Automaton = fixtures::dephasing_nqfa(FRAC_PI_4).into();
        let rows = sweep(&d, 0, 3).unwrap();
        for (k, v) in rows {
            let want = if k == 0 { 0.0 } else { 0.5 };
            assert!((v - want).abs() < 1e-12);
        }
        assert!(sweep(&d, 2, 3).is_err());
    }
}
