//! Seeded random models. Every generator builds a raw description and runs
//! it through the validating constructor, so generated machines satisfy
//! the same checks as hand-written ones.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::linalg::{householder_qr, ComplexMatrix};
use crate::models::{
    Automaton, ControlDescription, Gpfa, GpfaDescription, Kwqfa, KwqfaDescription, ModelKind, Nqfa,
    NqfaDescription, PartitionDescription, Pfa, Qfc, QfcDescription, Word, LEFT_MARKER,
    RIGHT_MARKER,
};

/// Shape of a random model. Unset partition sizes get defaults: one
/// accepting state, and one rejecting state when `states ≥ 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    pub states: usize,
    pub alphabet: usize,
    pub accepting: Option<usize>,
    pub rejecting: Option<usize>,
    /// Control-DFA size for QFCs (default 2).
    pub control_states: Option<usize>,
}

impl RandomSpec {
    pub fn new(seed: u64, states: usize, alphabet: usize) -> Self {
        Self {
            seed,
            states,
            alphabet,
            accepting: None,
            rejecting: None,
            control_states: None,
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn partition_sizes(&self) -> Result<(usize, usize), RandomSpecError> {
        let acc = self.accepting.unwrap_or(1);
        let rej = self
            .rejecting
            .unwrap_or(if self.states >= 3 { 1 } else { 0 });
        if acc + rej >= self.states {
            return Err(RandomSpecError::Partition {
                states: self.states,
                accepting: acc,
                rejecting: rej,
            });
        }
        Ok((acc, rej))
    }

    fn check(&self, min_states: usize) -> Result<(), RandomSpecError> {
        if self.states < min_states {
            return Err(RandomSpecError::TooFewStates {
                states: self.states,
                min: min_states,
            });
        }
        if self.alphabet == 0 {
            return Err(RandomSpecError::EmptyAlphabet);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandomSpecError {
    #[error("need at least {min} states, got {states}")]
    TooFewStates { states: usize, min: usize },
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error(
        "{accepting} accepting + {rejecting} rejecting leaves no non-halting state among {states}"
    )]
    Partition {
        states: usize,
        accepting: usize,
        rejecting: usize,
    },
    #[error("control DFA needs at least one state")]
    EmptyControl,
}

/// Symbol names `a, b, c, ...`, falling back to `s26, s27, ...`.
pub fn symbol_names(size: usize) -> Vec<String> {
    (0..size)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("s{i}")
            }
        })
        .collect()
}

fn state_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn tape_names(alphabet: &[String]) -> Vec<String> {
    let mut names = Vec::with_capacity(alphabet.len() + 2);
    names.push(LEFT_MARKER.to_string());
    names.extend(alphabet.iter().cloned());
    names.push(RIGHT_MARKER.to_string());
    names
}

/// Haar-random `n × n` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(n, n);
    let scale = core::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in 0..n {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            g[(i, j)] = Complex64::new(re * scale, im * scale);
        }
    }
    let (mut q, r) = householder_qr(&g);
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random complete projector family on `C^n`: `k` uniform in `1..=n`
/// coordinate blocks of random sizes, conjugated by one Haar unitary.
pub fn random_measurement<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<ComplexMatrix> {
    let k = rng.random_range(1..=n);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    cuts.truncate(k - 1);
    cuts.sort_unstable();
    cuts.push(n);
    let u = haar_unitary(rng, n);
    let mut start = 0;
    cuts.into_iter()
        .map(|end| {
            let block: Vec<usize> = (start..end).collect();
            start = end;
            ComplexMatrix::coordinate_projector(n, &block)
                .conjugate_by(&u)
                .hermitian_part()
        })
        .collect()
}

/// Uniform length in `0..=max_len`, uniform symbols.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, alphabet: usize, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    Word::from_indices((0..len).map(|_| rng.random_range(0..alphabet)).collect())
}

fn kwqfa_description<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &RandomSpec,
) -> Result<KwqfaDescription, RandomSpecError> {
    spec.check(2)?;
    let (acc, rej) = spec.partition_sizes()?;
    let n = spec.states;
    let states = state_names("q", n);
    // q0 stays non-halting; the other states are shuffled into the classes.
    let mut rest: Vec<String> = states[1..].to_vec();
    rest.shuffle(rng);
    let accepting = rest[..acc].to_vec();
    let rejecting = rest[acc..acc + rej].to_vec();
    let mut non_halting = Vec::with_capacity(n - acc - rej);
    non_halting.push(states[0].clone());
    non_halting.extend(rest[acc + rej..].iter().cloned());
    let alphabet = symbol_names(spec.alphabet);
    let unitaries = tape_names(&alphabet)
        .into_iter()
        .map(|t| (t, haar_unitary(rng, n)))
        .collect();
    Ok(KwqfaDescription {
        alphabet,
        initial: states[0].clone(),
        states,
        partition: PartitionDescription {
            non_halting,
            accepting,
            rejecting,
        },
        unitaries,
    })
}

pub fn random_kwqfa(spec: &RandomSpec) -> Result<Kwqfa, RandomSpecError> {
    let mut rng = spec.rng();
    let desc = kwqfa_description(&mut rng, spec)?;
    Ok(Kwqfa::new(desc).expect("generated KWQFA is valid"))
}

pub fn random_nqfa(spec: &RandomSpec) -> Result<Nqfa, RandomSpecError> {
    let mut rng = spec.rng();
    let kw = kwqfa_description(&mut rng, spec)?;
    let n = spec.states;
    let measurements = tape_names(&kw.alphabet)
        .into_iter()
        .map(|t| (t, random_measurement(&mut rng, n)))
        .collect();
    let desc = NqfaDescription {
        alphabet: kw.alphabet,
        states: kw.states,
        initial: kw.initial,
        partition: kw.partition,
        unitaries: kw.unitaries,
        measurements,
    };
    Ok(Nqfa::new(desc).expect("generated NQFA is valid"))
}

/// Random QFC: Haar unitaries, a random labeled observable `c0, c1, ...`
/// and a random complete control DFA with a random accepting set.
pub fn random_qfc(spec: &RandomSpec) -> Result<Qfc, RandomSpecError> {
    spec.check(1)?;
    let d = spec.control_states.unwrap_or(2);
    if d == 0 {
        return Err(RandomSpecError::EmptyControl);
    }
    let mut rng = spec.rng();
    let n = spec.states;
    let states = state_names("q", n);
    let alphabet = symbol_names(spec.alphabet);
    let unitaries = tape_names(&alphabet)
        .into_iter()
        .map(|t| (t, haar_unitary(&mut rng, n)))
        .collect();
    let projectors = random_measurement(&mut rng, n);
    let labels = state_names("c", projectors.len());
    let control_states = state_names("d", d);
    let mut transitions = Vec::with_capacity(d * labels.len());
    for from in &control_states {
        for label in &labels {
            let to = control_states[rng.random_range(0..d)].clone();
            transitions.push((from.clone(), label.clone(), to));
        }
    }
    let accepting = control_states
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .cloned()
        .collect();
    let desc = QfcDescription {
        alphabet,
        initial: states[0].clone(),
        states,
        unitaries,
        observable: labels.iter().cloned().zip(projectors).collect(),
        control: ControlDescription {
            alphabet: labels,
            start: control_states[0].clone(),
            states: control_states,
            accepting,
            transitions,
        },
    };
    Ok(Qfc::new(desc).expect("generated QFC is valid"))
}

/// Random GPFA with dyadic entries `k/4`, `k ∈ [-4, 4]`, so every entry
/// is exactly rational.
pub fn random_gpfa(spec: &RandomSpec) -> Result<Gpfa, RandomSpecError> {
    spec.check(1)?;
    let mut rng = spec.rng();
    Ok(random_rational_gpfa(&mut rng, spec.states, spec.alphabet))
}

/// Dyadic GPFA drawn from an existing generator (used by batch tests that
/// need many machines from one stream).
pub fn random_rational_gpfa<R: Rng + ?Sized>(rng: &mut R, states: usize, alphabet: usize) -> Gpfa {
    let mut entry = || f64::from(rng.random_range(-4i32..=4)) / 4.0;
    let initial: Vec<f64> = (0..states).map(|_| entry()).collect();
    let names = symbol_names(alphabet);
    let matrices = names
        .iter()
        .map(|s| {
            let rows = (0..states)
                .map(|_| (0..states).map(|_| entry()).collect())
                .collect();
            (s.clone(), rows)
        })
        .collect();
    let final_vector = (0..states).map(|_| entry()).collect();
    Gpfa::new(GpfaDescription {
        alphabet: names,
        initial,
        matrices,
        final_vector,
    })
    .expect("generated GPFA is valid")
}

/// Random composition of `8` into `n` parts, divided by 8.
fn eighths<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut counts = alloc::vec![0u32; n];
    for _ in 0..8 {
        counts[rng.random_range(0..n)] += 1;
    }
    counts.into_iter().map(|c| f64::from(c) / 8.0).collect()
}

/// Random PFA with stochastic rows in eighths and a random 0/1 final
/// vector.
pub fn random_pfa(spec: &RandomSpec) -> Result<Pfa, RandomSpecError> {
    spec.check(1)?;
    let mut rng = spec.rng();
    let n = spec.states;
    let initial = eighths(&mut rng, n);
    let names = symbol_names(spec.alphabet);
    let matrices = names
        .iter()
        .map(|s| (s.clone(), (0..n).map(|_| eighths(&mut rng, n)).collect()))
        .collect();
    let final_vector = (0..n)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 })
        .collect();
    Ok(Pfa::new(GpfaDescription {
        alphabet: names,
        initial,
        matrices,
        final_vector,
    })
    .expect("generated PFA is valid"))
}

pub fn random_automaton(kind: ModelKind, spec: &RandomSpec) -> Result<Automaton, RandomSpecError> {
    Ok(match kind {
        ModelKind::Nqfa => random_nqfa(spec)?.into(),
        ModelKind::Kwqfa => random_kwqfa(spec)?.into(),
        ModelKind::Qfc => random_qfc(spec)?.into(),
        ModelKind::Gpfa => random_gpfa(spec)?.into(),
        ModelKind::Pfa => random_pfa(spec)?.into(),
    })
}
