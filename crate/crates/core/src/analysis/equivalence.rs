//! Functional equivalence of GPFAs by spanning the reachable row-vector
//! space of their difference automaton.
//!
//! The difference automaton is the direct sum of both machines with
//! initial vector `(v₁, −v₂)` and final vector `(f₁, f₂)`, so its value on
//! `w` is `value₁(w) − value₂(w)`. The machines are equivalent iff every
//! reachable row vector is orthogonal to the final vector, and it suffices
//! to check a basis of the reachable space. Vectors are explored breadth
//! first and kept only when they raise the rank, so at most `s₁ + s₂`
//! vectors are kept and witnesses are shortest-first.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::rational::exact_rational;
use crate::models::{Gpfa, Word};

/// Relative pivot threshold for numeric rank decisions.
pub const TOL_RANK: f64 = 1e-8;

/// Numeric decision tolerance on `|value₁ − value₂|`, relative to
/// `max(1, |value₁|, |value₂|)`.
pub const TOL_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceMode {
    /// Rational arithmetic on the decimal values of the entries.
    Exact,
    /// Floating point with pivoted elimination at [`TOL_RANK`].
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquivalenceError {
    #[error("the two automata have different alphabets")]
    AlphabetMismatch,
    #[error("{which} automaton has entry {value:?}, which has no exact short decimal form")]
    NotRational { which: &'static str, value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// Shortest separating word found, present iff not equivalent.
    pub witness: Option<Word>,
    /// Largest `|value₁(w) − value₂(w)|` over the spanning words.
    pub max_observed_gap: f64,
    /// Threshold a gap must exceed to separate the machines (zero in
    /// exact mode, the absolute tolerance at the witness in numeric mode).
    pub tolerance: f64,
    /// Words whose vectors form the basis of the reachable space.
    pub spanning_words: Vec<Word>,
    /// Candidate vectors examined, bounded by `1 + rank · |Σ|`.
    pub candidates: usize,
}

impl EquivalenceVerdict {
    pub fn rank(&self) -> usize {
        self.spanning_words.len()
    }
}

pub fn gpfa_equivalent(
    g1: &Gpfa,
    g2: &Gpfa,
    mode: EquivalenceMode,
) -> Result<EquivalenceVerdict, EquivalenceError> {
    if g1.alphabet() != g2.alphabet() {
        return Err(EquivalenceError::AlphabetMismatch);
    }
    match mode {
        EquivalenceMode::Numeric => Ok(span::<f64>(&Pair::numeric(g1, g2))),
        EquivalenceMode::Exact => Ok(span::<BigRational>(&Pair::exact(g1, g2)?)),
    }
}

/// Scalar operations needed by the spanning loop.
trait Field: Clone {
    fn zero() -> Self;
    fn is_negligible(&self, scale: f64) -> bool;
    fn magnitude(&self) -> f64;
    fn sub_mul(&mut self, a: &Self, b: &Self);
    fn div(&self, d: &Self) -> Self;
    fn mul(&self, b: &Self) -> Self;
    fn add(&mut self, b: &Self);
    fn neg(&self) -> Self;
    /// Gap decision: `(separates, tolerance used)`.
    fn separates(gap: &Self, v1: &Self, v2: &Self) -> (bool, f64);
    /// Normalizes a candidate before elimination; `None` for the zero vector.
    fn normalize(x: &[Self]) -> Option<Vec<Self>>;
    /// Picks a pivot in a reduced vector, if it is independent.
    fn pivot(y: &[Self]) -> Option<usize>;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= scale
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn div(&self, d: &Self) -> Self {
        self / d
    }
    fn mul(&self, b: &Self) -> Self {
        self * b
    }
    fn add(&mut self, b: &Self) {
        *self += b;
    }
    fn neg(&self) -> Self {
        -self
    }
    fn separates(gap: &Self, v1: &Self, v2: &Self) -> (bool, f64) {
        let tol = TOL_GAP * v1.abs().max(v2.abs()).max(1.0);
        (gap.abs() > tol, tol)
    }
    fn normalize(x: &[Self]) -> Option<Vec<Self>> {
        let m = x.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        (m > 0.0).then(|| x.iter().map(|v| v / m).collect())
    }
    fn pivot(y: &[Self]) -> Option<usize> {
        let (i, m) = y.iter().enumerate().fold((0, 0.0f64), |(bi, bm), (i, v)| {
            if v.abs() > bm {
                (i, v.abs())
            } else {
                (bi, bm)
            }
        });
        (m > TOL_RANK).then_some(i)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn div(&self, d: &Self) -> Self {
        self / d
    }
    fn mul(&self, b: &Self) -> Self {
        self * b
    }
    fn add(&mut self, b: &Self) {
        *self += b;
    }
    fn neg(&self) -> Self {
        -self
    }
    fn separates(gap: &Self, _v1: &Self, _v2: &Self) -> (bool, f64) {
        (!gap.is_zero(), 0.0)
    }
    fn normalize(x: &[Self]) -> Option<Vec<Self>> {
        x.iter().any(|v| !v.is_zero()).then(|| x.to_vec())
    }
    fn pivot(y: &[Self]) -> Option<usize> {
        y.iter().position(|v| !v.is_zero())
    }
}

type Rows<T> = Vec<Vec<T>>;

/// Difference automaton in a chosen scalar type.
struct Pair<T> {
    split: usize,
    initial: Vec<T>,
    final_vector: Vec<T>,
    /// Per symbol, the two blocks of the direct sum.
    matrices: Vec<(Rows<T>, Rows<T>)>,
}

impl Pair<f64> {
    fn numeric(g1: &Gpfa, g2: &Gpfa) -> Self {
        let rows = |g: &Gpfa, s: usize| g.matrix(s).to_rows();
        Pair {
            split: g1.state_count(),
            initial: g1
                .initial()
                .iter()
                .copied()
                .chain(g2.initial().iter().map(|x| -x))
                .collect(),
            final_vector: g1
                .final_vector()
                .iter()
                .chain(g2.final_vector())
                .copied()
                .collect(),
            matrices: (0..g1.alphabet().len())
                .map(|s| (rows(g1, s), rows(g2, s)))
                .collect(),
        }
    }
}

impl Pair<BigRational> {
    fn exact(g1: &Gpfa, g2: &Gpfa) -> Result<Self, EquivalenceError> {
        fn conv(which: &'static str, xs: &[f64]) -> Result<Vec<BigRational>, EquivalenceError> {
            xs.iter()
                .map(|&value| {
                    exact_rational(value).ok_or(EquivalenceError::NotRational { which, value })
                })
                .collect()
        }
        fn conv_rows(
            which: &'static str,
            g: &Gpfa,
            s: usize,
        ) -> Result<Vec<Vec<BigRational>>, EquivalenceError> {
            g.matrix(s)
                .to_rows()
                .iter()
                .map(|r| conv(which, r))
                .collect()
        }
        let mut initial = conv("first", g1.initial())?;
        initial.extend(conv("second", g2.initial())?.into_iter().map(|x| -x));
        let mut final_vector = conv("first", g1.final_vector())?;
        final_vector.extend(conv("second", g2.final_vector())?);
        let matrices = (0..g1.alphabet().len())
            .map(|s| Ok((conv_rows("first", g1, s)?, conv_rows("second", g2, s)?)))
            .collect::<Result<_, EquivalenceError>>()?;
        Ok(Pair {
            split: g1.state_count(),
            initial,
            final_vector,
            matrices,
        })
    }
}

impl<T: Field> Pair<T> {
    fn step(&self, x: &[T], symbol: usize) -> Vec<T> {
        let (a1, a2) = &self.matrices[symbol];
        let mut out = Vec::with_capacity(x.len());
        out.extend(block_left_mul(&x[..self.split], a1));
        out.extend(block_left_mul(&x[self.split..], a2));
        out
    }

    /// `(value₁, value₂)` read off a difference-automaton vector.
    fn values(&self, x: &[T]) -> (T, T) {
        let mut v1 = T::zero();
        let mut v2 = T::zero();
        for (i, (xi, fi)) in x.iter().zip(&self.final_vector).enumerate() {
            if i < self.split {
                v1.add(&xi.mul(fi));
            } else {
                v2.add(&xi.mul(fi).neg());
            }
        }
        (v1, v2)
    }
}

fn block_left_mul<T: Field>(x: &[T], rows: &[Vec<T>]) -> Vec<T> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut out = alloc::vec![T::zero(); cols];
    for (xi, row) in x.iter().zip(rows) {
        if xi.is_negligible(0.0) {
            continue;
        }
        for (o, a) in out.iter_mut().zip(row) {
            o.add(&xi.mul(a));
        }
    }
    out
}

fn span<T: Field>(pair: &Pair<T>) -> EquivalenceVerdict {
    let dim = pair.initial.len();
    let symbols = pair.matrices.len();
    // Echelon rows with their pivot; each row is 1 at its pivot and 0 at
    // every earlier row's pivot.
    let mut echelon: Vec<(Vec<T>, usize)> = Vec::new();
    let mut spanning_words = Vec::new();
    let mut witness: Option<Word> = None;
    let mut tolerance = 0.0;
    let mut max_gap: f64 = 0.0;
    let mut candidates = 0;
    let mut queue: VecDeque<(Vec<T>, Word)> = VecDeque::new();
    queue.push_back((pair.initial.clone(), Word::empty()));

    while let Some((x, w)) = queue.pop_front() {
        candidates += 1;
        let Some(mut y) = T::normalize(&x) else {
            continue;
        };
        for (row, p) in &echelon {
            let factor = y[*p].clone();
            if factor.is_negligible(0.0) {
                continue;
            }
            for (yi, ri) in y.iter_mut().zip(row) {
                yi.sub_mul(&factor, ri);
            }
        }
        let Some(p) = T::pivot(&y) else { continue };
        let pivot_value = y[p].clone();
        echelon.push((y.iter().map(|v| v.div(&pivot_value)).collect(), p));
        assert!(echelon.len() <= dim, "rank exceeded the state count");

        let (v1, v2) = pair.values(&x);
        let mut gap = v1.clone();
        gap.add(&v2.neg());
        max_gap = max_gap.max(gap.magnitude());
        let (separates, tol) = T::separates(&gap, &v1, &v2);
        if separates && witness.is_none() {
            witness = Some(w.clone());
            tolerance = tol;
        }
        for s in 0..symbols {
            let mut next = w.clone();
            next.push(s);
            queue.push_back((pair.step(&x, s), next));
        }
        spanning_words.push(w);
    }
    if witness.is_none() {
        tolerance = T::separates(&T::zero(), &T::zero(), &T::zero()).1;
    }
    EquivalenceVerdict {
        equivalent: witness.is_none(),
        witness,
        max_observed_gap: max_gap,
        tolerance,
        spanning_words,
        candidates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::RealMatrix;
    use crate::sim::run_gpfa;
    use alloc::vec;

    fn scaled_final(g: &Gpfa, factor: f64) -> Gpfa {
        Gpfa::from_parts(
            g.alphabet().clone(),
            g.initial().to_vec(),
            g.matrices().to_vec(),
            g.final_vector().iter().map(|x| x * factor).collect(),
        )
    }

    #[test]
    fn machine_is_equivalent_to_itself() {
        let b = fixtures::binary_expansion_pfa().into_gpfa();
        for mode in [EquivalenceMode::Exact, EquivalenceMode::Numeric] {
            let v = gpfa_equivalent(&b, &b, mode).unwrap();
            assert!(v.equivalent);
            assert!(v.witness.is_none());
            assert_eq!(v.max_observed_gap, 0.0);
        }
    }

    #[test]
    fn scaled_final_vector_is_separated_at_one() {
        let b = fixtures::binary_expansion_pfa().into_gpfa();
        let b2 = scaled_final(&b, 2.0);
        for mode in [EquivalenceMode::Exact, EquivalenceMode::Numeric] {
            let v = gpfa_equivalent(&b, &b2, mode).unwrap();
            assert!(!v.equivalent);
            let w = v.witness.unwrap();
            assert_eq!(b.alphabet().format_word(&w), "1");
            let gap = (run_gpfa(&b, &w).unwrap() - run_gpfa(&b2, &w).unwrap()).abs();
            assert_eq!(gap, 0.5);
            assert!(gap > v.tolerance);
        }
    }

    #[test]
    fn similarity_transform_is_equivalent() {
        let b = fixtures::binary_expansion_pfa().into_gpfa();
        // S unit upper triangular with an integer inverse.
        let s = RealMatrix::from_rows(vec![
            vec![1.0, 2.0, -1.0],
            vec![0.0, 1.0, 3.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let s_inv = RealMatrix::from_rows(vec![
            vec![1.0, -2.0, 7.0],
            vec![0.0, 1.0, -3.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(&s * &s_inv, RealMatrix::identity(3));
        let conj = Gpfa::from_parts(
            b.alphabet().clone(),
            s_inv.left_mul(b.initial()),
            b.matrices().iter().map(|a| &(&s * a) * &s_inv).collect(),
            s.right_mul(b.final_vector()),
        );
        for mode in [EquivalenceMode::Exact, EquivalenceMode::Numeric] {
            let v = gpfa_equivalent(&b, &conj, mode).unwrap();
            assert!(v.equivalent, "{mode:?}");
            assert!(v.rank() <= 6);
            assert!(v.candidates <= 1 + v.rank() * 2);
        }
    }

    #[test]
    fn exact_mode_refuses_irrational_entries() {
        let g = crate::convert::nqfa_to_gpfa(fixtures::rotation_kwqfa(0.5).as_nqfa());
        assert!(matches!(
            gpfa_equivalent(&g, &g, EquivalenceMode::Exact),
            Err(EquivalenceError::NotRational { .. })
        ));
        assert!(
            gpfa_equivalent(&g, &g, EquivalenceMode::Numeric)
                .unwrap()
                .equivalent
        );
    }

    #[test]
    fn alphabet_mismatch() {
        let b = fixtures::binary_expansion_pfa().into_gpfa();
        let g = crate::convert::nqfa_to_gpfa(fixtures::rotation_kwqfa(0.5).as_nqfa());
        assert_eq!(
            gpfa_equivalent(&b, &g, EquivalenceMode::Numeric),
            Err(EquivalenceError::AlphabetMismatch)
        );
    }
}
