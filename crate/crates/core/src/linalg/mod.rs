//! Dense complex and real matrix kernel.
//!
//! Automata handled here have at most a few hundred states, so every
//! matrix is stored densely in row-major order.

mod basis;
mod density;
mod eigen;
mod projector;
mod qr;
mod real;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

pub use basis::{devectorize, hermitian_basis, vectorize, HermitianBasis};
pub use density::{DensityDefect, DensityLikeMatrix};
pub use eigen::{hermitian_eigenvalues, symmetric_eigenvalues};
pub use projector::{
    projector_defects, validate_projector_family, FamilyError, ProjectorDefect, ProjectorFamily,
};
pub use qr::householder_qr;
pub use real::RealMatrix;

/// Tolerance for structural validation (unitarity, projector algebra,
/// hermiticity, positivity).
pub const TOL_VALID: f64 = 1e-10;

/// Tolerance for round-trip identities such as `devectorize ∘ vectorize`.
pub const TOL_ROUNDTRIP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix dimensions must be positive")]
    ZeroDimension,
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("a projector family needs at least one projector")]
    EmptyFamily,
    #[error("{labels} labels given for {projectors} projectors")]
    LabelCount { labels: usize, projectors: usize },
    #[error("basis dimension must be at least 1")]
    ZeroBasis,
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// short buffers and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::ZeroDimension);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LinalgError::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(LinalgError::RaggedRows {
                    row: i,
                    expected: n_cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Self::from_vec(n_rows, n_cols, data)
    }

    /// Convenience constructor for real-valued matrices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|ψ⟩⟨ψ|`
    pub fn outer(psi: &[Complex64]) -> Self {
        let n = psi.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    /// Orthogonal projector onto the span of the given coordinate vectors.
    pub fn coordinate_projector(n: usize, indices: &[usize]) -> Self {
        let mut m = Self::zeros(n, n);
        for &i in indices {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_ij |a_ij − b_ij|`; panics on a shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.assert_same_shape(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Hilbert–Schmidt inner product `trace(self† · other)`.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        self.assert_same_shape(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Deviation from hermiticity, `max_ij |a_ij − conj(a_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(A + A†) / 2`
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut out = self + &adj;
        out.data.iter_mut().for_each(|z| *z *= 0.5);
        out
    }

    /// `U · self · U†`
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// `P · self · P` for a Hermitian `P`.
    pub fn sandwich(&self, p: &Self) -> Self {
        &(p * self) * p
    }

    /// `Π · self · Π` where `Π` projects onto the listed coordinates;
    /// every other row and column is zeroed.
    pub fn restrict_to(&self, keep: &[bool]) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !(keep[i] && keep[j]) {
                    out[(i, j)] = Complex64::zero();
                }
            }
        }
        out
    }

    /// Sum of the diagonal entries whose index is flagged, i.e.
    /// `trace(Π · self · Π)` for a coordinate projector `Π`.
    pub fn partial_trace_on(&self, keep: &[bool]) -> f64 {
        (0..self.rows)
            .filter(|&i| keep[i])
            .map(|i| self[(i, i)].re)
            .sum()
    }

    pub fn mul_vector(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn assert_same_shape(&self, other: &Self) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl core::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// True iff `‖m†m − I‖_max ≤ tol`.
pub fn validate_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool, LinalgError> {
    Ok(unitarity_defect(m)? <= tol)
}

/// `‖m†m − I‖_max`
pub fn unitarity_defect(m: &ComplexMatrix) -> Result<f64, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let gram = &m.adjoint() * m;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(m.rows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn identity_is_unitary() {
        assert!(validate_unitary(&ComplexMatrix::identity(3), 1e-10).unwrap());
    }

    #[test]
    fn quarter_rotation_is_unitary() {
        let h = FRAC_1_SQRT_2;
        let r = ComplexMatrix::from_real_rows(&[&[h, -h], &[h, h]]).unwrap();
        // r†r computed by hand: columns are orthonormal.
        assert!(unitarity_defect(&r).unwrap() < 1e-15);
        assert!(validate_unitary(&r, 1e-10).unwrap());
    }

    #[test]
    fn stretched_diagonal_is_not_unitary() {
        let d = ComplexMatrix::from_diagonal(&[1.0, 2.0]);
        assert!(!validate_unitary(&d, 1e-10).unwrap());
    }

    #[test]
    fn non_square_is_a_dimension_error() {
        let m = ComplexMatrix::zeros(2, 3);
        assert_eq!(
            validate_unitary(&m, 1e-10),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert_eq!(
            ComplexMatrix::from_vec(0, 1, vec![]),
            Err(LinalgError::ZeroDimension)
        );
        assert_eq!(
            ComplexMatrix::from_vec(2, 2, vec![Complex64::zero(); 3]),
            Err(LinalgError::LengthMismatch {
                expected: 4,
                found: 3
            })
        );
        let mut data = vec![Complex64::zero(); 4];
        data[3] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(
            ComplexMatrix::from_vec(2, 2, data),
            Err(LinalgError::NonFinite { row: 1, col: 1 })
        );
        assert!(matches!(
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0]]),
            Err(LinalgError::RaggedRows { row: 1, .. })
        ));
    }

    #[test]
    fn restriction_matches_projector_sandwich() {
        let psi = [
            Complex64::new(0.5, 0.1),
            Complex64::new(-0.3, 0.4),
            Complex64::new(0.2, -0.6),
        ];
        let rho = ComplexMatrix::outer(&psi);
        let p = ComplexMatrix::coordinate_projector(3, &[0, 2]);
        let keep = [true, false, true];
        assert!(rho.sandwich(&p).max_abs_diff(&rho.restrict_to(&keep)) < 1e-15);
        assert!((rho.sandwich(&p).trace().re - rho.partial_trace_on(&keep)).abs() < 1e-15);
    }
}
