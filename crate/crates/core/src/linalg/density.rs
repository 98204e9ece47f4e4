use core::fmt;

use super::{hermitian_eigenvalues, ComplexMatrix};

/// Why a matrix fails to be a (sub-normalized) density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityDefect {
    NotSquare,
    NotHermitian { deviation: f64 },
    NotPositive { min_eigenvalue: f64 },
    TraceOutOfRange { trace: f64 },
}

impl fmt::Display for DensityDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotSquare => write!(f, "density matrix must be square"),
            Self::NotHermitian { deviation } => {
                write!(f, "not Hermitian (deviation {deviation:e})")
            }
            Self::NotPositive { min_eigenvalue } => {
                write!(
                    f,
                    "not positive semidefinite (eigenvalue {min_eigenvalue:e})"
                )
            }
            Self::TraceOutOfRange { trace } => write!(f, "trace {trace} outside [0, 1]"),
        }
    }
}

/// Hermitian, positive semidefinite matrix with trace in `[0, 1]`. A trace
/// below one is probability mass that has already halted.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityLikeMatrix {
    matrix: ComplexMatrix,
}

impl DensityLikeMatrix {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self, DensityDefect> {
        check(&matrix, tol)?;
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

fn check(m: &ComplexMatrix, tol: f64) -> Result<(), DensityDefect> {
    if !m.is_square() {
        return Err(DensityDefect::NotSquare);
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol {
        return Err(DensityDefect::NotHermitian { deviation });
    }
    let min_eigenvalue = hermitian_eigenvalues(m)[0];
    if min_eigenvalue < -tol {
        return Err(DensityDefect::NotPositive { min_eigenvalue });
    }
    let trace = m.trace().re;
    if !(-tol..=1.0 + tol).contains(&trace) {
        return Err(DensityDefect::TraceOutOfRange { trace });
    }
    Ok(())
}
