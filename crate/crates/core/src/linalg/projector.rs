use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use super::{ComplexMatrix, LinalgError};

/// A single broken projective-measurement invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectorDefect {
    NotHermitian { index: usize },
    NotIdempotent { index: usize },
    NotOrthogonal { first: usize, second: usize },
    Incomplete,
}

impl fmt::Display for ProjectorDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotHermitian { index } => write!(f, "projector {index} is not Hermitian"),
            Self::NotIdempotent { index } => write!(f, "projector {index} is not idempotent"),
            Self::NotOrthogonal { first, second } => {
                write!(f, "projectors {first} and {second} are not orthogonal")
            }
            Self::Incomplete => write!(f, "projectors do not sum to identity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Shape(#[from] LinalgError),
    #[error("invalid projective measurement ({} defects)", .0.len())]
    Defects(Vec<ProjectorDefect>),
}

/// Checks the shapes of a candidate family and returns the common dimension.
fn family_dimension(projectors: &[ComplexMatrix]) -> Result<usize, LinalgError> {
    let first = projectors.first().ok_or(LinalgError::EmptyFamily)?;
    let n = first.rows();
    for p in projectors {
        if !p.is_square() {
            return Err(LinalgError::NotSquare {
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        if p.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: p.rows(),
            });
        }
    }
    Ok(n)
}

/// Lists every violated projective-measurement invariant at `tol`.
pub fn projector_defects(
    projectors: &[ComplexMatrix],
    tol: f64,
) -> Result<Vec<ProjectorDefect>, LinalgError> {
    let n = family_dimension(projectors)?;
    let mut defects = Vec::new();
    let mut sum = ComplexMatrix::zeros(n, n);
    for (i, p) in projectors.iter().enumerate() {
        if p.hermitian_deviation() > tol {
            defects.push(ProjectorDefect::NotHermitian { index: i });
        }
        if (p * p).max_abs_diff(p) > tol {
            defects.push(ProjectorDefect::NotIdempotent { index: i });
        }
        sum = &sum + p;
    }
    for i in 0..projectors.len() {
        for j in i + 1..projectors.len() {
            let overlap = (&projectors[i] * &projectors[j])
                .max_abs()
                .max((&projectors[j] * &projectors[i]).max_abs());
            if overlap > tol {
                defects.push(ProjectorDefect::NotOrthogonal {
                    first: i,
                    second: j,
                });
            }
        }
    }
    if sum.max_abs_diff(&ComplexMatrix::identity(n)) > tol {
        defects.push(ProjectorDefect::Incomplete);
    }
    Ok(defects)
}

/// True iff the family is Hermitian, idempotent, mutually orthogonal and
/// complete, each within `tol` in the max-entry norm.
pub fn validate_projector_family(
    projectors: &[ComplexMatrix],
    tol: f64,
) -> Result<bool, LinalgError> {
    Ok(projector_defects(projectors, tol)?.is_empty())
}

/// A complete projective measurement `P_1, …, P_k` on an `n`-dimensional
/// space, optionally with one outcome label per projector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorFamily {
    dimension: usize,
    projectors: Vec<ComplexMatrix>,
    labels: Option<Vec<String>>,
}

impl ProjectorFamily {
    pub fn new(
        projectors: Vec<ComplexMatrix>,
        labels: Option<Vec<String>>,
        tol: f64,
    ) -> Result<Self, FamilyError> {
        let dimension = family_dimension(&projectors)?;
        if let Some(labels) = &labels {
            if labels.len() != projectors.len() {
                return Err(LinalgError::LabelCount {
                    labels: labels.len(),
                    projectors: projectors.len(),
                }
                .into());
            }
        }
        let defects = projector_defects(&projectors, tol)?;
        if !defects.is_empty() {
            return Err(FamilyError::Defects(defects));
        }
        Ok(Self {
            dimension,
            projectors,
            labels,
        })
    }

    /// The trivial measurement `{I}`.
    pub fn identity(n: usize) -> Self {
        Self {
            dimension: n,
            projectors: vec![ComplexMatrix::identity(n)],
            labels: None,
        }
    }

    /// Coordinate projectors onto the given disjoint index blocks. The
    /// blocks must partition `0..n`.
    pub fn coordinate_blocks(n: usize, blocks: &[Vec<usize>]) -> Self {
        let projectors: Vec<_> = blocks
            .iter()
            .map(|b| ComplexMatrix::coordinate_projector(n, b))
            .collect();
        debug_assert!(validate_projector_family(&projectors, 1e-12).unwrap_or(false));
        Self {
            dimension: n,
            projectors,
            labels: None,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn validate(&self, tol: f64) -> bool {
        validate_projector_family(&self.projectors, tol).unwrap_or(false)
    }

    /// True when the family is exactly `{I}` up to `tol`.
    pub fn is_identity(&self, tol: f64) -> bool {
        self.projectors.len() == 1
            && self.projectors[0].max_abs_diff(&ComplexMatrix::identity(self.dimension)) <= tol
    }

    /// Non-selective measurement `ρ ↦ Σ_j P_j ρ P_j`.
    pub fn dephase(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        if self.projectors.len() == 1 {
            return rho.sandwich(&self.projectors[0]);
        }
        let mut out = ComplexMatrix::zeros(self.dimension, self.dimension);
        for p in &self.projectors {
            out = &out + &rho.sandwich(p);
        }
        out
    }
}
