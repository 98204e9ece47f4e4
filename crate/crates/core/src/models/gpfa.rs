use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{index_entries, Alphabet, ModelError, Violation};
use crate::linalg::{RealMatrix, TOL_VALID};

/// Raw description of a generalized (or ordinary) probabilistic automaton.
#[derive(Debug, Clone, PartialEq)]
pub struct GpfaDescription {
    pub alphabet: Vec<String>,
    pub initial: Vec<f64>,
    pub matrices: Vec<(String, Vec<Vec<f64>>)>,
    pub final_vector: Vec<f64>,
}

/// Generalized probabilistic finite automaton over `Σ` (marker-free):
/// `value(w) = v · A_{w_1} ··· A_{w_m} · f` with arbitrary real entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Gpfa {
    alphabet: Alphabet,
    initial: Vec<f64>,
    matrices: Vec<RealMatrix>,
    final_vector: Vec<f64>,
}

/// Probabilistic finite automaton: a [`Gpfa`] with a distribution as
/// initial vector, row-stochastic matrices and a 0/1 final vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Pfa {
    inner: Gpfa,
}

impl Gpfa {
    pub fn new(desc: GpfaDescription) -> Result<Self, ModelError> {
        let mut violations = Vec::new();
        let alphabet = match Alphabet::new(desc.alphabet.iter().cloned()) {
            Ok(a) => Some(a),
            Err(v) => {
                violations.extend(v);
                None
            }
        };
        let s = desc.initial.len();
        if s == 0 {
            violations.push(Violation::EmptyVector { field: "initial" });
        }
        if desc.initial.iter().any(|x| !x.is_finite()) {
            violations.push(Violation::NonFinite {
                field: "initial".into(),
            });
        }
        if desc.final_vector.len() != s {
            violations.push(Violation::WrongDimension {
                field: "final".into(),
                expected: s,
                found: desc.final_vector.len(),
            });
        }
        if desc.final_vector.iter().any(|x| !x.is_finite()) {
            violations.push(Violation::NonFinite {
                field: "final".into(),
            });
        }
        let mut matrices = Vec::new();
        if let Some(alphabet) = &alphabet {
            let names: Vec<&str> = alphabet.symbols().iter().map(String::as_str).collect();
            let slots = index_entries("matrices", &names, &desc.matrices, &mut violations);
            for (name, slot) in names.iter().zip(slots) {
                let Some(rows) = slot else { continue };
                let field = format!("matrices.{name}");
                if rows.len() != s {
                    violations.push(Violation::WrongDimension {
                        field,
                        expected: s,
                        found: rows.len(),
                    });
                    continue;
                }
                if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != s) {
                    violations.push(Violation::WrongDimension {
                        field: format!("{field}[{i}]"),
                        expected: s,
                        found: r.len(),
                    });
                    continue;
                }
                if s == 0 {
                    continue;
                }
                match RealMatrix::from_rows(rows.clone()) {
                    Ok(m) => matrices.push(m),
                    Err(_) => violations.push(Violation::NonFinite { field }),
                }
            }
        }
        ModelError::check(violations)?;
        Ok(Self {
            alphabet: alphabet.expect("checked"),
            initial: desc.initial,
            matrices,
            final_vector: desc.final_vector,
        })
    }

    /// Assembles a GPFA from parts produced by a converter. Panics if the
    /// dimensions are inconsistent.
    pub fn from_parts(
        alphabet: Alphabet,
        initial: Vec<f64>,
        matrices: Vec<RealMatrix>,
        final_vector: Vec<f64>,
    ) -> Self {
        let s = initial.len();
        assert!(s > 0 && final_vector.len() == s);
        assert_eq!(matrices.len(), alphabet.len());
        assert!(matrices.iter().all(|m| m.rows() == s && m.cols() == s));
        Self {
            alphabet,
            initial,
            matrices,
            final_vector,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.initial.len()
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn matrix(&self, symbol: usize) -> &RealMatrix {
        &self.matrices[symbol]
    }

    pub fn matrices(&self) -> &[RealMatrix] {
        &self.matrices
    }

    pub fn final_vector(&self) -> &[f64] {
        &self.final_vector
    }

    pub fn to_description(&self) -> GpfaDescription {
        GpfaDescription {
            alphabet: self.alphabet.symbols().to_vec(),
            initial: self.initial.clone(),
            matrices: self
                .alphabet
                .symbols()
                .iter()
                .cloned()
                .zip(self.matrices.iter().map(RealMatrix::to_rows))
                .collect(),
            final_vector: self.final_vector.clone(),
        }
    }
}

impl Pfa {
    pub fn new(desc: GpfaDescription) -> Result<Self, ModelError> {
        Self::from_gpfa(Gpfa::new(desc)?)
    }

    /// Checks the stochastic restrictions on an existing GPFA.
    pub fn from_gpfa(g: Gpfa) -> Result<Self, ModelError> {
        let mut violations = Vec::new();
        if g.initial.iter().any(|&x| x < 0.0) {
            violations.push(Violation::NegativeEntry {
                field: "initial".into(),
            });
        }
        let sum: f64 = g.initial.iter().sum();
        if (sum - 1.0).abs() > TOL_VALID {
            violations.push(Violation::NotDistribution { sum });
        }
        for (k, m) in g.matrices.iter().enumerate() {
            let symbol = g.alphabet.symbol(k);
            for i in 0..m.rows() {
                let row = m.row(i);
                if row.iter().any(|&x| x < 0.0) {
                    violations.push(Violation::NegativeEntry {
                        field: format!("matrices.{symbol}[{i}]"),
                    });
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > TOL_VALID {
                    violations.push(Violation::RowSum {
                        symbol: symbol.into(),
                        row: i,
                        sum,
                    });
                }
            }
        }
        for (index, &value) in g.final_vector.iter().enumerate() {
            if value != 0.0 && value != 1.0 {
                violations.push(Violation::NotIndicator { index, value });
            }
        }
        ModelError::check(violations)?;
        Ok(Self { inner: g })
    }

    pub fn as_gpfa(&self) -> &Gpfa {
        &self.inner
    }

    pub fn into_gpfa(self) -> Gpfa {
        self.inner
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    pub fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    pub fn to_description(&self) -> GpfaDescription {
        self.inner.to_description()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn one_state_halving_automaton() {
        let g = Gpfa::new(GpfaDescription {
            alphabet: vec!["a".into()],
            initial: vec![1.0],
            matrices: vec![("a".into(), vec![vec![0.5]])],
            final_vector: vec![1.0],
        })
        .unwrap();
        assert_eq!(g.state_count(), 1);
        assert_eq!(Gpfa::new(g.to_description()).unwrap(), g);
    }

    #[test]
    fn dimension_errors_are_collected() {
        let err = Gpfa::new(GpfaDescription {
            alphabet: vec!["a".into(), "b".into()],
            initial: vec![1.0, 0.0],
            matrices: vec![
                ("a".into(), vec![vec![1.0, 0.0]]),
                ("c".into(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]),
            ],
            final_vector: vec![1.0],
        })
        .unwrap_err();
        let paths: Vec<String> = err.violations.iter().map(Violation::path).collect();
        assert_eq!(
            paths,
            vec!["final", "matrices.c", "matrices.b", "matrices.a"]
        );
    }

    #[test]
    fn pfa_row_sum_names_row_and_symbol() {
        let err = Pfa::new(GpfaDescription {
            alphabet: vec!["a".into()],
            initial: vec![1.0, 0.0],
            matrices: vec![("a".into(), vec![vec![0.5, 0.4], vec![0.0, 1.0]])],
            final_vector: vec![0.0, 1.0],
        })
        .unwrap_err();
        assert_eq!(err.violations.len(), 1);
        assert_eq!(err.violations[0].path(), "matrices.a[0]");
        assert_eq!(
            err.violations[0].to_string(),
            "row 0 of A_a sums to 0.9, not 1"
        );
    }

    #[test]
    fn pfa_checks_initial_and_final() {
        let err = Pfa::new(GpfaDescription {
            alphabet: vec!["a".into()],
            initial: vec![0.7, 0.7],
            matrices: vec![("a".into(), vec![vec![1.0, 0.0], vec![0.0, 1.0]])],
            final_vector: vec![0.5, 1.0],
        })
        .unwrap_err();
        assert_eq!(
            err.violations,
            vec![
                Violation::NotDistribution { sum: 1.4 },
                Violation::NotIndicator {
                    index: 0,
                    value: 0.5
                }
            ]
        );
    }
}
