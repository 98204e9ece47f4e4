//! Orthonormal Hermitian basis (normalized generalized Gell-Mann matrices)
//! and the real coordinate map it induces on Hermitian matrices.

use alloc::vec::Vec;

// Float math for no_std builds; shadowed by inherent methods whenever std
// is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, TOL_VALID};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Element {
    /// `I / √n`
    Identity,
    /// `(E_jk + E_kj) / √2`, `j < k`
    Symmetric(usize, usize),
    /// `(−i E_jk + i E_kj) / √2`, `j < k`
    Antisymmetric(usize, usize),
    /// `(Σ_{m<l} E_mm − l E_ll) / √(l(l+1))`, `1 ≤ l < n`
    Diagonal(usize),
}

/// Orthonormal basis of the `n²`-dimensional real space of Hermitian
/// `n × n` matrices under `⟨A, B⟩ = trace(A† B)`.
///
/// Ordering: `I/√n`, then the symmetric off-diagonal elements for each
/// pair `j < k` in lexicographic order, then the antisymmetric ones in the
/// same order, then the traceless diagonal elements. Only the first
/// element has non-zero trace, so `trace(h) = √n · coordinate_0(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBasis {
    n: usize,
    layout: Vec<Element>,
    elements: Vec<ComplexMatrix>,
}

/// Builds the normalized generalized Gell-Mann basis for dimension `n`.
pub fn hermitian_basis(n: usize) -> Result<HermitianBasis, LinalgError> {
    if n == 0 {
        return Err(LinalgError::ZeroBasis);
    }
    let mut layout = Vec::with_capacity(n * n);
    layout.push(Element::Identity);
    for j in 0..n {
        for k in j + 1..n {
            layout.push(Element::Symmetric(j, k));
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            layout.push(Element::Antisymmetric(j, k));
        }
    }
    layout.extend((1..n).map(Element::Diagonal));
    let elements = layout.iter().map(|&e| materialize(n, e)).collect();
    Ok(HermitianBasis {
        n,
        layout,
        elements,
    })
}

fn materialize(n: usize, e: Element) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    let r = core::f64::consts::FRAC_1_SQRT_2;
    match e {
        Element::Identity => {
            let d = 1.0 / (n as f64).sqrt();
            for i in 0..n {
                m[(i, i)] = Complex64::new(d, 0.0);
            }
        }
        Element::Symmetric(j, k) => {
            m[(j, k)] = Complex64::new(r, 0.0);
            m[(k, j)] = Complex64::new(r, 0.0);
        }
        Element::Antisymmetric(j, k) => {
            m[(j, k)] = Complex64::new(0.0, -r);
            m[(k, j)] = Complex64::new(0.0, r);
        }
        Element::Diagonal(l) => {
            let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
            for i in 0..l {
                m[(i, i)] = Complex64::new(norm, 0.0);
            }
            m[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        }
    }
    m
}

impl HermitianBasis {
    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Number of basis elements, `n²`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Traces of the basis elements: `√n` for the first, zero otherwise.
    pub fn traces(&self) -> Vec<f64> {
        let mut t = alloc::vec![0.0; self.len()];
        t[0] = (self.n as f64).sqrt();
        t
    }

    /// Complex coordinates `⟨E_i, h⟩` for any square `h`. For Hermitian
    /// input every imaginary part vanishes; the caller can inspect them.
    pub fn coordinates(&self, h: &ComplexMatrix) -> Result<Vec<Complex64>, LinalgError> {
        self.check_shape(h)?;
        let n = self.n;
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let i_unit = Complex64::new(0.0, 1.0);
        Ok(self
            .layout
            .iter()
            .map(|&e| match e {
                Element::Identity => h.trace() / (n as f64).sqrt(),
                Element::Symmetric(j, k) => (h[(j, k)] + h[(k, j)]) * r,
                Element::Antisymmetric(j, k) => i_unit * (h[(j, k)] - h[(k, j)]) * r,
                Element::Diagonal(l) => {
                    let head: Complex64 = (0..l).map(|m| h[(m, m)]).sum();
                    (head - h[(l, l)] * l as f64) / ((l * (l + 1)) as f64).sqrt()
                }
            })
            .collect())
    }

    /// `Σ_i v_i E_i`
    pub fn combine(&self, v: &[f64]) -> Result<ComplexMatrix, LinalgError> {
        if v.len() != self.len() {
            return Err(LinalgError::LengthMismatch {
                expected: self.len(),
                found: v.len(),
            });
        }
        let n = self.n;
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let mut m = ComplexMatrix::zeros(n, n);
        for (&e, &c) in self.layout.iter().zip(v) {
            match e {
                Element::Identity => {
                    let d = c / (n as f64).sqrt();
                    for i in 0..n {
                        m[(i, i)].re += d;
                    }
                }
                Element::Symmetric(j, k) => {
                    m[(j, k)].re += c * r;
                    m[(k, j)].re += c * r;
                }
                Element::Antisymmetric(j, k) => {
                    m[(j, k)].im -= c * r;
                    m[(k, j)].im += c * r;
                }
                Element::Diagonal(l) => {
                    let norm = c / ((l * (l + 1)) as f64).sqrt();
                    for i in 0..l {
                        m[(i, i)].re += norm;
                    }
                    m[(l, l)].re -= l as f64 * norm;
                }
            }
        }
        Ok(m)
    }

    fn check_shape(&self, h: &ComplexMatrix) -> Result<(), LinalgError> {
        if !h.is_square() {
            return Err(LinalgError::NotSquare {
                rows: h.rows(),
                cols: h.cols(),
            });
        }
        if h.rows() != self.n {
            return Err(LinalgError::DimensionMismatch {
                expected: self.n,
                found: h.rows(),
            });
        }
        Ok(())
    }
}

/// Real coordinates of a Hermitian matrix in `basis`.
pub fn vectorize(h: &ComplexMatrix, basis: &HermitianBasis) -> Result<Vec<f64>, LinalgError> {
    basis.check_shape(h)?;
    let deviation = h.hermitian_deviation();
    if deviation > TOL_VALID {
        return Err(LinalgError::NotHermitian { deviation });
    }
    Ok(basis.coordinates(h)?.into_iter().map(|z| z.re).collect())
}

/// Inverse of [`vectorize`]: `Σ_i v_i E_i`.
pub fn devectorize(v: &[f64], basis: &HermitianBasis) -> Result<ComplexMatrix, LinalgError> {
    basis.combine(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pauli() -> [ComplexMatrix; 3] {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        [
            ComplexMatrix::from_rows(vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]])
                .unwrap(),
            ComplexMatrix::from_rows(vec![
                vec![c(0., 0.), c(0., -1.)],
                vec![c(0., 1.), c(0., 0.)],
            ])
            .unwrap(),
            ComplexMatrix::from_diagonal(&[1.0, -1.0]),
        ]
    }

    #[test]
    fn dimension_one_is_the_unit_matrix() {
        let b = hermitian_basis(1).unwrap();
        assert_eq!(b.elements(), &[ComplexMatrix::identity(1)]);
    }

    #[test]
    fn dimension_zero_is_rejected() {
        assert_eq!(hermitian_basis(0), Err(LinalgError::ZeroBasis));
    }

    #[test]
    fn dimension_two_is_scaled_pauli() {
        let b = hermitian_basis(2).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let expected: Vec<ComplexMatrix> = core::iter::once(ComplexMatrix::identity(2))
            .chain(pauli())
            .map(|m| m.scale(Complex64::new(s, 0.0)))
            .collect();
        for (got, want) in b.elements().iter().zip(&expected) {
            assert!(got.max_abs_diff(want) < 1e-15);
        }
        for (i, a) in b.elements().iter().enumerate() {
            for (j, c) in b.elements().iter().enumerate() {
                let ip = a.hs_inner(c);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).norm() < 1e-15, "<E{i},E{j}> = {ip}");
            }
        }
    }

    #[test]
    fn gram_matrix_is_identity_up_to_eight() {
        for n in 1..=8 {
            let b = hermitian_basis(n).unwrap();
            assert_eq!(b.len(), n * n);
            for (i, a) in b.elements().iter().enumerate() {
                assert!(a.is_hermitian(0.0));
                for (j, c) in b.elements().iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((a.hs_inner(c) - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn structured_coordinates_match_hilbert_schmidt_products() {
        let b = hermitian_basis(3).unwrap();
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = ComplexMatrix::from_rows(vec![
            vec![c(0.3, 0.0), c(0.1, 0.2), c(-0.4, 0.5)],
            vec![c(0.7, -0.1), c(-1.0, 0.3), c(0.2, 0.0)],
            vec![c(0.0, 0.9), c(0.6, -0.6), c(0.25, 0.0)],
        ])
        .unwrap();
        let coords = b.coordinates(&h).unwrap();
        for (e, z) in b.elements().iter().zip(&coords) {
            assert!((e.hs_inner(&h) - z).norm() < 1e-15);
        }
        let v: Vec<f64> = (0..9).map(|i| i as f64 * 0.37 - 1.1).collect();
        let mut direct = ComplexMatrix::zeros(3, 3);
        for (e, &x) in b.elements().iter().zip(&v) {
            direct = &direct + &e.scale(Complex64::new(x, 0.0));
        }
        assert!(devectorize(&v, &b).unwrap().max_abs_diff(&direct) < 1e-15);
    }

    #[test]
    fn half_identity_is_first_coordinate() {
        let b = hermitian_basis(2).unwrap();
        let v = vectorize(&ComplexMatrix::from_diagonal(&[0.5, 0.5]), &b).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0] - s).abs() < 1e-15);
        assert!(v[1..].iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn zero_maps_to_zero() {
        let b = hermitian_basis(3).unwrap();
        assert_eq!(
            vectorize(&ComplexMatrix::zeros(3, 3), &b).unwrap(),
            vec![0.0; 9]
        );
        assert_eq!(
            devectorize(&[0.0; 9], &b).unwrap(),
            ComplexMatrix::zeros(3, 3)
        );
    }

    #[test]
    fn unit_vector_recovers_element() {
        let b = hermitian_basis(2).unwrap();
        let m = devectorize(&[1.0, 0.0, 0.0, 0.0], &b).unwrap();
        assert!(m.max_abs_diff(&b.elements()[0]) < 1e-15);
    }

    #[test]
    fn trace_is_read_from_first_coordinate() {
        let b = hermitian_basis(4).unwrap();
        let h = ComplexMatrix::from_diagonal(&[0.1, 0.2, 0.3, -0.05]);
        let v = vectorize(&h, &b).unwrap();
        assert!((h.trace().re - 2.0 * v[0]).abs() < 1e-14);
        assert_eq!(b.traces()[0], 2.0);
    }

    #[test]
    fn errors() {
        let b = hermitian_basis(2).unwrap();
        let skew = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        assert!(matches!(
            vectorize(&skew, &b),
            Err(LinalgError::NotHermitian { .. })
        ));
        assert!(matches!(
            vectorize(&ComplexMatrix::identity(3), &b),
            Err(LinalgError::DimensionMismatch { .. })
        ));
        assert_eq!(
            devectorize(&[1.0; 3], &b),
            Err(LinalgError::LengthMismatch {
                expected: 4,
                found: 3
            })
        );
    }
}
