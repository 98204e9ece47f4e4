use num_complex::Complex64;
use num_traits::Zero;
// Float math for no_std builds; shadowed by inherent methods whenever std
// is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use super::ComplexMatrix;

/// Householder QR of a square complex matrix: returns `(Q, R)` with `Q`
/// unitary and `R` upper triangular, `A = Q R`.
pub fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    assert!(a.is_square(), "householder_qr expects a square matrix");
    let n = a.rows();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let norm_x: f64 = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        // alpha = -e^{i arg x0} ‖x‖ avoids cancellation in v0.
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        let mut v: alloc::vec::Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sq == 0.0 {
            continue;
        }
        // H = I − 2 v v† / (v† v), applied on the left of R and the right of Q.
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * r[(k + t, j)])
                .sum();
            let f = dot * (2.0 / v_norm_sq);
            for (t, vt) in v.iter().enumerate() {
                r[(k + t, j)] -= vt * f;
            }
        }
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| q[(i, k + t)] * vt).sum();
            let f = dot * (2.0 / v_norm_sq);
            for (t, vt) in v.iter().enumerate() {
                q[(i, k + t)] -= f * vt.conj();
            }
        }
        for i in k + 1..n {
            r[(i, k)] = Complex64::zero();
        }
    }
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;
    use alloc::vec;

    #[test]
    fn reconstructs_input() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let a = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.5), c(-0.3, 0.2), c(0.0, 1.0)],
            vec![c(0.4, -0.1), c(2.0, 0.0), c(0.7, 0.7)],
            vec![c(-1.2, 0.0), c(0.1, -0.9), c(0.3, 0.0)],
        ])
        .unwrap();
        let (q, r) = householder_qr(&a);
        assert!(unitarity_defect(&q).unwrap() < 1e-14);
        assert!((&q * &r).max_abs_diff(&a) < 1e-14);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(r[(i, j)], Complex64::zero());
            }
        }
    }
}
