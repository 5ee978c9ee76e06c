//! Hermitian eigenvalues via cyclic Jacobi rotations.
//!
//! A complex Hermitian `H = A + iB` is embedded as the real symmetric
//! `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every eigenvalue
//! doubled. Dimensions here never exceed 16, so the 32x32 real problem is
//! cheap and Jacobi gives eigenvalues to near machine precision.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.ensure_hermitian()?;
    let n = m.rows();
    let size = 2 * n;
    let mut real = vec![0.0; size * size];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            real[i * size + j] = z.re;
            real[(i + n) * size + (j + n)] = z.re;
            real[i * size + (j + n)] = -z.im;
            real[(i + n) * size + j] = z.im;
        }
    }
    let doubled = symmetric_eigenvalues(real, size);
    Ok(doubled
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

/// Eigenvalues of a real symmetric `n x n` matrix (row-major), ascending.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>();
    if scale == 0.0 {
        return vec![0.0; n];
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = (t * t + 1.0).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    hermitian_eigenvalues(m)?
        .first()
        .copied()
        .ok_or_else(|| Error::DimensionMismatch("empty matrix".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn real_diagonal_is_sorted() {
        let m = ComplexMatrix::diagonal(&[0.3, -1.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![-1.0, 0.3, 2.0]);
    }

    #[test]
    fn pauli_y_has_unit_spectrum() {
        let i = Complex64::new(0.0, 1.0);
        let y = ComplexMatrix::new(2, 2, vec![0.0.into(), -i, i, 0.0.into()]).unwrap();
        let eig = hermitian_eigenvalues(&y).unwrap();
        assert!((eig[0] + 1.0).abs() < 1e-14);
        assert!((eig[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[a, b], [b*, d]] has eigenvalues (a+d)/2 ± sqrt(((a-d)/2)^2 + |b|^2)
        let b = Complex64::new(0.3, -0.4);
        let m = ComplexMatrix::new(2, 2, vec![1.0.into(), b, b.conj(), (-0.5).into()]).unwrap();
        let mid = 0.25;
        let rad = (0.75f64 * 0.75 + b.norm_sqr()).sqrt();
        let eig = hermitian_eigenvalues(&m).unwrap();
        assert!((eig[0] - (mid - rad)).abs() < 1e-14);
        assert!((eig[1] - (mid + rad)).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.0, 1.0]).unwrap();
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn matches_nalgebra_on_random_hermitian() {
        use crate::qmath::testutil::{random_hermitian, rng};
        let mut r = rng(11);
        for dim in [2, 3, 4, 6, 8] {
            for _ in 0..10 {
                let m = random_hermitian(&mut r, dim);
                let na = nalgebra::DMatrix::from_fn(dim, dim, |i, j| m[(i, j)]);
                let mut want: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
                want.sort_by(f64::total_cmp);
                let got = hermitian_eigenvalues(&m).unwrap();
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).abs() < 1e-10, "dim {dim}: {got:?} vs {want:?}");
                }
            }
        }
    }
}
