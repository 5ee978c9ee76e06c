use super::matrix::{ComplexMatrix, DensityMatrix};
use crate::error::{Error, Result};

const UNITARY_TOL: f64 = 1e-10;

/// `Tr[ρ M]` for a Hermitian observable `M`.
pub fn expectation(rho: &DensityMatrix, m: &ComplexMatrix) -> Result<f64> {
    rho.matrix().ensure_same_shape(m, "expectation")?;
    m.ensure_hermitian()?;
    let r = rho.matrix();
    let n = rho.dim();
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += r[(i, k)] * m[(k, i)];
        }
    }
    Ok(acc.re)
}

/// Measurement operator that reproduces, on the undisturbed state, the
/// statistics of `m` on a state mixed with `V|ψ⟩` at weight `eta`:
/// `(1 - η) M + η V† M V`.
pub fn effective_povm(m: &ComplexMatrix, v: &ComplexMatrix, eta: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain("eta", eta, "mixing weight must lie in [0, 1]"));
    }
    m.ensure_hermitian()?;
    m.ensure_same_shape(v, "effective_povm")?;
    let deviation = v.unitary_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let rotated = &(&v.adjoint() * m) * v;
    Ok(&m.scale(1.0 - eta) + &rotated.scale(eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::testutil::{random_density, random_hermitian, random_unitary, rng};
    use crate::qmath::StateVector;
    use rand::Rng;

    #[test]
    fn identity_observable_gives_one() {
        let mut rng = rng(5);
        let rho = random_density(&mut rng, 3);
        let e = expectation(&rho, &ComplexMatrix::identity(3)).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_z_on_ground_state() {
        let rho = StateVector::basis(2, 0).projector();
        assert_eq!(expectation(&rho, &ComplexMatrix::pauli_z()).unwrap(), 1.0);
    }

    #[test]
    fn matches_trace_of_product_loop() {
        let mut rng = rng(8);
        for dim in [2, 3, 4] {
            let rho = random_density(&mut rng, dim);
            let m = random_hermitian(&mut rng, dim);
            let prod = rho.matrix() * &m;
            let oracle: f64 = (0..dim).map(|i| prod[(i, i)].re).sum();
            assert!((expectation(&rho, &m).unwrap() - oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn expectation_dim_mismatch() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            expectation(&rho, &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn povm_degenerate_weights() {
        let mut rng = rng(2);
        let m = random_hermitian(&mut rng, 2);
        let v = random_unitary(&mut rng, 2);
        assert!(effective_povm(&m, &v, 0.0).unwrap().max_abs_diff(&m) < 1e-15);
        let id = ComplexMatrix::identity(2);
        assert!(effective_povm(&m, &id, 1.0).unwrap().max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn povm_rejects_non_unitary() {
        let m = ComplexMatrix::pauli_z();
        let v = ComplexMatrix::diagonal(&[1.0, 0.5]);
        assert!(matches!(
            effective_povm(&m, &v, 0.3),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn povm_equivalence_random_draws() {
        let mut rng = rng(21);
        for _ in 0..50 {
            let dim = rng.random_range(2..=4);
            let psi = crate::qmath::testutil::random_state(&mut rng, dim);
            let m = random_hermitian(&mut rng, dim);
            let v = random_unitary(&mut rng, dim);
            let eta: f64 = rng.random();
            let psi0 = psi.projector();
            let psi1 = psi.apply(&v).unwrap().projector();
            let rho_bob = DensityMatrix::mixture(&[(1.0 - eta, &psi0), (eta, &psi1)]).unwrap();
            let lhs = expectation(&rho_bob, &m).unwrap();
            let m_eff = effective_povm(&m, &v, eta).unwrap();
            assert!(m_eff.is_hermitian(1e-12));
            let rhs = expectation(&psi0, &m_eff).unwrap();
            assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        }
    }
}
