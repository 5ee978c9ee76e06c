//! Dense complex linear algebra and entropies for Hilbert spaces of
//! dimension at most 16. Everything here is a pure function of its inputs.

mod eigen;
mod entropy;
mod matrix;
mod measure;
#[cfg(test)]
pub(crate) mod testutil;

pub use eigen::{hermitian_eigenvalues, min_eigenvalue, symmetric_eigenvalues};
pub use entropy::{binary_entropy, inv_binary_entropy, vn_entropy};
pub(crate) use entropy::{h2, h2_saturating};
pub use matrix::{kron, partial_trace, ComplexMatrix, DensityMatrix, StateVector, PSD_TOL, STRUCTURE_TOL};
pub use measure::{effective_povm, expectation};

pub use num_complex::Complex64;
