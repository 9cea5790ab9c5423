//! Dense complex linear algebra for small multi-qubit problems: Kronecker
//! products, partial traces and transposes, Hermitian eigendecomposition,
//! PSD square roots and trace norms.
//!
//! Factor 0 of a [`DimList`] is the most significant digit of a basis index,
//! so qubit A of an `A, B_1, ..., B_{N-1}` register is always factor 0.

mod eigen;
mod matrix;

pub use eigen::{
    hermitian_eig, hermitian_eig_with, psd_eigen_with, psd_sqrt, psd_sqrt_with, trace_norm,
    HermitianEigen,
};
pub use matrix::{kron, partial_trace, partial_transpose, ComplexMatrix, DimList};
