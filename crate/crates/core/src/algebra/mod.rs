//! Dense complex linear algebra for small matrices.

mod bipartite;
mod eig;
mod matrix;
mod svd;

pub use bipartite::{
    complete_basis, matricize, orthonormality_deviation, partial_trace, schmidt, unitary_completion,
    SchmidtData, Subsystem,
};
pub use eig::{eig_hermitian, HermitianEig};
pub use matrix::{
    fix_phase, inner, ket, ketbra, kron_vec, norm, outer, pauli, pauli_dot, trace_product, ComplexMatrix, C64,
    I, ONE, ZERO,
};
pub use svd::{pseudo_inverse, real_row_space, real_singular_values, svd, Svd};
pub(crate) use svd::numerical_rank;

/// `A ⊗ B`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}
