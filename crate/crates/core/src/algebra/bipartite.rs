//! Bipartite structure: partial traces, Schmidt decomposition, and
//! completing partial isometries to unitaries.

use super::matrix::{fix_phase, inner, kron_vec, norm, ComplexMatrix, C64, ZERO};
use super::svd::svd;
use crate::error::{Error, Result};
use crate::tol;

/// Which factor of `A ⊗ B` an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Traces out `over` from a matrix on `d_a * d_b` (index `i_a * d_b + i_b`).
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), over: Subsystem) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    let n = da * db;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.rows().max(m.cols()),
        });
    }
    Ok(match over {
        Subsystem::A => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
    })
}

/// Schmidt form `ψ = Σ c_i |left_i> ⊗ |right_i>`.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// Strictly positive, descending.
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<C64>>,
    pub right: Vec<Vec<C64>>,
}

impl SchmidtData {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let n = self.left[0].len() * self.right[0].len();
        let mut out = vec![ZERO; n];
        for ((c, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for (o, x) in out.iter_mut().zip(kron_vec(l, r)) {
                *o += x * c;
            }
        }
        out
    }
}

/// Coefficients below this are dropped from the Schmidt form.
const SCHMIDT_CUTOFF: f64 = 1e-10;

/// Reshapes `ψ` to a `d_a x d_b` matrix: `ψ = Σ M[i, j] |i>|j>`.
pub fn matricize(psi: &[C64], dims: (usize, usize)) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if psi.len() != da * db {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            got: psi.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(da, db, |i, j| psi[i * db + j]))
}

/// Schmidt decomposition of a normalized bipartite vector.
///
/// The left vectors carry the phase convention (first nonzero component real
/// and nonnegative); the compensating phase goes into the right vectors so
/// coefficients stay real.
pub fn schmidt(psi: &[C64], dims: (usize, usize)) -> Result<SchmidtData> {
    let n = norm(psi);
    if (n - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::NotNormalized { norm: n });
    }
    let m = matricize(psi, dims)?;
    let d = svd(&m)?;
    let mut out = SchmidtData {
        coefficients: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for (k, &c) in d.singular_values.iter().enumerate() {
        if c <= SCHMIDT_CUTOFF {
            continue;
        }
        let mut left = d.u.column(k);
        let phase = fix_phase(&mut left);
        let right: Vec<C64> = (0..dims.1)
            .map(|j| d.v_adjoint[(k, j)] * phase.conj())
            .collect();
        out.coefficients.push(c);
        out.left.push(left);
        out.right.push(right);
    }
    Ok(out)
}

/// Largest deviation of the Gram matrix of `family` from the identity.
pub fn orthonormality_deviation(family: &[Vec<C64>]) -> f64 {
    let mut dev: f64 = 0.0;
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((inner(a, b) - target).norm());
        }
    }
    dev
}

/// Extends an orthonormal family to an orthonormal basis of `C^d` by
/// Gram–Schmidt over the standard basis vectors in index order.
pub fn complete_basis(family: &[Vec<C64>], d: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = family.to_vec();
    for e in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = super::matrix::ket(d, e);
        // Two passes of classical Gram–Schmidt keep orthogonality at roundoff.
        for _ in 0..2 {
            for b in &basis {
                let overlap = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= overlap * y;
                }
            }
        }
        let len = norm(&v);
        if len > 1e-6 {
            v.iter_mut().for_each(|x| *x /= len);
            basis.push(v);
        }
    }
    basis
}

/// Unitary on `C^d` with `U inputs[k] = outputs[k]`.
///
/// On the orthogonal complement the unitary maps the Gram–Schmidt completion
/// of the inputs onto the Gram–Schmidt completion of the outputs (both over
/// standard basis vectors in index order), so the result is deterministic.
pub fn unitary_completion(inputs: &[Vec<C64>], outputs: &[Vec<C64>], d: usize) -> Result<ComplexMatrix> {
    if inputs.len() != outputs.len() {
        return Err(Error::InconsistentDimensions(format!(
            "{} inputs vs {} outputs",
            inputs.len(),
            outputs.len()
        )));
    }
    if inputs.len() > d {
        return Err(Error::InconsistentDimensions(format!(
            "{} pairs exceed dimension {d}",
            inputs.len()
        )));
    }
    if let Some(v) = inputs.iter().chain(outputs).find(|v| v.len() != d) {
        return Err(Error::InconsistentDimensions(format!(
            "vector of length {} in dimension {d}",
            v.len()
        )));
    }
    for family in [inputs, outputs] {
        let deviation = orthonormality_deviation(family);
        if deviation > tol::UNITARY {
            return Err(Error::NotOrthonormal { deviation });
        }
    }
    let ins = complete_basis(inputs, d);
    let outs = complete_basis(outputs, d);
    let mut u = ComplexMatrix::zeros(d, d);
    for (a, b) in ins.iter().zip(&outs) {
        u = &u + &super::matrix::outer(b, a);
    }
    Ok(u)
}
