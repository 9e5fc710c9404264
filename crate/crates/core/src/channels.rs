//! Kraus channels in the Schrödinger and Heisenberg pictures, and their
//! isometric extensions and unitary dilations.

use crate::algebra::{
    eig_hermitian, ket, ketbra, kron_vec, outer, partial_trace, unitary_completion, ComplexMatrix, Subsystem, C64,
};
use crate::error::{Error, Result};
use crate::tol;

/// A trace-preserving Kraus family `{E_i}`, each `output_dim x input_dim`.
///
/// Kraus order is preserved exactly as given.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    input_dim: usize,
    output_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates shapes and `Σ E†E = 1` within [`tol::CHANNEL`]. Invalid
    /// families are refused, never renormalized.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus family".into()))?;
        let (output_dim, input_dim) = first.shape();
        if let Some(bad) = kraus.iter().find(|k| k.shape() != (output_dim, input_dim)) {
            return Err(Error::InvalidChannel(format!(
                "Kraus operator of shape {:?} in a {output_dim}x{input_dim} family",
                bad.shape()
            )));
        }
        let deviation = completeness(&kraus).max_abs_diff(&ComplexMatrix::identity(input_dim));
        if deviation > tol::CHANNEL {
            return Err(Error::InvalidChannel(format!(
                "trace preservation violated by {deviation:e}"
            )));
        }
        Ok(Self {
            input_dim,
            output_dim,
            kraus,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            input_dim: d,
            output_dim: d,
            kraus: vec![ComplexMatrix::identity(d)],
        }
    }

    /// `ρ ↦ 1/d` for every input.
    pub fn completely_depolarizing(d: usize) -> Self {
        constant_channel(&ComplexMatrix::identity(d).scale_real(1.0 / d as f64), d)
            .expect("maximally mixed state is valid")
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Max-norm of `Σ E†E - 1`.
    pub fn trace_preservation_residual(&self) -> f64 {
        completeness(&self.kraus).max_abs_diff(&ComplexMatrix::identity(self.input_dim))
    }

    /// `Σ E ρ E†`.
    pub fn apply_forward(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.input_dim, self.input_dim) {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                got: rho.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.output_dim, self.output_dim);
        for e in &self.kraus {
            out = &out + &(&(e * rho) * &e.adjoint());
        }
        Ok(out)
    }

    /// Heisenberg picture `Σ E† O E`.
    pub fn apply_adjoint(&self, o: &ComplexMatrix) -> Result<ComplexMatrix> {
        if o.shape() != (self.output_dim, self.output_dim) {
            return Err(Error::DimensionMismatch {
                expected: self.output_dim,
                got: o.rows(),
            });
        }
        o.require_hermitian()?;
        let mut out = ComplexMatrix::zeros(self.input_dim, self.input_dim);
        for e in &self.kraus {
            out = &out + &(&(&e.adjoint() * o) * e);
        }
        Ok(out)
    }

    /// `V = Σ E_i ⊗ |i>_E`, an `(output_dim · K) x input_dim` isometry with
    /// environment dimension `K` = number of Kraus operators.
    pub fn isometric_extension(&self) -> ComplexMatrix {
        let k = self.kraus.len();
        ComplexMatrix::from_fn(self.output_dim * k, self.input_dim, |row, col| {
            self.kraus[row % k][(row / k, col)]
        })
    }

    /// Unitary dilation with the environment starting in `|0>_E`.
    ///
    /// Requires equal input and output dimensions. The unitary agrees with
    /// the isometric extension on `|ψ>⊗|0>_E` and is completed
    /// deterministically elsewhere.
    pub fn dilation(&self) -> Result<UnitaryDilation> {
        if self.input_dim != self.output_dim {
            return Err(Error::InconsistentDimensions(format!(
                "dilation needs a square channel, got {} -> {}",
                self.input_dim, self.output_dim
            )));
        }
        let d = self.input_dim;
        let k = self.kraus.len();
        let v = self.isometric_extension();
        let inputs: Vec<Vec<C64>> = (0..d).map(|c| kron_vec(&ket(d, c), &ket(k, 0))).collect();
        let outputs: Vec<Vec<C64>> = (0..d).map(|c| v.column(c)).collect();
        let unitary = unitary_completion(&inputs, &outputs, d * k)?;
        UnitaryDilation::new(d, k, unitary)
    }
}

fn completeness(kraus: &[ComplexMatrix]) -> ComplexMatrix {
    let n = kraus[0].cols();
    let mut sum = ComplexMatrix::zeros(n, n);
    for e in kraus {
        sum = &sum + &(&e.adjoint() * e);
    }
    sum
}

/// Validates a density matrix: Hermitian, unit trace, spectrum above
/// `-tol::POSITIVITY`. Returns its eigendecomposition.
pub(crate) fn check_state(rho: &ComplexMatrix) -> Result<crate::algebra::HermitianEig> {
    if !rho.is_square() {
        return Err(Error::InvalidState("state must be square".into()));
    }
    let e = eig_hermitian(rho).map_err(|err| match err {
        Error::NotHermitian { deviation } => Error::InvalidState(format!("not Hermitian ({deviation:e})")),
        other => other,
    })?;
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::InvalidState(format!("trace {trace}")));
    }
    if e.min() < -tol::POSITIVITY {
        return Err(Error::InvalidState(format!("negative eigenvalue {}", e.min())));
    }
    Ok(e)
}

/// Eigenweights below this are dropped when building Kraus operators.
const WEIGHT_CUTOFF: f64 = 1e-14;

/// Channel sending every input to `sigma`.
///
/// Kraus operators `√p_j |e_j><k|` for the spectral decomposition
/// `σ = Σ p_j |e_j><e_j|` (largest weight first, zero weights skipped) and
/// `k = 0..input_dim`.
pub fn constant_channel(sigma: &ComplexMatrix, input_dim: usize) -> Result<KrausChannel> {
    let e = check_state(sigma)?;
    let d = sigma.rows();
    let mut kraus = Vec::new();
    for j in (0..d).rev() {
        let p = e.eigenvalues[j];
        if p <= WEIGHT_CUTOFF {
            continue;
        }
        let ej: Vec<C64> = e.vector(j).iter().map(|z| z * p.sqrt()).collect();
        for k in 0..input_dim {
            kraus.push(outer(&ej, &ket(input_dim, k)));
        }
    }
    KrausChannel::new(kraus)
}

/// A unitary `U` on `system ⊗ environment` together with the initial
/// environment state.
#[derive(Debug, Clone)]
pub struct UnitaryDilation {
    system_dim: usize,
    env_dim: usize,
    unitary: ComplexMatrix,
    env_init: Vec<C64>,
}

impl UnitaryDilation {
    /// Environment initialized to `|0>_E`.
    pub fn new(system_dim: usize, env_dim: usize, unitary: ComplexMatrix) -> Result<Self> {
        let n = system_dim * env_dim;
        if unitary.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: unitary.rows(),
            });
        }
        unitary.require_unitary()?;
        Ok(Self {
            system_dim,
            env_dim,
            unitary,
            env_init: ket(env_dim, 0),
        })
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn env_init(&self) -> &[C64] {
        &self.env_init
    }

    /// `Tr_E[U (ρ ⊗ |e0><e0|) U†]`.
    pub fn reduced_output(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.system_dim, self.system_dim) {
            return Err(Error::DimensionMismatch {
                expected: self.system_dim,
                got: rho.rows(),
            });
        }
        let env = outer(&self.env_init, &self.env_init);
        let joint = &(&self.unitary * &rho.kron(&env)) * &self.unitary.adjoint();
        partial_trace(&joint, (self.system_dim, self.env_dim), Subsystem::B)
    }

    /// Heisenberg action on a joint observable, `U† X U`.
    pub fn conjugate(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &(&self.unitary.adjoint() * x) * &self.unitary
    }
}

/// The qubit masker dilation `U = Σ_ij |j><i| ⊗ u_j |i><j|`, acting as
/// `U(|m>_A ⊗ |n>_E) = |n>_A ⊗ u_n|m>_E`. With `u0 = u1 = 1` it is the swap.
pub fn masker_dilation(u0: &ComplexMatrix, u1: &ComplexMatrix) -> Result<UnitaryDilation> {
    for u in [u0, u1] {
        if u.shape() != (2, 2) {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: u.rows(),
            });
        }
        u.require_unitary()?;
    }
    let us = [u0, u1];
    let mut total = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for (j, u) in us.iter().enumerate() {
            let env = *u * &ketbra(2, i, j);
            total = &total + &ketbra(2, j, i).kron(&env);
        }
    }
    UnitaryDilation::new(2, 2, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{pauli, trace_product};

    fn masker() -> KrausChannel {
        KrausChannel::new(vec![ketbra(2, 0, 0), ketbra(2, 0, 1)]).unwrap()
    }

    fn sample_state() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            &[C64::new(0.6, 0.0), C64::new(0.1, -0.2)],
            &[C64::new(0.1, 0.2), C64::new(0.4, 0.0)],
        ])
    }

    #[test]
    fn rejects_invalid_families() {
        assert!(KrausChannel::new(vec![]).is_err());
        assert!(matches!(
            KrausChannel::new(vec![ketbra(2, 0, 0)]),
            Err(Error::InvalidChannel(_))
        ));
        assert!(matches!(
            KrausChannel::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]),
            Err(Error::InvalidChannel(_))
        ));
    }

    #[test]
    fn forward_examples() {
        let rho = sample_state();
        assert_eq!(KrausChannel::identity(2).apply_forward(&rho).unwrap(), rho);
        let out = masker().apply_forward(&rho).unwrap();
        assert!(out.max_abs_diff(&ketbra(2, 0, 0)) < 1e-15);
        let out = KrausChannel::completely_depolarizing(2).apply_forward(&rho).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        assert!(matches!(
            masker().apply_forward(&ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn adjoint_examples() {
        let id = ComplexMatrix::identity(2);
        assert!(masker().apply_adjoint(&id).unwrap().max_abs_diff(&id) < 1e-15);
        assert!(masker().apply_adjoint(&pauli(3)).unwrap().max_abs_diff(&id) < 1e-15);
        let rho = sample_state();
        let o = pauli(1);
        let ch = KrausChannel::completely_depolarizing(2);
        let lhs = trace_product(&ch.apply_forward(&rho).unwrap(), &o);
        let rhs = trace_product(&rho, &ch.apply_adjoint(&o).unwrap());
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn constant_channel_for_ket0() {
        let ch = constant_channel(&ketbra(2, 0, 0), 2).unwrap();
        assert_eq!(ch.kraus(), &[ketbra(2, 0, 0), ketbra(2, 0, 1)]);
        assert!(constant_channel(&ComplexMatrix::identity(2), 2).is_err());
        assert!(constant_channel(&ComplexMatrix::from_diagonal(&[1.5, -0.5]), 2).is_err());
    }

    #[test]
    fn isometric_extension_examples() {
        let v = KrausChannel::identity(2).isometric_extension();
        assert_eq!(v, ComplexMatrix::identity(2).kron(&ComplexMatrix::column_matrix(&ket(1, 0))));
        let v = masker().isometric_extension();
        for j in 0..2 {
            assert_eq!(v.column(j), kron_vec(&ket(2, 0), &ket(2, j)));
        }
        assert!((&v.adjoint() * &v).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn swap_dilation() {
        let id = ComplexMatrix::identity(2);
        let u = masker_dilation(&id, &id).unwrap();
        let swap = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(u.unitary(), &swap);
        let lhs = u.conjugate(&pauli(3).kron(&id));
        assert_eq!(lhs, id.kron(&pauli(3)));
        assert!(masker_dilation(&ComplexMatrix::from_diagonal(&[1.0, 2.0]), &id).is_err());
    }

    #[test]
    fn masker_dilation_action() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u0 = ComplexMatrix::from_rows(&[&[C64::new(h, 0.0), C64::new(0.0, h)], &[C64::new(0.0, h), C64::new(h, 0.0)]]);
        let u1 = pauli(2);
        let u = masker_dilation(&u0, &u1).unwrap();
        let out = u.unitary().mul_vec(&kron_vec(&ket(2, 1), &ket(2, 0)));
        let expected = kron_vec(&ket(2, 0), &u0.mul_vec(&ket(2, 1)));
        assert!(out.iter().zip(&expected).all(|(a, b)| (a - b).norm() < 1e-15));
        let out = masker().dilation().unwrap().reduced_output(&sample_state()).unwrap();
        assert!(out.max_abs_diff(&ketbra(2, 0, 0)) < 1e-15);
    }
}
