//! Bit commitment and its reduction to masking.
//!
//! Alice commits to bit `x` by sharing `Ψ^x = Σ_i √λ_i |a^x_i⟩|b_i⟩`. Both
//! commitments leave Bob with the same marginal, so they are perfectly
//! concealing. The same equality lets Alice switch between them with a local
//! unitary, so the scheme is not binding. The measure-and-prepare channel
//! built from Bob's marginals sends every observable to a multiple of the
//! identity.

use crate::algebra::{
    ket, matricize, orthonormality_deviation, outer, partial_trace, pseudo_inverse, svd, unitary_completion,
    eig_hermitian, inner, kron_vec, norm, ComplexMatrix, Subsystem, C64, ZERO,
};
use crate::channels::{check_state, KrausChannel};
use crate::error::{Error, Result};
use crate::masking::verify_masking;
use crate::random;
use crate::report::RunReport;
use crate::tol;

/// Two bipartite pure states on `A ⊗ B` with their `B` marginals.
#[derive(Debug, Clone)]
pub struct CommitmentPair {
    pub dim_a: usize,
    pub dim_b: usize,
    pub psi0: Vec<C64>,
    pub psi1: Vec<C64>,
    /// Shared Schmidt spectrum, when built by [`make_commitment_pair`].
    pub spectrum: Option<Vec<f64>>,
    pub marginal_b0: ComplexMatrix,
    pub marginal_b1: ComplexMatrix,
}

impl CommitmentPair {
    /// Pair from explicit vectors.
    pub fn from_states(psi0: Vec<C64>, psi1: Vec<C64>, dims: (usize, usize)) -> Result<Self> {
        let (da, db) = dims;
        for psi in [&psi0, &psi1] {
            if psi.len() != da * db {
                return Err(Error::DimensionMismatch {
                    expected: da * db,
                    got: psi.len(),
                });
            }
            let n = norm(psi);
            if (n - 1.0).abs() > tol::NORMALIZATION {
                return Err(Error::NotNormalized { norm: n });
            }
        }
        let marginal = |psi: &[C64]| partial_trace(&outer(psi, psi), dims, Subsystem::A);
        Ok(Self {
            dim_a: da,
            dim_b: db,
            marginal_b0: marginal(&psi0)?,
            marginal_b1: marginal(&psi1)?,
            psi0,
            psi1,
            spectrum: None,
        })
    }
}

fn require_family(family: &[Vec<C64>], count: usize, what: &str) -> Result<usize> {
    if family.len() < count {
        return Err(Error::InconsistentDimensions(format!(
            "{what} has {} vectors, need {count}",
            family.len()
        )));
    }
    let d = family.first().map_or(0, Vec::len);
    if family.iter().any(|v| v.len() != d) {
        return Err(Error::InconsistentDimensions(format!("{what} mixes vector lengths")));
    }
    let deviation = orthonormality_deviation(family);
    if deviation > tol::UNITARY {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(d)
}

/// `Ψ^x = Σ_i √λ_i |a^x_i⟩|b_i⟩` for `x = 0, 1`.
pub fn make_commitment_pair(
    lambda: &[f64],
    basis_a0: &[Vec<C64>],
    basis_a1: &[Vec<C64>],
    basis_b: &[Vec<C64>],
) -> Result<CommitmentPair> {
    let total: f64 = lambda.iter().sum();
    if lambda.is_empty() || lambda.iter().any(|&l| l < 0.0 || !l.is_finite()) || (total - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::BadSpectrum(format!(
            "need a probability vector, got sum {total}"
        )));
    }
    let r = lambda.len();
    let da = require_family(basis_a0, r, "A basis for bit 0")?;
    let da1 = require_family(basis_a1, r, "A basis for bit 1")?;
    let db = require_family(basis_b, r, "B basis")?;
    if da != da1 {
        return Err(Error::InconsistentDimensions(format!(
            "A bases have dimensions {da} and {da1}"
        )));
    }
    let build = |basis: &[Vec<C64>]| {
        let mut psi = vec![ZERO; da * db];
        for (i, &l) in lambda.iter().enumerate() {
            for (p, x) in psi.iter_mut().zip(kron_vec(&basis[i], &basis_b[i])) {
                *p += x * l.sqrt();
            }
        }
        psi
    };
    let mut pair = CommitmentPair::from_states(build(basis_a0), build(basis_a1), (da, db))?;
    pair.spectrum = Some(lambda.to_vec());
    Ok(pair)
}

/// Trace distance between the two `B` marginals.
pub fn concealment_gap(pair: &CommitmentPair) -> Result<f64> {
    let diff = &pair.marginal_b0 - &pair.marginal_b1;
    let e = eig_hermitian(&diff)?;
    Ok((0.5 * e.eigenvalues.iter().map(|x| x.abs()).sum::<f64>()).clamp(0.0, 1.0))
}

#[derive(Debug, Clone)]
pub struct CheatResult {
    pub unitary_a: ComplexMatrix,
    /// `|⟨Ψ¹|(U_A ⊗ I)|Ψ⁰⟩|`.
    pub fidelity: f64,
    pub feasible: bool,
}

const CHEAT_RESIDUAL: f64 = 1e-8;

/// Local unitary on `A` turning `Ψ⁰` into `Ψ¹`.
///
/// With `Ψ^x` reshaped to `M_x`, the unitary must satisfy `U M_0 = M_1`.
/// `X = M_1 M_0⁺` fixes it on the range of `M_0`; the rest is completed
/// deterministically. When no such unitary exists, the unitary maximizing
/// the overlap is returned instead with `feasible = false`.
pub fn cheating_unitary(pair: &CommitmentPair) -> Result<CheatResult> {
    let dims = (pair.dim_a, pair.dim_b);
    let m0 = matricize(&pair.psi0, dims)?;
    let m1 = matricize(&pair.psi1, dims)?;
    let x = &m1 * &pseudo_inverse(&m0)?;
    let fits = (&x * &m0).max_abs_diff(&m1) < CHEAT_RESIDUAL;

    let range = svd(&m0)?;
    let inputs: Vec<Vec<C64>> = (0..range.rank()).map(|k| range.u.column(k)).collect();
    let outputs: Vec<Vec<C64>> = inputs.iter().map(|v| x.mul_vec(v)).collect();
    let isometric = orthonormality_deviation(&outputs) <= tol::UNITARY;

    let (unitary_a, feasible) = if fits && isometric {
        (unitary_completion(&inputs, &outputs, pair.dim_a)?, true)
    } else {
        // Polar factor of M_1 M_0† maximizes |Tr(U M_0 M_1†)|.
        let s = svd(&(&m1 * &m0.adjoint()))?;
        (&s.u * &s.v_adjoint, false)
    };
    let moved = unitary_a.kron(&ComplexMatrix::identity(pair.dim_b)).mul_vec(&pair.psi0);
    Ok(CheatResult {
        fidelity: inner(&pair.psi1, &moved).norm().min(1.0),
        unitary_a,
        feasible,
    })
}

/// Measures `{|0⟩⟨0|, I − |0⟩⟨0|}` and prepares `rho0` or `rho1`.
///
/// Kraus operators `√p^i_j |e^i_j⟩⟨u^i_k|`, ordered by outcome `i`, then
/// eigenvector `j` (largest weight first), then `k`; zero weights dropped.
pub fn measure_prepare_channel(rho0: &ComplexMatrix, rho1: &ComplexMatrix, d: usize) -> Result<KrausChannel> {
    for rho in [rho0, rho1] {
        if rho.rows() != d || rho.cols() != d {
            return Err(Error::InvalidState(format!(
                "expected a {d}x{d} state, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
    }
    let effects: [Vec<Vec<C64>>; 2] = [vec![ket(d, 0)], (1..d).map(|k| ket(d, k)).collect()];
    let mut kraus = Vec::new();
    for (rho, effect) in [rho0, rho1].into_iter().zip(&effects) {
        let e = check_state(rho)?;
        for j in (0..d).rev() {
            let p = e.eigenvalues[j];
            if p <= 1e-14 {
                continue;
            }
            let ej: Vec<C64> = e.vector(j).iter().map(|z| z * p.sqrt()).collect();
            for u in effect {
                kraus.push(outer(&ej, u));
            }
        }
    }
    KrausChannel::new(kraus)
}

/// Outcome of [`no_bit_commitment_demo`].
#[derive(Debug, Clone)]
pub struct DemoReport {
    pub dim: usize,
    pub seed: u64,
    pub spectrum: Vec<f64>,
    pub concealment_gap: f64,
    pub cheat_feasible: bool,
    pub cheat_fidelity: f64,
    pub observables: usize,
    pub hiding_passed: usize,
    pub max_hiding_residual: f64,
    pub masked: usize,
    pub unit_expectation: usize,
    pub masking_matches: bool,
}

const DEMO_OBSERVABLES: usize = 20;

/// Runs the commitment, cheat, and measure-and-prepare pipeline.
pub fn no_bit_commitment_demo(d: usize, seed: u64) -> Result<DemoReport> {
    if d < 2 {
        return Err(Error::InconsistentDimensions(format!("dimension {d} < 2")));
    }
    let mut rng = random::seeded(seed);
    let lambda = random::full_rank_spectrum(&mut rng, d, 0.1);
    let a0 = random::orthonormal_family(&mut rng, d, d);
    let a1 = random::orthonormal_family(&mut rng, d, d);
    let b = random::orthonormal_family(&mut rng, d, d);
    let pair = make_commitment_pair(&lambda, &a0, &a1, &b)?;
    let gap = concealment_gap(&pair)?;
    let cheat = cheating_unitary(&pair)?;

    let rho = &pair.marginal_b0;
    let channel = measure_prepare_channel(rho, &pair.marginal_b1, d)?;
    let mut hiding_passed = 0;
    let mut max_hiding_residual: f64 = 0.0;
    let mut masked = 0;
    let mut unit_expectation = 0;
    let mut masking_matches = true;
    for k in 0..DEMO_OBSERVABLES {
        let mut o = random::hermitian(&mut rng, d);
        let mut t = crate::algebra::trace_product(rho, &o).re;
        if k % 2 == 0 {
            o = &o + &ComplexMatrix::identity(d).scale_real(1.0 - t);
            t = crate::algebra::trace_product(rho, &o).re;
        }
        let image = channel.apply_adjoint(&o)?;
        let residual = image.max_abs_diff(&ComplexMatrix::identity(d).scale_real(t));
        max_hiding_residual = max_hiding_residual.max(residual);
        if residual < tol::MASKING {
            hiding_passed += 1;
        }
        let is_masked = verify_masking(&channel, &o)? < tol::MASKING;
        let should_mask = (t - 1.0).abs() < tol::MASKING;
        masked += usize::from(is_masked);
        unit_expectation += usize::from(should_mask);
        masking_matches &= is_masked == should_mask;
    }
    Ok(DemoReport {
        dim: d,
        seed,
        spectrum: lambda,
        concealment_gap: gap,
        cheat_feasible: cheat.feasible,
        cheat_fidelity: cheat.fidelity,
        observables: DEMO_OBSERVABLES,
        hiding_passed,
        max_hiding_residual,
        masked,
        unit_expectation,
        masking_matches,
    })
}

impl DemoReport {
    pub fn to_report(&self) -> RunReport {
        let mut r = RunReport::new();
        r.push("command", "bitcommit-demo")
            .push("dim", self.dim)
            .push("seed", self.seed)
            .push_floats("schmidt_spectrum", &self.spectrum)
            .push_float("concealment_gap", self.concealment_gap)
            .push("cheat_feasible", self.cheat_feasible)
            .push_float("cheat_fidelity", self.cheat_fidelity)
            .push("hiding_checks", format!("{}/{}", self.hiding_passed, self.observables))
            .push_float("max_hiding_residual", self.max_hiding_residual)
            .push("masked_observables", self.masked)
            .push("unit_expectation_observables", self.unit_expectation)
            .push("masking_matches_unit_expectation", self.masking_matches)
            .push(
                "note_hiding",
                "the channel sends every observable O to Tr(rho_B O) I; it masks O only when that constant is 1",
            )
            .push(
                "note_contradiction",
                "a channel masking every observable would be a universal masker, and no universal masker exists",
            );
        r
    }
}
