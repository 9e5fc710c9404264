//! Maskability decisions, masker construction, and the no-hiding check.
//!
//! In coefficient form `O = a0·I + Σ a_i λ_i`, a channel with constant output
//! `ρ = I/d + Σ b_i λ_i` masks `O` exactly when `Tr(ρO) = a0 + 2a·b = 1`,
//! i.e. `a0/2 + a·b = 1/2`. For a qubit this is a plane meeting the Bloch
//! ball, which gives the criterion `|1 − a0| ≤ |a|`. In any dimension the
//! eigenvalue range decides the question: a masker exists iff
//! `λ_min ≤ 1 ≤ λ_max`.

use crate::algebra::{eig_hermitian, ket, ketbra, outer, pauli, pauli_dot, tensor, ComplexMatrix, C64};
use crate::bloch::{observable_coeffs, ObservableCoeffs};
use crate::channels::{constant_channel, masker_dilation, KrausChannel, UnitaryDilation};
use crate::error::{Error, Result};
use crate::tol;

/// Grouping tolerance for eigenvalues that belong to one eigenspace.
const EIGENSPACE_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictMethod {
    BlochCriterion,
    NecessaryOnly,
    Oracle,
}

impl VerdictMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::BlochCriterion => "bloch-criterion",
            Self::NecessaryOnly => "necessary-only",
            Self::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskabilityVerdict {
    pub maskable: bool,
    pub method: VerdictMethod,
    /// `|1 − a0| / (2|a|)`, the distance of the masking plane from the
    /// origin of the Bloch ball. Qubit criterion only, and only for `a ≠ 0`.
    pub plane_distance: Option<f64>,
    pub eig_range: (f64, f64),
}

/// Qubit criterion `|1 − a0| ≤ |a|`.
pub fn decide_maskable_qubit(c: &ObservableCoeffs) -> Result<MaskabilityVerdict> {
    if c.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: c.dim(),
        });
    }
    let r = c.a_norm();
    let gap = (1.0 - c.a0).abs();
    let (maskable, plane_distance) = if r > tol::GEOMETRY {
        (gap <= r + tol::BOUNDARY, Some(gap / (2.0 * r)))
    } else {
        (gap <= tol::BOUNDARY, None)
    };
    Ok(MaskabilityVerdict {
        maskable,
        method: VerdictMethod::BlochCriterion,
        plane_distance,
        eig_range: (c.a0 - r, c.a0 + r),
    })
}

/// Eigenvalue-range oracle, valid in every dimension.
pub fn decide_maskable_oracle(o: &ComplexMatrix) -> Result<MaskabilityVerdict> {
    let e = eig_hermitian(o)?;
    let (lo, hi) = (e.min(), e.max());
    Ok(MaskabilityVerdict {
        maskable: lo <= 1.0 + tol::MASKING && 1.0 <= hi + tol::MASKING,
        method: VerdictMethod::Oracle,
        plane_distance: None,
        eig_range: (lo, hi),
    })
}

/// Necessary condition `|a| ≥ d|1 − a0| / √(2d(d−1))`: the masking plane
/// must reach the ball `|b|² ≤ (d−1)/(2d)` that contains every state.
pub fn necessary_condition_d(c: &ObservableCoeffs) -> bool {
    c.a_norm() >= necessary_threshold(c.dim(), c.a0) - tol::BOUNDARY
}

pub fn necessary_threshold(d: usize, a0: f64) -> f64 {
    let d = d as f64;
    d * (1.0 - a0).abs() / (2.0 * d * (d - 1.0)).sqrt()
}

/// Verdict from the necessary condition alone; `maskable = false` is
/// conclusive, `true` is not.
pub fn decide_maskable_necessary(c: &ObservableCoeffs) -> MaskabilityVerdict {
    MaskabilityVerdict {
        maskable: necessary_condition_d(c),
        method: VerdictMethod::NecessaryOnly,
        plane_distance: None,
        eig_range: (f64::NAN, f64::NAN),
    }
}

/// Projector onto the span of eigenvectors with eigenvalue within
/// `EIGENSPACE_GAP` of `target`, normalized to unit trace.
fn eigenspace_state(e: &crate::algebra::HermitianEig, target: f64) -> ComplexMatrix {
    let n = e.dim();
    let mut p = ComplexMatrix::zeros(n, n);
    let mut rank = 0usize;
    for k in 0..n {
        if (e.eigenvalues[k] - target).abs() <= EIGENSPACE_GAP {
            let v = e.vector(k);
            p = &p + &outer(&v, &v);
            rank += 1;
        }
    }
    p.scale_real(1.0 / rank as f64)
}

/// The weight `p` and output state `σ0 = p·σ_max + (1 − p)·σ_min` with
/// `Tr(σ0 O) = 1`.
pub fn masking_output_state(o: &ComplexMatrix) -> Result<(f64, ComplexMatrix)> {
    let e = eig_hermitian(o)?;
    let (lo, hi) = (e.min(), e.max());
    if !(lo <= 1.0 + tol::MASKING && 1.0 <= hi + tol::MASKING) {
        return Err(Error::NotMaskable { min: lo, max: hi });
    }
    let spread = hi - lo;
    if spread <= EIGENSPACE_GAP {
        // Flat spectrum at 1: every state works, take the maximally mixed one.
        let d = o.rows();
        return Ok((1.0, ComplexMatrix::identity(d).scale_real(1.0 / d as f64)));
    }
    let p = ((1.0 - lo) / spread).clamp(0.0, 1.0);
    let top = eigenspace_state(&e, hi);
    let bottom = eigenspace_state(&e, lo);
    let sigma = &top.scale_real(p) + &bottom.scale_real(1.0 - p);
    Ok((p, sigma))
}

/// Constant channel onto [`masking_output_state`].
pub fn build_constant_masker(o: &ComplexMatrix) -> Result<KrausChannel> {
    let (_, sigma) = masking_output_state(o)?;
    constant_channel(&sigma, o.rows())
}

fn require_unit(n: [f64; 3]) -> Result<()> {
    let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (len - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::NotUnitVector { norm: len });
    }
    Ok(())
}

/// Spherical angles `(θ, φ)` of a unit vector.
pub fn spherical_angles(n: [f64; 3]) -> (f64, f64) {
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    (theta, phi)
}

/// `exp(i·t·σ_k / 2)`.
fn half_angle(k: usize, t: f64) -> ComplexMatrix {
    let c = C64::new((t / 2.0).cos(), 0.0);
    let s = C64::new(0.0, (t / 2.0).sin());
    &ComplexMatrix::identity(2).scale(c) + &pauli(k).scale(s)
}

/// Unitary `w` with `w† σ3 w = n·σ`, built as `exp(iθσ2/2)·exp(iφσ3/2)`.
pub fn rotation_unitary(n: [f64; 3]) -> Result<ComplexMatrix> {
    require_unit(n)?;
    let (theta, phi) = spherical_angles(n);
    Ok(&half_angle(2, theta) * &half_angle(3, phi))
}

pub fn rotation_unitary_from_angles(theta: f64, phi: f64) -> ComplexMatrix {
    &half_angle(2, theta) * &half_angle(3, phi)
}

pub fn unit_from_angles(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Masker for `n·σ` with Kraus operators `w†|0⟩⟨i|` and dilation
/// `(w† ⊗ I)·U`, environment unitaries trivial.
pub fn build_masker_swap(n: [f64; 3]) -> Result<(KrausChannel, UnitaryDilation)> {
    let id = ComplexMatrix::identity(2);
    build_masker_swap_with(n, &id, &id)
}

/// As [`build_masker_swap`] with environment unitaries `u0`, `u1` in the
/// dilation.
pub fn build_masker_swap_with(
    n: [f64; 3],
    u0: &ComplexMatrix,
    u1: &ComplexMatrix,
) -> Result<(KrausChannel, UnitaryDilation)> {
    let w = rotation_unitary(n)?;
    let wd = w.adjoint();
    let kraus = (0..2).map(|i| &wd * &ketbra(2, 0, i)).collect();
    let channel = KrausChannel::new(kraus)?;
    let base = masker_dilation(u0, u1)?;
    let rotated = &tensor(&wd, &ComplexMatrix::identity(2)) * base.unitary();
    let dilation = UnitaryDilation::new(2, 2, rotated)?;
    Ok((channel, dilation))
}

/// `‖E*(O) − I‖_max`.
pub fn verify_masking(channel: &KrausChannel, o: &ComplexMatrix) -> Result<f64> {
    let image = channel.apply_adjoint(o)?;
    Ok(image.max_abs_diff(&ComplexMatrix::identity(image.rows())))
}

pub fn is_masked(channel: &KrausChannel, o: &ComplexMatrix) -> Result<bool> {
    Ok(verify_masking(channel, o)? < tol::MASKING)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoHidingReport {
    /// `‖U'†(n·σ ⊗ I)U' − I ⊗ σ3‖_max`.
    pub residual_system: f64,
    /// `‖w†σ3w − n·σ‖_max`.
    pub residual_recovery: f64,
    pub verified: bool,
}

/// Checks that the masked observable reappears on the environment as `σ3`,
/// and that `w` recovers `n·σ` from it.
pub fn verify_nohiding(n: [f64; 3], u0: &ComplexMatrix, u1: &ComplexMatrix) -> Result<NoHidingReport> {
    u0.require_unitary()?;
    u1.require_unitary()?;
    let (_, dilation) = build_masker_swap_with(n, u0, u1)?;
    let observable = pauli_dot(n);
    let id = ComplexMatrix::identity(2);
    let moved = dilation.conjugate(&tensor(&observable, &id));
    let residual_system = moved.max_abs_diff(&tensor(&id, &pauli(3)));
    let w = rotation_unitary(n)?;
    let residual_recovery = (&(&w.adjoint() * &pauli(3)) * &w).max_abs_diff(&observable);
    Ok(NoHidingReport {
        residual_system,
        residual_recovery,
        verified: residual_system < 1e-10 && residual_recovery < 1e-10,
    })
}

/// Intersection of the masking plane `a·b = 1/2` with the qubit Bloch ball.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputDisk {
    pub center: [f64; 3],
    pub radius: f64,
    pub normal: [f64; 3],
}

impl OutputDisk {
    /// Point at polar coordinates `(s·radius, t)` in the disk's plane,
    /// `s ∈ [0, 1]`.
    pub fn point(&self, s: f64, t: f64) -> [f64; 3] {
        let (e1, e2) = plane_frame(self.normal);
        let r = s * self.radius;
        std::array::from_fn(|k| self.center[k] + r * (t.cos() * e1[k] + t.sin() * e2[k]))
    }
}

/// Two unit vectors orthogonal to `n` and to each other.
fn plane_frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normalize(cross(n, helper));
    let e2 = cross(n, e1);
    (e1, e2)
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / len)
}

/// Output states masking `a·σ` (with `a0 = 0`) form a disk in the ball.
pub fn output_disk(a: [f64; 3]) -> Result<OutputDisk> {
    let len = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len < 1.0 - tol::BOUNDARY {
        return Err(Error::EmptyDisk { norm: len });
    }
    let normal = a.map(|x| x / len);
    let radius = 0.5 * (1.0 - 1.0 / (len * len)).max(0.0).sqrt();
    Ok(OutputDisk {
        center: normal.map(|x| x / (2.0 * len)),
        radius,
        normal,
    })
}

/// `|0⟩⟨0|`, the common output of the σ3 masker.
pub fn sigma3_masker_output() -> ComplexMatrix {
    let k = ket(2, 0);
    outer(&k, &k)
}

/// Coefficient view of a Hermitian observable together with its qubit
/// verdict; convenience for callers holding a matrix.
pub fn decide_maskable_qubit_matrix(o: &ComplexMatrix) -> Result<MaskabilityVerdict> {
    decide_maskable_qubit(&observable_coeffs(o)?)
}
