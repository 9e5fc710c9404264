//! Generalized Gell-Mann generators of SU(d) and the real coordinate views of
//! states and observables built on them.
//!
//! A state is `ρ = 1/d + Σ b_i λ_i` and an observable `O = a0·1 + Σ a_i λ_i`,
//! with generators normalized to `Tr(λ_i λ_j) = 2δ_ij`. Generators are
//! ordered: symmetric off-diagonal `|j><k| + |k><j|`, then antisymmetric
//! `-i|j><k| + i|k><j|` (both over pairs `j < k` lexicographically), then the
//! `d - 1` diagonal ones. For `d = 2` this is `(σ1, σ2, σ3)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{trace_product, ComplexMatrix, I, ONE};
use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorBasis {
    fn build(d: usize) -> Self {
        assert!(d >= 2, "generator basis needs d >= 2");
        let mut generators = Vec::with_capacity(d * d - 1);
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
        for &(j, k) in &pairs {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = ONE;
            m[(k, j)] = ONE;
            generators.push(m);
        }
        for &(j, k) in &pairs {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = -I;
            m[(k, j)] = I;
            generators.push(m);
        }
        for l in 1..d {
            let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
            let mut diag = vec![0.0; d];
            diag[..l].iter_mut().for_each(|x| *x = norm);
            diag[l] = -(l as f64) * norm;
            generators.push(ComplexMatrix::from_diagonal(&diag));
        }
        Self { dim: d, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `d² - 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, i: usize) -> &ComplexMatrix {
        &self.generators[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.generators.iter()
    }

    /// `Σ c_i λ_i`.
    pub fn combine(&self, coefficients: &[f64]) -> ComplexMatrix {
        assert_eq!(coefficients.len(), self.len(), "coefficient count");
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d, d);
        for (c, g) in coefficients.iter().zip(&self.generators) {
            if *c != 0.0 {
                out = &out + &g.scale_real(*c);
            }
        }
        out
    }

    /// `Tr(M λ_i) / 2` for every generator.
    pub fn project(&self, m: &ComplexMatrix) -> Vec<f64> {
        self.generators.iter().map(|g| trace_product(m, g).re / 2.0).collect()
    }
}

/// Generator basis for dimension `d`, memoized per dimension.
pub fn generator_basis(d: usize) -> Arc<GeneratorBasis> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GeneratorBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(d)
        .or_insert_with(|| Arc::new(GeneratorBasis::build(d)))
        .clone()
}

/// `g_ijk = Tr({λ_i, λ_j} λ_k) / 4`, stored densely.
#[derive(Debug, Clone)]
pub struct SymmetricTensor {
    dim: usize,
    n: usize,
    values: Vec<f64>,
}

impl SymmetricTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Zero-based indices.
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[(i * self.n + j) * self.n + k]
    }

    /// `Σ g_ijk b_i b_j b_k`.
    pub fn cubic_form(&self, b: &[f64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let bij = b[i] * b[j];
                if bij == 0.0 {
                    continue;
                }
                for (k, bk) in b.iter().enumerate().take(n) {
                    acc += self.get(i, j, k) * bij * bk;
                }
            }
        }
        acc
    }
}

pub fn symmetric_tensor(d: usize) -> SymmetricTensor {
    let basis = generator_basis(d);
    let n = basis.len();
    let mut values = vec![0.0; n * n * n];
    for i in 0..n {
        for j in i..n {
            let anti = &(basis.get(i) * basis.get(j)) + &(basis.get(j) * basis.get(i));
            for k in 0..n {
                let g = trace_product(&anti, basis.get(k)).re / 4.0;
                values[(i * n + j) * n + k] = g;
                values[(j * n + i) * n + k] = g;
            }
        }
    }
    SymmetricTensor { dim: d, n, values }
}

/// Bloch coordinates of a unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    dim: usize,
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InconsistentDimensions(format!("dimension {dim} < 2")));
        }
        if components.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch {
                expected: dim * dim - 1,
                got: components.len(),
            });
        }
        Ok(Self { dim, components })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            components: vec![0.0; dim * dim - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<f64> {
        self.components
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub fn state_to_bloch(rho: &ComplexMatrix) -> Result<BlochVector> {
    rho.require_hermitian()?;
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::NotUnitTrace { trace });
    }
    let basis = generator_basis(rho.rows());
    Ok(BlochVector {
        dim: rho.rows(),
        components: basis.project(rho),
    })
}

/// `1/d + Σ b_i λ_i`. Positivity is not checked.
pub fn bloch_to_state(b: &BlochVector) -> ComplexMatrix {
    let d = b.dim;
    let basis = generator_basis(d);
    let identity = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    &identity + &basis.combine(&b.components)
}

/// Coefficients of `O = a0·1 + Σ a_i λ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableCoeffs {
    dim: usize,
    pub a0: f64,
    pub a: Vec<f64>,
}

impl ObservableCoeffs {
    pub fn new(dim: usize, a0: f64, a: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InconsistentDimensions(format!("dimension {dim} < 2")));
        }
        if a.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch {
                expected: dim * dim - 1,
                got: a.len(),
            });
        }
        Ok(Self { dim, a0, a })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `|a|`, the norm of the traceless part's coordinates.
    pub fn a_norm(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `Tr(ρ O) = a0 + 2 a·b` for `ρ` with Bloch vector `b`.
    pub fn expectation(&self, b: &BlochVector) -> f64 {
        assert_eq!(b.dim, self.dim, "dimension mismatch");
        self.a0 + 2.0 * dot(&self.a, &b.components)
    }

    /// `a0/2 + a·b - 1/2`, half of `Tr(ρ O) - 1`.
    pub fn masking_defect(&self, b: &[f64]) -> f64 {
        0.5 * self.a0 + dot(&self.a, b) - 0.5
    }
}

pub fn observable_coeffs(o: &ComplexMatrix) -> Result<ObservableCoeffs> {
    o.require_hermitian()?;
    let d = o.rows();
    if d < 2 {
        return Err(Error::InconsistentDimensions("observable of dimension 1".into()));
    }
    let basis = generator_basis(d);
    Ok(ObservableCoeffs {
        dim: d,
        a0: o.trace().re / d as f64,
        a: basis.project(o),
    })
}

pub fn coeffs_to_observable(c: &ObservableCoeffs) -> ComplexMatrix {
    let basis = generator_basis(c.dim);
    &ComplexMatrix::identity(c.dim).scale_real(c.a0) + &basis.combine(&c.a)
}

/// Values of the `d - 1` positivity conditions and the overall verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityConditions {
    /// `values[k]` is the elementary symmetric polynomial `e_{k+2}` of the
    /// eigenvalues of the reconstructed matrix.
    pub values: Vec<f64>,
    pub positive: bool,
}

/// Evaluates positivity of `1/d + Σ b_i λ_i` without an eigensolve.
///
/// A Hermitian matrix with real spectrum is positive semidefinite exactly
/// when every elementary symmetric polynomial of its eigenvalues is
/// nonnegative. Those come from the power sums `Tr ρ^p` via Newton's
/// identities.
pub fn positivity_conditions(b: &BlochVector) -> PositivityConditions {
    let d = b.dim;
    let rho = bloch_to_state(b);
    let sums = power_sums(&rho, d);
    let e = elementary_from_power_sums(&sums);
    let values = e[2..].to_vec();
    let positive = values.iter().all(|&v| v >= -tol::POSITIVITY);
    PositivityConditions { values, positive }
}

/// `[Tr ρ, Tr ρ², …, Tr ρ^n]`.
fn power_sums(rho: &ComplexMatrix, n: usize) -> Vec<f64> {
    let mut sums = Vec::with_capacity(n);
    sums.push(rho.trace().re);
    let mut power = rho.clone();
    for p in 2..=n {
        if p == n {
            sums.push(trace_product(&power, rho).re);
        } else {
            power = &power * rho;
            sums.push(power.trace().re);
        }
    }
    sums
}

/// Newton's identities: `k e_k = Σ_{i=1..k} (-1)^{i-1} e_{k-i} p_i`.
/// Returns `[e_0, e_1, …, e_n]`.
pub fn elementary_from_power_sums(power_sums: &[f64]) -> Vec<f64> {
    let n = power_sums.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for k in 1..=n {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * power_sums[i - 1];
        }
        e[k] = acc / k as f64;
    }
    e
}

/// The ball condition `(d-1)/d - 2|b|²`, equal to `2 e_2`.
pub fn ball_condition(b: &BlochVector) -> f64 {
    let d = b.dim as f64;
    (d - 1.0) / d - 2.0 * b.norm().powi(2)
}

/// The cubic condition `(d-1)(d-2)/d² - 6(d-2)/d |b|² + 4 Σ g_ijk b_i b_j b_k`
/// with `g` as in [`symmetric_tensor`]. With that normalization it equals
/// `6 e_3`, which ties the tensor form to the power-sum route.
pub fn cubic_condition(b: &BlochVector, g: &SymmetricTensor) -> f64 {
    assert_eq!(g.dim, b.dim, "dimension mismatch");
    let d = b.dim as f64;
    let r2 = b.norm().powi(2);
    (d - 1.0) * (d - 2.0) / (d * d) - 6.0 * (d - 2.0) / d * r2 + 4.0 * g.cubic_form(&b.components)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
