//! Comaskable sets.
//!
//! For a set `S` of output states, `C_S` collects every observable `(a0, a)`
//! with `a0/2 + a·r = 1/2` (that is, `Tr(ρ_r O) = 1`) for all `r ∈ S`. These are linear constraints, so
//! `C_S` is an affine set in the `d²`-dimensional coefficient space, indexed
//! as `(a0, a_1, …, a_{d²−1})`.

use crate::algebra::{eig_hermitian, numerical_rank, pseudo_inverse, real_row_space, real_singular_values, ComplexMatrix};
use crate::bloch::{bloch_to_state, dot, positivity_conditions, state_to_bloch, BlochVector, ObservableCoeffs};
use crate::error::{Error, Result};
use crate::masking::cross;
use crate::tol;

/// `base + span(directions)` with orthonormal directions.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSet {
    ambient_dim: usize,
    base: Vec<f64>,
    directions: Vec<Vec<f64>>,
}

impl AffineSet {
    /// Orthonormalizes `directions`; dependent directions are an error.
    pub fn new(base: Vec<f64>, directions: Vec<Vec<f64>>) -> Result<Self> {
        let n = base.len();
        if let Some(v) = directions.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let count = directions.len();
        let directions = real_row_space(&directions, n)?;
        if directions.len() != count {
            return Err(Error::Degenerate(format!(
                "{count} directions span only {} dimensions",
                directions.len()
            )));
        }
        Ok(Self {
            ambient_dim: n,
            base,
            directions,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn affine_dim(&self) -> usize {
        self.directions.len()
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    /// `base + Σ coeffs_i · directions_i`.
    pub fn point(&self, coeffs: &[f64]) -> Vec<f64> {
        self.combine(coeffs).iter().zip(&self.base).map(|(a, b)| a + b).collect()
    }

    /// Distance from `x` to the set.
    pub fn distance(&self, x: &[f64]) -> f64 {
        let mut r: Vec<f64> = x.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        for v in &self.directions {
            let c = dot(&r, v);
            r.iter_mut().zip(v).for_each(|(ri, vi)| *ri -= c * vi);
        }
        dot(&r, &r).sqrt()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.ambient_dim && self.distance(x) <= tol
    }

    /// Intersection with the hyperplane `x[coord] = value`.
    pub fn slice(&self, coord: usize, value: f64) -> Result<AffineSet> {
        let g: Vec<f64> = self.directions.iter().map(|v| v[coord]).collect();
        let g2 = dot(&g, &g);
        let offset = value - self.base[coord];
        if g2.sqrt() <= tol::GEOMETRY {
            if offset.abs() <= tol::BOUNDARY {
                return Ok(self.clone());
            }
            return Err(Error::Degenerate(format!(
                "coordinate {coord} is fixed at {} in this set",
                self.base[coord]
            )));
        }
        let particular: Vec<f64> = g.iter().map(|x| x * offset / g2).collect();
        let m = g.len();
        let projector: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| f64::from(u8::from(i == j)) - g[i] * g[j] / g2)
                    .collect()
            })
            .collect();
        let kernel = real_row_space(&projector, m)?;
        let directions = kernel.iter().map(|c| self.combine(c)).collect();
        AffineSet::new(self.point(&particular), directions)
    }

    /// `Σ coeffs_i · directions_i`.
    fn combine(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.ambient_dim];
        for (c, v) in coeffs.iter().zip(&self.directions) {
            x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += c * vi);
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComaskKind {
    Singleton,
    Line,
    Plane,
    General,
}

impl ComaskKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Singleton => "singleton",
            Self::Line => "line",
            Self::Plane => "plane",
            Self::General => "general",
        }
    }
}

/// `C_S` for a set `S` given by generator points.
#[derive(Debug, Clone, PartialEq)]
pub struct ComaskDescription {
    pub kind: ComaskKind,
    pub dim: usize,
    /// Over `(a0, a)`, ambient dimension `d²`.
    pub set: AffineSet,
    pub a0_fixed: Option<f64>,
    pub generators: Vec<Vec<f64>>,
}

impl ComaskDescription {
    /// Largest `|a0/2 + a·r − 1/2|` over the generators `r`.
    pub fn defect(&self, element: &[f64]) -> f64 {
        self.generators
            .iter()
            .map(|r| (0.5 * element[0] + dot(&element[1..], r) - 0.5).abs())
            .fold(0.0, f64::max)
    }

    pub fn coeffs(&self, element: &[f64]) -> Result<ObservableCoeffs> {
        ObservableCoeffs::new(self.dim, element[0], element[1..].to_vec())
    }
}

fn len3(v: [f64; 3]) -> f64 {
    dot(&v, &v).sqrt()
}

fn require_qubit_state(b: [f64; 3]) -> Result<()> {
    if len3(b) > 0.5 + tol::POSITIVITY {
        return Err(Error::InvalidState(format!(
            "Bloch vector of length {} lies outside the ball",
            len3(b)
        )));
    }
    Ok(())
}

/// Prepends a zero `a0` coordinate.
fn lift(a: [f64; 3]) -> Vec<f64> {
    let mut v = vec![0.0];
    v.extend_from_slice(&a);
    v
}

/// Single qubit output state `b`: the plane `{a : a·b = 1/2}` at `a0 = 0`.
pub fn comask_from_point(b: [f64; 3]) -> Result<ComaskDescription> {
    require_qubit_state(b)?;
    let r2 = dot(&b, &b);
    if r2.sqrt() < tol::GEOMETRY {
        return Err(Error::DegenerateState(
            "the maximally mixed output admits no observable with a0 = 0".into(),
        ));
    }
    let particular = b.map(|x| x / (2.0 * r2));
    let unit = b.map(|x| x / r2.sqrt());
    let projector: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| f64::from(u8::from(i == j)) - unit[i] * unit[j])
                .collect()
        })
        .collect();
    let directions = real_row_space(&projector, 3)?
        .into_iter()
        .map(|w| lift([w[0], w[1], w[2]]))
        .collect();
    Ok(ComaskDescription {
        kind: ComaskKind::Plane,
        dim: 2,
        set: AffineSet::new(lift(particular), directions)?,
        a0_fixed: Some(0.0),
        generators: vec![b.to_vec()],
    })
}

/// Segment from `p` to `q`: the line `{a + λ n⊥}` with `n⊥` normal to
/// `span{p, q}`.
pub fn comask_from_line(p: [f64; 3], q: [f64; 3]) -> Result<ComaskDescription> {
    require_qubit_state(p)?;
    require_qubit_state(q)?;
    if len3([p[0] - q[0], p[1] - q[1], p[2] - q[2]]) < tol::GEOMETRY {
        return Err(Error::IdenticalPoints);
    }
    let n = cross(p, q);
    let scale = len3(p).max(len3(q));
    if len3(n) <= 1e-9 * scale * scale {
        return Err(Error::DegenerateLine(
            "segment is collinear with the origin".into(),
        ));
    }
    let normal = n.map(|x| x / len3(n));
    // Minimum-norm solution in span{p, q} of a·p = a·q = 1/2.
    let (pp, pq, qq) = (dot(&p, &p), dot(&p, &q), dot(&q, &q));
    let det = pp * qq - pq * pq;
    let alpha = 0.5 * (qq - pq) / det;
    let beta = 0.5 * (pp - pq) / det;
    let particular: [f64; 3] = std::array::from_fn(|k| alpha * p[k] + beta * q[k]);
    Ok(ComaskDescription {
        kind: ComaskKind::Line,
        dim: 2,
        set: AffineSet::new(lift(particular), vec![lift(normal)])?,
        a0_fixed: Some(0.0),
        generators: vec![p.to_vec(), q.to_vec()],
    })
}

/// Affine dimension of a point set.
pub fn affine_dimension(points: &[Vec<f64>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((first, rest)) => {
            let diffs: Vec<Vec<f64>> = rest
                .iter()
                .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
                .collect();
            numerical_rank(&real_singular_values(&diffs, first.len()))
        }
    }
}

/// Planar qubit set: the unique `a` with `a·r = 1/2` on every point.
pub fn comask_from_planar(points: &[[f64; 3]]) -> Result<ComaskDescription> {
    for &p in points {
        require_qubit_state(p)?;
    }
    let rows: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
    let k = affine_dimension(&rows);
    if k < 2 {
        return Err(Error::Degenerate(format!(
            "points span an affine set of dimension {k}, need 2"
        )));
    }
    let m = ComplexMatrix::from_fn(rows.len(), 3, |i, j| rows[i][j].into());
    let pinv = pseudo_inverse(&m)?;
    let a: [f64; 3] = std::array::from_fn(|i| (0..rows.len()).map(|j| pinv[(i, j)].re * 0.5).sum());
    let residual = rows
        .iter()
        .map(|r| (dot(r, &a) - 0.5).abs())
        .fold(0.0, f64::max);
    if residual > tol::MASKING {
        return Err(Error::Inconsistent { residual });
    }
    Ok(ComaskDescription {
        kind: ComaskKind::Singleton,
        dim: 2,
        set: AffineSet::new(lift(a), Vec::new())?,
        a0_fixed: Some(0.0),
        generators: rows,
    })
}

/// `C_S` in any dimension, with `a0` free. Its affine dimension is
/// `d² − k − 1` where `k` is the affine dimension of the points.
pub fn comask_general(points: &[Vec<f64>], d: usize) -> Result<ComaskDescription> {
    let n = d * d - 1;
    let Some(first) = points.first() else {
        return Err(Error::Degenerate("no output states given".into()));
    };
    for p in points {
        let b = BlochVector::new(d, p.clone())?;
        if !positivity_conditions(&b).positive {
            return Err(Error::InvalidState(
                "point violates the positivity conditions".into(),
            ));
        }
    }
    let diffs: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    let span = real_row_space(&diffs, n)?;
    // m = component of b_0 orthogonal to the difference space.
    let mut m = first.clone();
    for v in &span {
        let c = dot(&m, v);
        m.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
    }
    let complement = orthogonal_complement(&span, n)?;
    let directions = complement
        .iter()
        .map(|w| {
            let mut v = vec![-2.0 * dot(w, &m)];
            v.extend_from_slice(w);
            v
        })
        .collect();
    let mut base = vec![0.0; d * d];
    base[0] = 1.0;
    Ok(ComaskDescription {
        kind: ComaskKind::General,
        dim: d,
        set: AffineSet::new(base, directions)?,
        a0_fixed: None,
        generators: points.to_vec(),
    })
}

/// Orthonormal basis of the complement of an orthonormal family in `R^n`.
fn orthogonal_complement(family: &[Vec<f64>], n: usize) -> Result<Vec<Vec<f64>>> {
    let projector: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let overlap: f64 = family.iter().map(|v| v[i] * v[j]).sum();
                    f64::from(u8::from(i == j)) - overlap
                })
                .collect()
        })
        .collect();
    real_row_space(&projector, n)
}

/// Observable masked at output `b'` but not at `b`.
pub fn universal_counterexample(b: &[f64], b_prime: &[f64], d: usize) -> Result<ObservableCoeffs> {
    let n = d * d - 1;
    for v in [b, b_prime] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let diff: Vec<f64> = b.iter().zip(b_prime).map(|(x, y)| x - y).collect();
    let len = dot(&diff, &diff).sqrt();
    if len < tol::GEOMETRY {
        return Err(Error::IdenticalPoints);
    }
    let a: Vec<f64> = diff.iter().map(|x| x / len).collect();
    let a0 = 1.0 - 2.0 * dot(&a, b_prime);
    ObservableCoeffs::new(d, a0, a)
}

/// Output of a successful [`find_common_output_state`].
#[derive(Debug, Clone)]
pub struct CommonState {
    pub state: ComplexMatrix,
    pub bloch: BlochVector,
    /// Largest `|a0/2 + a·b − 1/2|` over the observables.
    pub residual: f64,
    pub iterations: usize,
}

const MAX_ITERATIONS: usize = 10_000;
const CONVERGED: f64 = 1e-9;
const STALL_DISTANCE: f64 = 1e-6;
const STALL_WINDOW: usize = 100;
const FINAL_RESIDUAL: f64 = 1e-7;

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            shift = t;
        }
    }
    v.iter().map(|x| (x - shift).max(0.0)).collect()
}

fn project_states(b: &[f64], d: usize) -> Result<Vec<f64>> {
    let rho = bloch_to_state(&BlochVector::new(d, b.to_vec())?);
    let e = eig_hermitian(&rho)?;
    let p = project_simplex(&e.eigenvalues);
    let projected = ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|k| e.eigenvectors[(i, k)] * e.eigenvectors[(j, k)].conj() * p[k])
            .sum()
    });
    Ok(state_to_bloch(&projected)?.into_components())
}

/// Finds an output state shared by the maskers of every observable, by
/// alternating projections between the constraint set and the state space.
pub fn find_common_output_state(observables: &[ObservableCoeffs], d: usize) -> Result<CommonState> {
    if observables.is_empty() {
        return Err(Error::Degenerate("no observables given".into()));
    }
    if let Some(c) = observables.iter().find(|c| c.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: c.dim(),
        });
    }
    let n = d * d - 1;
    let a = ComplexMatrix::from_fn(observables.len(), n, |i, j| observables[i].a[j].into());
    let rhs: Vec<f64> = observables.iter().map(|c| 0.5 - 0.5 * c.a0).collect();
    let pinv = pseudo_inverse(&a)?;
    let apply_pinv = |r: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| r.iter().enumerate().map(|(j, x)| pinv[(i, j)].re * x).sum())
            .collect()
    };
    let constraint_gap = |x: &[f64]| -> Vec<f64> {
        observables
            .iter()
            .zip(&rhs)
            .map(|(c, r)| dot(&c.a, x) - r)
            .collect()
    };
    let max_abs = |v: &[f64]| v.iter().map(|x| x.abs()).fold(0.0, f64::max);

    let mut x = apply_pinv(&rhs);
    let residual = max_abs(&constraint_gap(&x));
    if residual > tol::MASKING {
        return Err(Error::NoAffineSolution { residual });
    }
    let mut checkpoint = f64::INFINITY;
    let mut distance = f64::INFINITY;
    let mut y = x.clone();
    for iteration in 1..=MAX_ITERATIONS {
        y = project_states(&x, d)?;
        distance = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if distance < CONVERGED {
            let residual = max_abs(&constraint_gap(&y));
            return finish(y, d, residual, iteration);
        }
        if iteration % STALL_WINDOW == 0 {
            if distance > STALL_DISTANCE && checkpoint - distance < STALL_DISTANCE * distance {
                return Err(Error::Infeasible {
                    distance,
                    iterations: iteration,
                });
            }
            checkpoint = distance;
        }
        let gap = constraint_gap(&y);
        let correction = apply_pinv(&gap);
        x = y.iter().zip(&correction).map(|(a, b)| a - b).collect();
    }
    let residual = max_abs(&constraint_gap(&y));
    if residual < FINAL_RESIDUAL {
        return finish(y, d, residual, MAX_ITERATIONS);
    }
    Err(Error::Infeasible {
        distance,
        iterations: MAX_ITERATIONS,
    })
}

fn finish(b: Vec<f64>, d: usize, residual: f64, iterations: usize) -> Result<CommonState> {
    let bloch = BlochVector::new(d, b)?;
    Ok(CommonState {
        state: bloch_to_state(&bloch),
        bloch,
        residual,
        iterations,
    })
}
