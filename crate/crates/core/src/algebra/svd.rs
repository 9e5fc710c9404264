//! Singular value decompositions, delegated to `nalgebra`.

use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tol;

/// Thin SVD `M = U diag(s) V†` with singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v_adjoint: ComplexMatrix,
}

impl Svd {
    /// Number of singular values above `RANK_RELATIVE` times the largest.
    pub fn rank(&self) -> usize {
        numerical_rank(&self.singular_values)
    }
}

pub(crate) fn numerical_rank(singular_values: &[f64]) -> usize {
    let largest = singular_values.iter().copied().fold(0.0, f64::max);
    if largest <= tol::GEOMETRY {
        return 0;
    }
    singular_values
        .iter()
        .filter(|&&s| s > tol::RANK_RELATIVE * largest)
        .count()
}

fn to_na(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn from_na(m: &DMatrix<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let na = to_na(m);
    let scale = na.iter().map(|z| z.norm()).fold(1.0, f64::max);
    // nalgebra's complex SVD can return a wrong factorization without
    // reporting failure when the convergence threshold is too tight, so
    // every attempt is checked against the input.
    for eps in [1e-15, 1e-14, 1e-13, f64::EPSILON] {
        let Some(decomposition) = na.clone().try_svd(true, true, eps, 10_000) else {
            continue;
        };
        let (Some(u), Some(v_t)) = (decomposition.u, decomposition.v_t) else {
            continue;
        };
        let s = decomposition.singular_values;
        let rebuilt = &u * DMatrix::from_diagonal(&s.map(|x| C64::new(x, 0.0))) * &v_t;
        if (rebuilt - &na).iter().any(|z| z.norm() > 1e-9 * scale) {
            continue;
        }
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
        let u = from_na(&u);
        let v_t = from_na(&v_t);
        let k = order.len();
        return Ok(Svd {
            u: ComplexMatrix::from_fn(u.rows(), k, |i, j| u[(i, order[j])]),
            singular_values: order.iter().map(|&j| s[j]).collect(),
            v_adjoint: ComplexMatrix::from_fn(k, v_t.cols(), |i, j| v_t[(order[i], j)]),
        });
    }
    Err(Error::NumericalFailure("SVD did not reproduce its input".into()))
}

/// Moore–Penrose pseudoinverse, dropping singular values below
/// `RANK_RELATIVE` times the largest.
pub fn pseudo_inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = svd(m)?;
    let rank = d.rank();
    let mut out = ComplexMatrix::zeros(m.cols(), m.rows());
    for k in 0..rank {
        let inv = 1.0 / d.singular_values[k];
        for i in 0..m.cols() {
            for j in 0..m.rows() {
                out[(i, j)] += d.v_adjoint[(k, i)].conj() * d.u[(j, k)].conj() * inv;
            }
        }
    }
    Ok(out)
}

/// Singular values of a real matrix given as rows, descending.
pub fn real_singular_values(rows: &[Vec<f64>], cols: usize) -> Vec<f64> {
    if rows.is_empty() || cols == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal basis of the row space of a real matrix, from its SVD.
pub fn real_row_space(rows: &[Vec<f64>], cols: usize) -> Result<Vec<Vec<f64>>> {
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let decomposition = m
        .try_svd(false, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
    let v_t = decomposition
        .v_t
        .ok_or_else(|| Error::NumericalFailure("SVD returned no V".into()))?;
    let s = decomposition.singular_values;
    let rank = numerical_rank(s.as_slice());
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    Ok(order[..rank]
        .iter()
        .map(|&k| (0..cols).map(|j| v_t[(k, j)]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::I;

    #[test]
    fn reconstructs_and_sorts() {
        let m = ComplexMatrix::from_rows(&[
            &[C64::new(0.1, 0.0), I, C64::new(2.0, 1.0)],
            &[C64::new(-1.0, 0.5), C64::new(0.0, 0.0), C64::new(0.3, -0.2)],
        ]);
        let d = svd(&m).unwrap();
        assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let sigma = ComplexMatrix::from_diagonal(&d.singular_values);
        let back = &(&d.u * &sigma) * &d.v_adjoint;
        assert!(back.max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn pseudo_inverse_of_rank_one() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let p = pseudo_inverse(&m).unwrap();
        assert!(p.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn rank_one_complex_product() {
        let mut rng = crate::random::seeded(7289577808853987882);
        let a = crate::random::unit_vector(&mut rng, 4);
        let b = crate::random::unit_vector(&mut rng, 4);
        let m = crate::algebra::outer(&a, &b);
        let d = svd(&m).unwrap();
        assert_eq!(d.rank(), 1);
        assert!((d.singular_values[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn real_rank() {
        let rows = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![0.0, 1.0, 0.0]];
        assert_eq!(numerical_rank(&real_singular_values(&rows, 3)), 2);
        let basis = real_row_space(&rows, 3).unwrap();
        assert_eq!(basis.len(), 2);
    }
}
