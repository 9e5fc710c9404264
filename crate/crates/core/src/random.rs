//! Seeded random generation of states, unitaries, and observables.
//!
//! Everything takes the generator by `&mut` so callers control seeding. The
//! demo and test suites use [`seeded`], a ChaCha8 stream, so outputs are
//! reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{inner, norm, outer, ComplexMatrix, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly random unit vector in `C^d`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| gaussian_complex(rng)).collect();
        let n = norm(&v);
        if n > 1e-8 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Uniformly random unit vector in `R^n`.
pub fn real_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-8 {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}

/// Haar-distributed unitary from Gram–Schmidt on Gaussian columns.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(d);
    while columns.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| gaussian_complex(rng)).collect();
        for _ in 0..2 {
            for c in &columns {
                let overlap = inner(c, &v);
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= overlap * y);
            }
        }
        let n = norm(&v);
        if n > 1e-6 {
            columns.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_columns(d, &columns)
}

/// Orthonormal family of `count` vectors in `C^d`.
pub fn orthonormal_family<R: Rng + ?Sized>(rng: &mut R, d: usize, count: usize) -> Vec<Vec<C64>> {
    let u = unitary(rng, d);
    (0..count).map(|j| u.column(j)).collect()
}

/// Random full-rank density matrix: `G G† / Tr(G G†)` with Gaussian `G`.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    let w = &g * &g.adjoint();
    let t = w.trace().re;
    w.scale_real(1.0 / t)
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let v = unit_vector(rng, d);
    outer(&v, &v)
}

/// Random Hermitian matrix `(G + G†)/2` with standard Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random probability vector with every entry at least `floor / n`.
pub fn full_rank_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| floor + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Random Kraus family of `k` operators on `C^d`: blocks of a random
/// isometry `C^d -> C^d ⊗ C^k`.
pub fn kraus_family<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Vec<ComplexMatrix> {
    let u = unitary(rng, d * k);
    (0..k)
        .map(|i| ComplexMatrix::from_fn(d, d, |r, c| u[(r * k + i, c)]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = seeded(3);
        assert!(unitary(&mut rng, 4).unitarity_deviation() < 1e-13);
        let rho = density_matrix(&mut rng, 3);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        assert!(rho.is_hermitian(1e-15));
        let p = full_rank_spectrum(&mut rng, 5, 0.1);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let ks = kraus_family(&mut rng, 2, 3);
        let mut sum = ComplexMatrix::zeros(2, 2);
        for e in &ks {
            sum = &sum + &(&e.adjoint() * e);
        }
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);
    }

    #[test]
    fn seeding_is_reproducible() {
        let a = unitary(&mut seeded(11), 3);
        let b = unitary(&mut seeded(11), 3);
        assert_eq!(a, b);
    }
}
