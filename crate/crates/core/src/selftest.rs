//! Quick invariant suites for the `selftest` command.

use std::thread;

use rand::Rng;

use crate::algebra::{eig_hermitian, pauli_dot, ComplexMatrix};
use crate::bitcommit::{cheating_unitary, concealment_gap, make_commitment_pair};
use crate::bloch::{bloch_to_state, observable_coeffs, positivity_conditions, state_to_bloch, BlochVector};
use crate::comask::{affine_dimension, comask_general};
use crate::error::Result;
use crate::masking::{build_constant_masker, decide_maskable_oracle, decide_maskable_qubit, verify_masking, verify_nohiding};
use crate::random::{self, SeededRng};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Suite = fn(&mut SeededRng) -> Result<(usize, usize)>;

const SUITES: [(&str, Suite); 7] = [
    ("eigensolver", eigensolver),
    ("qubit_criterion", qubit_criterion),
    ("constant_maskers", constant_maskers),
    ("no_hiding", no_hiding),
    ("positivity", positivity),
    ("comask_dimension", comask_dimension),
    ("commitment", commitment),
];

/// Runs every suite on its own thread, each with a fixed seed.
pub fn run_all() -> Vec<SuiteResult> {
    thread::scope(|scope| {
        let handles: Vec<_> = SUITES
            .iter()
            .enumerate()
            .map(|(k, &(name, suite))| {
                scope.spawn(move || {
                    let mut rng = random::seeded(1000 + k as u64);
                    let (checks, failures) = suite(&mut rng).unwrap_or((1, 1));
                    SuiteResult { name, checks, failures }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}

fn tally(results: impl IntoIterator<Item = Result<bool>>) -> Result<(usize, usize)> {
    let mut checks = 0;
    let mut failures = 0;
    for r in results {
        checks += 1;
        failures += usize::from(!r?);
    }
    Ok((checks, failures))
}

fn eigensolver(rng: &mut SeededRng) -> Result<(usize, usize)> {
    tally((0..200).map(|k| {
        let m = random::hermitian(rng, 2 + k % 5);
        let e = eig_hermitian(&m)?;
        Ok(e.reconstruct().max_abs_diff(&m) < 1e-10 && e.eigenvalues.windows(2).all(|w| w[0] <= w[1]))
    }))
}

fn qubit_criterion(rng: &mut SeededRng) -> Result<(usize, usize)> {
    tally((0..2000).map(|_| {
        let a0 = rng.random_range(-3.0..3.0);
        let a: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let o = &ComplexMatrix::identity(2).scale_real(a0) + &pauli_dot(a);
        let c = observable_coeffs(&o)?;
        let band = (c.a_norm() - (1.0 - c.a0).abs()).abs() < 1e-9;
        Ok(band || decide_maskable_qubit(&c)?.maskable == decide_maskable_oracle(&o)?.maskable)
    }))
}

fn constant_maskers(rng: &mut SeededRng) -> Result<(usize, usize)> {
    let mut outcomes = Vec::new();
    for d in 2..=5 {
        for _ in 0..50 {
            let mut o = random::hermitian(rng, d);
            let e = eig_hermitian(&o)?;
            // Shift so that 1 lies inside the spectrum.
            let target = e.min() + rng.random::<f64>() * (e.max() - e.min());
            o = &o + &ComplexMatrix::identity(d).scale_real(1.0 - target);
            let channel = build_constant_masker(&o)?;
            outcomes.push(Ok(verify_masking(&channel, &o)? < 1e-9));
        }
    }
    tally(outcomes)
}

fn no_hiding(rng: &mut SeededRng) -> Result<(usize, usize)> {
    tally((0..200).map(|_| {
        let v = random::real_unit_vector(rng, 3);
        let u0 = random::unitary(rng, 2);
        let u1 = random::unitary(rng, 2);
        Ok(verify_nohiding([v[0], v[1], v[2]], &u0, &u1)?.verified)
    }))
}

fn positivity(rng: &mut SeededRng) -> Result<(usize, usize)> {
    tally((0..600).map(|k| {
        let d = 2 + k % 3;
        let n = d * d - 1;
        let dir = random::real_unit_vector(rng, n);
        let r = rng.random_range(0.0..0.8);
        let b = BlochVector::new(d, dir.iter().map(|x| x * r).collect())?;
        let by_eig = eig_hermitian(&bloch_to_state(&b))?.min() >= -1e-9;
        Ok(positivity_conditions(&b).positive == by_eig || near_boundary(&b)?)
    }))
}

fn near_boundary(b: &BlochVector) -> Result<bool> {
    Ok(eig_hermitian(&bloch_to_state(b))?.min().abs() < 1e-7)
}

fn comask_dimension(rng: &mut SeededRng) -> Result<(usize, usize)> {
    let mut outcomes = Vec::new();
    for d in [2usize, 3] {
        for k in 0..=3usize {
            let pts = (0..=k)
                .map(|_| Ok(state_to_bloch(&random::density_matrix(rng, d))?.into_components()))
                .collect::<Result<Vec<_>>>()?;
            let c = comask_general(&pts, d)?;
            outcomes.push(Ok(affine_dimension(&pts) == k && c.set.affine_dim() == d * d - k - 1));
        }
    }
    tally(outcomes)
}

fn commitment(rng: &mut SeededRng) -> Result<(usize, usize)> {
    tally((0..20).map(|k| {
        let d = 2 + k % 2;
        let lambda = random::full_rank_spectrum(rng, d, 0.1);
        let a0 = random::orthonormal_family(rng, d, d);
        let a1 = random::orthonormal_family(rng, d, d);
        let b = random::orthonormal_family(rng, d, d);
        let pair = make_commitment_pair(&lambda, &a0, &a1, &b)?;
        let cheat = cheating_unitary(&pair)?;
        Ok(concealment_gap(&pair)? < 1e-10 && cheat.feasible && cheat.fidelity > 1.0 - 1e-9)
    }))
}
