//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use obsmask::algebra::{eig_hermitian, ket, ketbra, outer, pauli, pauli_dot};
use obsmask::bitcommit::{cheating_unitary, make_commitment_pair, no_bit_commitment_demo};
use obsmask::bloch::{
    bloch_to_state, coeffs_to_observable, observable_coeffs, positivity_conditions, state_to_bloch, BlochVector,
    ObservableCoeffs,
};
use obsmask::comask::{affine_dimension, comask_from_point, comask_general, find_common_output_state, universal_counterexample};
use obsmask::masking::{
    build_constant_masker, build_masker_swap, decide_maskable_oracle, decide_maskable_qubit, necessary_condition_d,
    verify_masking, verify_nohiding,
};
use obsmask::random::{self, SeededRng};
use obsmask::{ComplexMatrix, Error, C64};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn random_coeffs(rng: &mut SeededRng, d: usize, a0_range: (f64, f64), a_max: f64) -> ObservableCoeffs {
    let dir = random::real_unit_vector(rng, d * d - 1);
    let r = rng.random_range(0.0..a_max);
    let a0 = rng.random_range(a0_range.0..a0_range.1);
    ObservableCoeffs::new(d, a0, dir.into_iter().map(|x| x * r).collect()).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = random::seeded(101);
    let (mut disagreements, mut band, mut maskable) = (0, 0, 0);
    let samples = 100_000;
    for _ in 0..samples {
        let a0 = rng.random_range(-3.0..3.0);
        let a: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let o = &ComplexMatrix::identity(2).scale_real(a0) + &pauli_dot(a);
        let c = observable_coeffs(&o).unwrap();
        if (c.a_norm() - (1.0 - c.a0).abs()).abs() < 1e-9 {
            band += 1;
            continue;
        }
        let bloch = decide_maskable_qubit(&c).unwrap().maskable;
        let oracle = decide_maskable_oracle(&o).unwrap().maskable;
        maskable += usize::from(oracle);
        disagreements += usize::from(bloch != oracle);
    }
    outcome(
        disagreements == 0,
        format!("{disagreements} disagreements in {samples} samples ({maskable} maskable, {band} in boundary band)"),
    )
}

fn necessity_in_d() -> Outcome {
    let mut rng = random::seeded(202);
    let mut violations = 0;
    let mut witnesses = Vec::new();
    for d in 2..=5 {
        let mut witness = 0;
        for _ in 0..10_000 {
            let c = random_coeffs(&mut rng, d, (-2.0, 4.0), 2.0);
            let o = coeffs_to_observable(&c);
            let oracle = decide_maskable_oracle(&o).unwrap().maskable;
            let necessary = necessary_condition_d(&c);
            if oracle && !necessary {
                violations += 1;
            }
            if !necessary && !oracle {
                witness += 1;
            }
        }
        witnesses.push(witness);
    }
    outcome(
        violations == 0 && witnesses.iter().all(|&w| w > 0),
        format!("{violations} maskable observables violate the bound; unmaskable witnesses per d=2..5: {witnesses:?}"),
    )
}

fn masker_correctness() -> Outcome {
    let mut rng = random::seeded(303);
    let s3 = pauli(3);
    let (swap, _) = build_masker_swap([0.0, 0.0, 1.0]).unwrap();
    let constant = build_constant_masker(&s3).unwrap();
    let expected_kraus = [ketbra(2, 0, 0), ketbra(2, 0, 1)];
    let kraus_ok = [&swap, &constant].iter().all(|e| {
        e.kraus().len() == 2 && e.kraus().iter().zip(&expected_kraus).all(|(a, b)| a.max_abs_diff(b) < 1e-12)
    });
    let ket0 = outer(&ket(2, 0), &ket(2, 0));
    let mut forward_ok = true;
    for _ in 0..50 {
        let rho = random::density_matrix(&mut rng, 2);
        let out = swap.apply_forward(&rho).unwrap();
        let b = state_to_bloch(&out).unwrap();
        forward_ok &= out.max_abs_diff(&ket0) < 1e-10;
        forward_ok &= b.components().iter().zip([0.0, 0.0, 0.5]).all(|(x, y)| (x - y).abs() < 1e-10);
    }
    let residual = verify_masking(&swap, &s3).unwrap();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for d in 2..=5 {
        for k in 0..1000 {
            let h = random::hermitian(&mut rng, d);
            let e = eig_hermitian(&h).unwrap();
            // Every tenth observable puts 1 exactly at an end of the spectrum.
            let target = match k % 10 {
                0 => e.min(),
                1 => e.max(),
                _ => rng.random_range(e.min()..e.max()),
            };
            let o = &h + &ComplexMatrix::identity(d).scale_real(1.0 - target);
            let r = verify_masking(&build_constant_masker(&o).unwrap(), &o).unwrap();
            worst = worst.max(r);
            failures += usize::from(r >= 1e-9);
        }
    }
    outcome(
        kraus_ok && forward_ok && residual < 1e-9 && failures == 0,
        format!(
            "kraus {kraus_ok}, forward image {forward_ok}, sigma3 residual {residual:.1e}, \
             constant maskers {failures}/4000 failed (worst {worst:.1e})"
        ),
    )
}

fn no_universal_qubit_masker() -> Outcome {
    let (swap, _) = build_masker_swap([0.0, 0.0, 1.0]).unwrap();
    let r1 = verify_masking(&swap, &pauli(1)).unwrap();
    let r2 = verify_masking(&swap, &pauli(2)).unwrap();
    let s3 = ObservableCoeffs::new(2, 0.0, vec![0.0, 0.0, 1.0]).unwrap();
    let s1 = ObservableCoeffs::new(2, 0.0, vec![1.0, 0.0, 0.0]).unwrap();
    let common = find_common_output_state(&[s3, s1], 2);
    let infeasible = matches!(common, Err(Error::Infeasible { .. }));
    outcome(
        r1 > 0.9 && r2 > 0.9 && infeasible,
        format!("residual on sigma1 {r1}, on sigma2 {r2}, common state for {{sigma3, sigma1}} infeasible: {infeasible}"),
    )
}

fn no_hiding() -> Outcome {
    let mut rng = random::seeded(505);
    let id = ComplexMatrix::identity(2);
    let (mut system, mut recovery): (f64, f64) = (0.0, 0.0);
    for k in 0..1000 {
        let v = random::real_unit_vector(&mut rng, 3);
        let n = [v[0], v[1], v[2]];
        let (u0, u1) = if k % 2 == 0 {
            (id.clone(), id.clone())
        } else {
            (random::unitary(&mut rng, 2), random::unitary(&mut rng, 2))
        };
        let r = verify_nohiding(n, &u0, &u1).unwrap();
        system = system.max(r.residual_system);
        recovery = recovery.max(r.residual_recovery);
    }
    outcome(
        system < 1e-10 && recovery < 1e-10,
        format!("worst system residual {system:.1e}, worst recovery residual {recovery:.1e} over 1000 directions"),
    )
}

fn comask_geometry() -> Outcome {
    let mut rng = random::seeded(606);
    let c = comask_from_point([0.0, 0.0, 0.5]).unwrap();
    let mut membership = true;
    for _ in 0..100 {
        let m1 = rng.random_range(-10.0..10.0);
        let m2 = rng.random_range(-10.0..10.0);
        membership &= c.set.contains(&[0.0, m1, m2, 1.0], 1e-9);
        let coeffs = [rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)];
        let x = c.set.point(&coeffs);
        membership &= x[0].abs() < 1e-9 && (x[3] - 1.0).abs() < 1e-9;
    }
    let mut formula_failures = 0;
    let mut max_defect: f64 = 0.0;
    for t in 0..200 {
        let d = 2 + t % 2;
        let k = (t / 2) % 4;
        let points: Vec<Vec<f64>> = (0..=k)
            .map(|_| state_to_bloch(&random::density_matrix(&mut rng, d)).unwrap().into_components())
            .collect();
        let g = comask_general(&points, d).unwrap();
        if affine_dimension(&points) != k || g.set.affine_dim() != d * d - k - 1 {
            formula_failures += 1;
        }
        let coeffs: Vec<f64> = (0..g.set.affine_dim()).map(|_| rng.random_range(-3.0..3.0)).collect();
        max_defect = max_defect.max(g.defect(&g.set.point(&coeffs)));
    }
    outcome(
        membership && formula_failures == 0 && max_defect < 1e-10,
        format!(
            "plane membership {membership}, dimension formula failures {formula_failures}/200, \
             worst sampled defect {max_defect:.1e}"
        ),
    )
}

fn universal_witness() -> Outcome {
    let mut rng = random::seeded(707);
    let (mut at_b_prime, mut at_b): (f64, f64) = (0.0, f64::INFINITY);
    for t in 0..100 {
        let d = 2 + t % 3;
        let b = state_to_bloch(&random::density_matrix(&mut rng, d)).unwrap().into_components();
        let b_prime = state_to_bloch(&random::density_matrix(&mut rng, d)).unwrap().into_components();
        let c = universal_counterexample(&b, &b_prime, d).unwrap();
        at_b_prime = at_b_prime.max(c.masking_defect(&b_prime).abs());
        at_b = at_b.min(c.masking_defect(&b).abs());
    }
    outcome(
        at_b_prime < 1e-10 && at_b > 1e-6,
        format!("worst defect at b' {at_b_prime:.1e}, smallest miss at b {at_b:.1e}"),
    )
}

fn bit_commitment() -> Outcome {
    let mut failures = Vec::new();
    for d in [2usize, 3] {
        for seed in 1..=50u64 {
            let r = no_bit_commitment_demo(d, seed).unwrap();
            let ok = r.concealment_gap < 1e-10
                && r.cheat_fidelity > 1.0 - 1e-9
                && r.hiding_passed == r.observables
                && r.max_hiding_residual < 1e-9;
            if !ok {
                failures.push((d, seed));
            }
        }
    }
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let standard = vec![ket(2, 0), ket(2, 1)];
    let plus_minus = vec![vec![h, h], vec![h, -h]];
    let pair = make_commitment_pair(&[0.5, 0.5], &standard, &plus_minus, &standard).unwrap();
    let cheat = cheating_unitary(&pair).unwrap();
    let hadamard = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).scale_real(h.re);
    let golden = cheat.unitary_a.max_abs_diff(&hadamard);
    outcome(
        failures.is_empty() && golden < 1e-10,
        format!("failing (d, seed): {failures:?}; Bell/Hadamard deviation {golden:.1e}"),
    )
}

fn positivity_machinery() -> Outcome {
    let mut rng = random::seeded(909);
    let mut disagreements = 0;
    let mut identity: f64 = 0.0;
    for d in 2..=4 {
        let n = d * d - 1;
        let outer_radius = ((d - 1) as f64 / (2 * d) as f64).sqrt();
        for _ in 0..10_000 {
            let dir = random::real_unit_vector(&mut rng, n);
            let r = rng.random_range(0.0..1.2 * outer_radius);
            let b = BlochVector::new(d, dir.iter().map(|x| x * r).collect()).unwrap();
            let p = positivity_conditions(&b);
            let by_eig = eig_hermitian(&bloch_to_state(&b)).unwrap().min() >= -1e-9;
            disagreements += usize::from(p.positive != by_eig);
            let target = (d - 1) as f64 / d as f64 - 2.0 * r * r;
            identity = identity.max((2.0 * p.values[0] - target).abs());
        }
    }
    outcome(
        disagreements == 0 && identity < 1e-10,
        format!("{disagreements} verdict disagreements in 30000 samples, worst e2 identity error {identity:.1e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("necessity in d", necessity_in_d),
        ("masker correctness", masker_correctness),
        ("no universal qubit masker", no_universal_qubit_masker),
        ("no-hiding", no_hiding),
        ("comaskable geometry", comask_geometry),
        ("universal-masker counterexample", universal_witness),
        ("bit-commitment reduction", bit_commitment),
        ("positivity machinery", positivity_machinery),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {} {name}: {verdict} ({}; {:.2}s)",
            k + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
