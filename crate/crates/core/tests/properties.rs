use proptest::prelude::*;

use obsmask::algebra::{
    eig_hermitian, outer, partial_trace, pauli, pauli_dot, schmidt, trace_product, unitary_completion, Subsystem,
};
use obsmask::bitcommit::{cheating_unitary, concealment_gap, make_commitment_pair, measure_prepare_channel};
use obsmask::bloch::{
    bloch_to_state, coeffs_to_observable, observable_coeffs, positivity_conditions, state_to_bloch, BlochVector,
    ObservableCoeffs,
};
use obsmask::channels::KrausChannel;
use obsmask::comask::{comask_general, universal_counterexample};
use obsmask::masking::{
    build_constant_masker, decide_maskable_oracle, decide_maskable_qubit, output_disk, rotation_unitary,
    verify_masking,
};
use obsmask::random;
use obsmask::ComplexMatrix;

fn unit3(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), d in 1usize..8) {
        let m = random::hermitian(&mut random::seeded(seed), d);
        let e = eig_hermitian(&m).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&m) < 1e-10);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(e.eigenvectors.unitarity_deviation() < 1e-10);
    }

    #[test]
    fn partial_traces_compose_to_trace(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let m = random::hermitian(&mut random::seeded(seed), da * db);
        let ra = partial_trace(&m, (da, db), Subsystem::B).unwrap();
        let rb = partial_trace(&m, (da, db), Subsystem::A).unwrap();
        prop_assert!((ra.trace() - m.trace()).norm() < 1e-12);
        prop_assert!((rb.trace() - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn schmidt_matches_marginal_spectra(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let psi = random::unit_vector(&mut random::seeded(seed), da * db);
        let s = schmidt(&psi, (da, db)).unwrap();
        let back = s.reconstruct();
        prop_assert!(back.iter().zip(&psi).all(|(a, b)| (a - b).norm() < 1e-10));
        let rho = outer(&psi, &psi);
        for (over, n) in [(Subsystem::A, db), (Subsystem::B, da)] {
            let e = eig_hermitian(&partial_trace(&rho, (da, db), over).unwrap()).unwrap();
            let mut spectrum: Vec<f64> = e.eigenvalues.iter().rev().copied().collect();
            spectrum.truncate(s.rank());
            prop_assert!(n >= s.rank());
            for (c, l) in s.coefficients.iter().zip(&spectrum) {
                prop_assert!((c * c - l).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn completion_is_unitary(seed in any::<u64>(), d in 1usize..6, k in 0usize..6) {
        let k = k.min(d);
        let mut rng = random::seeded(seed);
        let ins = random::orthonormal_family(&mut rng, d, k);
        let outs = random::orthonormal_family(&mut rng, d, k);
        let u = unitary_completion(&ins, &outs, d).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-10);
        for (a, b) in ins.iter().zip(&outs) {
            prop_assert!(u.mul_vec(a).iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-10));
        }
    }

    #[test]
    fn codecs_round_trip(seed in any::<u64>(), d in 2usize..6) {
        let mut rng = random::seeded(seed);
        let rho = random::density_matrix(&mut rng, d);
        prop_assert!(bloch_to_state(&state_to_bloch(&rho).unwrap()).max_abs_diff(&rho) < 1e-10);
        let o = random::hermitian(&mut rng, d);
        prop_assert!(coeffs_to_observable(&observable_coeffs(&o).unwrap()).max_abs_diff(&o) < 1e-10);
    }

    #[test]
    fn masking_defect_tracks_expectation(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = random::seeded(seed);
        let rho = random::density_matrix(&mut rng, d);
        let o = random::hermitian(&mut rng, d);
        let b = state_to_bloch(&rho).unwrap();
        let c = observable_coeffs(&o).unwrap();
        let t = trace_product(&rho, &o).re;
        prop_assert!((c.expectation(&b) - t).abs() < 1e-10);
        prop_assert!((2.0 * c.masking_defect(b.components()) - (t - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn e2_identity(seed in any::<u64>(), d in 2usize..5, r in 0.0f64..0.8) {
        let dir = random::real_unit_vector(&mut random::seeded(seed), d * d - 1);
        let b = BlochVector::new(d, dir.iter().map(|x| x * r).collect()).unwrap();
        let p = positivity_conditions(&b);
        let target = (d - 1) as f64 / d as f64 - 2.0 * r * r;
        prop_assert!((2.0 * p.values[0] - target).abs() < 1e-10);
    }

    #[test]
    fn adjoint_is_dual(seed in any::<u64>(), d in 1usize..4, k in 1usize..4) {
        let mut rng = random::seeded(seed);
        let e = KrausChannel::new(random::kraus_family(&mut rng, d, k)).unwrap();
        let rho = random::density_matrix(&mut rng, d);
        let o = random::hermitian(&mut rng, d);
        let lhs = trace_product(&e.apply_forward(&rho).unwrap(), &o);
        let rhs = trace_product(&rho, &e.apply_adjoint(&o).unwrap());
        prop_assert!((lhs - rhs).norm() < 1e-10);
        prop_assert!(verify_masking(&e, &ComplexMatrix::identity(d)).unwrap() < 1e-10);
        let dilation = e.dilation().unwrap();
        prop_assert!(dilation.reduced_output(&rho).unwrap().max_abs_diff(&e.apply_forward(&rho).unwrap()) < 1e-10);
    }

    #[test]
    fn qubit_criterion_matches_oracle(a0 in -3.0f64..3.0, a in prop::array::uniform3(-2.0f64..2.0)) {
        let c = ObservableCoeffs::new(2, a0, a.to_vec()).unwrap();
        prop_assume!((c.a_norm() - (1.0 - a0).abs()).abs() > 1e-9);
        let o = coeffs_to_observable(&c);
        prop_assert_eq!(
            decide_maskable_qubit(&c).unwrap().maskable,
            decide_maskable_oracle(&o).unwrap().maskable
        );
    }

    #[test]
    fn constant_maskers_mask(seed in any::<u64>(), d in 2usize..6, t in 0.0f64..=1.0) {
        let mut rng = random::seeded(seed);
        let h = random::hermitian(&mut rng, d);
        let e = eig_hermitian(&h).unwrap();
        let target = e.min() + t * (e.max() - e.min());
        let o = &h + &ComplexMatrix::identity(d).scale_real(1.0 - target);
        prop_assert!(verify_masking(&build_constant_masker(&o).unwrap(), &o).unwrap() < 1e-9);
    }

    #[test]
    fn rotation_contract(seed in any::<u64>()) {
        let n = unit3(&random::real_unit_vector(&mut random::seeded(seed), 3));
        let w = rotation_unitary(n).unwrap();
        prop_assert!((&(&w.adjoint() * &pauli(3)) * &w).max_abs_diff(&pauli_dot(n)) < 1e-10);
    }

    #[test]
    fn disk_points_mask(seed in any::<u64>(), len in 1.0f64..5.0, s in 0.0f64..=1.0, t in 0.0f64..6.3) {
        let dir = unit3(&random::real_unit_vector(&mut random::seeded(seed), 3));
        let a = dir.map(|x| x * len);
        let disk = output_disk(a).unwrap();
        let p = disk.point(s, t);
        let b = BlochVector::new(2, p.to_vec()).unwrap();
        prop_assert!(positivity_conditions(&b).positive);
        let c = ObservableCoeffs::new(2, 0.0, a.to_vec()).unwrap();
        prop_assert!((c.expectation(&b) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn comaskable_elements_satisfy_constraints(seed in any::<u64>(), d in 2usize..4, k in 0usize..4) {
        let mut rng = random::seeded(seed);
        let points: Vec<Vec<f64>> = (0..=k)
            .map(|_| state_to_bloch(&random::density_matrix(&mut rng, d)).unwrap().into_components())
            .collect();
        let c = comask_general(&points, d).unwrap();
        prop_assert_eq!(c.set.affine_dim(), d * d - k - 1);
        let coeffs: Vec<f64> = (0..c.set.affine_dim()).map(|i| ((seed >> (i % 60)) & 7) as f64 - 3.5).collect();
        let element = c.set.point(&coeffs);
        prop_assert!(c.defect(&element) < 1e-10);
        let o = coeffs_to_observable(&c.coeffs(&element).unwrap());
        for p in &points {
            let rho = bloch_to_state(&BlochVector::new(d, p.clone()).unwrap());
            prop_assert!((trace_product(&rho, &o).re - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn counterexample_separates(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = random::seeded(seed);
        let b = state_to_bloch(&random::density_matrix(&mut rng, d)).unwrap().into_components();
        let bp = state_to_bloch(&random::density_matrix(&mut rng, d)).unwrap().into_components();
        let c = universal_counterexample(&b, &bp, d).unwrap();
        prop_assert!(c.masking_defect(&bp).abs() < 1e-12);
        prop_assert!(c.masking_defect(&b).abs() > 1e-6);
    }

    #[test]
    fn commitments_conceal_and_cheat(seed in any::<u64>(), d in 2usize..5, r in 1usize..5) {
        let r = r.min(d);
        let mut rng = random::seeded(seed);
        let lambda = random::full_rank_spectrum(&mut rng, r, 0.1);
        let a0 = random::orthonormal_family(&mut rng, d, r);
        let a1 = random::orthonormal_family(&mut rng, d, r);
        let b = random::orthonormal_family(&mut rng, d, r);
        let pair = make_commitment_pair(&lambda, &a0, &a1, &b).unwrap();
        prop_assert!(concealment_gap(&pair).unwrap() < 1e-10);
        let cheat = cheating_unitary(&pair).unwrap();
        prop_assert!(cheat.feasible);
        prop_assert!(cheat.fidelity > 1.0 - 1e-9);
        prop_assert!(cheat.unitary_a.unitarity_deviation() < 1e-9);
    }

    #[test]
    fn unequal_marginals_block_cheating(seed in any::<u64>(), d in 2usize..4) {
        let mut rng = random::seeded(seed);
        let psi0 = random::unit_vector(&mut rng, d * d);
        let psi1 = random::unit_vector(&mut rng, d * d);
        let pair = obsmask::CommitmentPair::from_states(psi0, psi1, (d, d)).unwrap();
        prop_assume!(pair.marginal_b0.max_abs_diff(&pair.marginal_b1) > 1e-6);
        prop_assert!(!cheating_unitary(&pair).unwrap().feasible);
    }

    #[test]
    fn measure_prepare_hides(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = random::seeded(seed);
        let rho = random::density_matrix(&mut rng, d);
        let e = measure_prepare_channel(&rho, &rho, d).unwrap();
        let o = random::hermitian(&mut rng, d);
        let t = trace_product(&rho, &o).re;
        prop_assert!(e.apply_adjoint(&o).unwrap().max_abs_diff(&ComplexMatrix::identity(d).scale_real(t)) < 1e-9);
    }
}
