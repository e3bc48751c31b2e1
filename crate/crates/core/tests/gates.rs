use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qudit_core::gates::{
    axis_rotation, commuting_gate, decompose_two_step, euler_five_step, hadamard, qft, rx, rz,
    su2_axis_angle, su3_decompose, tilted_rotation, AxisAngle, FiveStep, TwoStep,
};
use qudit_core::operator::{
    global_phase_distance, haar_special_unitary, haar_unitary, unitary_exp, ComplexMatrix,
};
use qudit_core::wells::{build_hamiltonian, shifted_generators, HamiltonianSpec};

fn axis() -> impl Strategy<Value = [f64; 3]> {
    (0.0f64..PI, 0.0f64..2.0 * PI).prop_map(|(t, p)| {
        [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
    })
}

proptest! {
    #[test]
    fn rotations_are_unitary(n in axis(), alpha in -20.0f64..20.0, theta in 0.01f64..3.13) {
        prop_assert!(axis_rotation(n, alpha).unitarity_deviation() < 1e-12);
        prop_assert!(tilted_rotation(theta, alpha).unitarity_deviation() < 1e-12);
        prop_assert!(rx(alpha).unitarity_deviation() < 1e-12);
        prop_assert!(rz(alpha).unitarity_deviation() < 1e-12);
    }

    #[test]
    fn rotations_repeat_after_four_pi(theta in 0.01f64..3.13, alpha in -10.0f64..10.0) {
        let a = tilted_rotation(theta, alpha);
        let b = tilted_rotation(theta, alpha + 4.0 * PI);
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
        let c = tilted_rotation(theta, alpha + 2.0 * PI);
        prop_assert!((a.clone() + c).max_abs() < 1e-12);
    }

    #[test]
    fn axis_angle_round_trip(n in axis(), alpha in 0.01f64..6.2) {
        let u = axis_rotation(n, alpha);
        let (eta, aa) = su2_axis_angle(&u).unwrap();
        let back = aa.matrix().scale(C64::from_polar(1.0, eta));
        prop_assert!(back.max_abs_diff(&u) < 1e-12);
    }

    #[test]
    fn five_step_reproduces_target(n in axis(), alpha in 0.0f64..TAU) {
        let target = AxisAngle::new(n, alpha).unwrap();
        let f = euler_five_step(&target).unwrap();
        prop_assert!(f.report.phase_distance <= 1e-9);
        let rebuilt = FiveStep::product(f.psi_prime, f.theta, f.alpha);
        prop_assert!(global_phase_distance(&rebuilt, &target.matrix()).unwrap() <= 1e-9);
    }

    #[test]
    fn two_step_reproduces_target(n in axis(), alpha in 0.0f64..TAU, eta in -3.0f64..3.0) {
        let target = axis_rotation(n, alpha).scale(C64::from_polar(1.0, eta));
        let t = decompose_two_step(&target).unwrap();
        let rebuilt = TwoStep::product(t.theta1, t.phi1, t.theta2, t.phi2, t.eta);
        prop_assert!(rebuilt.max_abs_diff(&target) <= 1e-9);
        prop_assert!(t.report.phase_distance <= 1e-9);
    }

    #[test]
    fn commuting_perturbation_factorizes(i in 1usize..=3, eps in -0.2f64..0.2, t in 0.0f64..40.0, nu in 0.3f64..2.0) {
        let h = build_hamiltonian(&HamiltonianSpec::periodic_triple(nu)).unwrap();
        let m = shifted_generators()[i - 1].clone();
        let full = unitary_exp(&(&h + m.scale_real(eps)), t, 1.0).unwrap();
        let split = unitary_exp(&m.scale_real(eps), t, 1.0).unwrap() * unitary_exp(&h, t, 1.0).unwrap();
        prop_assert!(global_phase_distance(&full, &split).unwrap() <= 1e-12);
    }

    #[test]
    fn commuting_gate_over_whole_cycles(i in 1usize..=3, eps in 0.001f64..0.15, cycles in 1u32..40) {
        let r = commuting_gate(i, eps, cycles, 1.0, 1.0).unwrap();
        prop_assert!(r.phase_distance <= 1e-11, "distance {}", r.phase_distance);
        prop_assert!(r.achieved.unitarity_deviation() < 1e-12);
    }
}

#[test]
fn hadamard_from_tilted_rotation() {
    let u = tilted_rotation(PI / 4.0, PI);
    assert!(global_phase_distance(&u, &hadamard()).unwrap() <= 1e-12);
}

#[test]
fn haar_suites_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let u = haar_special_unitary(2, &mut rng);
        let t = decompose_two_step(&u).unwrap();
        assert!(t.report.phase_distance <= 1e-9);
        let (_, aa) = su2_axis_angle(&u).unwrap();
        assert!(euler_five_step(&aa).unwrap().report.phase_distance <= 1e-9);
    }
    for _ in 0..100 {
        let u = haar_unitary(3, &mut rng);
        let s = su3_decompose(&u).unwrap();
        assert!(s.report.phase_distance <= 1e-9);
        let product = (&s.r01.matrix * &s.r02.matrix * &s.r12.matrix).scale(C64::from_polar(1.0, s.phase));
        assert!(product.max_abs_diff(&u) <= 1e-9);
    }
}

#[test]
fn su3_factors_stay_on_their_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let s = su3_decompose(&haar_unitary(3, &mut rng)).unwrap();
        for r in [&s.r01, &s.r02, &s.r12] {
            let spectator = 3 - r.pair.0 - r.pair.1;
            let m = &r.matrix;
            assert!(r.matrix.unitarity_deviation() < 1e-12);
            assert!((m.get(spectator, spectator) - C64::new(1.0, 0.0)).norm() < 1e-14);
            for k in [r.pair.0, r.pair.1] {
                assert!(m.get(spectator, k).norm() < 1e-14);
                assert!(m.get(k, spectator).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn pair_rotation_target_stays_simple() {
    let x01 = shifted_generators()[0].clone();
    let s = su3_decompose(&x01).unwrap();
    assert!(s.report.phase_distance <= 1e-12);
    let id = ComplexMatrix::identity(3);
    assert!(global_phase_distance(&s.r02.matrix, &id).unwrap() < 1e-12);
    assert!(global_phase_distance(&s.r12.matrix, &id).unwrap() < 1e-12);
    let q = su3_decompose(&qft(3).unwrap()).unwrap();
    assert!(q.report.phase_distance <= 1e-10);
}

#[test]
fn qft_powers() {
    for d in 2..=9 {
        let f = qft(d).unwrap();
        assert!(f.unitarity_deviation() < 1e-12);
        let f2 = &f * &f;
        let reversal: Vec<usize> = (0..d).map(|j| (d - j) % d).collect();
        assert!(f2.max_abs_diff(&ComplexMatrix::permutation(&reversal).unwrap()) < 1e-12);
        assert!((&f2 * &f2).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
    }
}

#[test]
fn quarter_turn_gives_ternary_x() {
    // eps T = pi/2 with T = 10 revivals
    let cycles = 10;
    let eps = PI / 2.0 / (cycles as f64 * 2.0 * PI / 3.0);
    for (i, x) in shifted_generators().iter().enumerate() {
        let r = commuting_gate(i + 1, eps, cycles, 1.0, 1.0).unwrap();
        assert!(global_phase_distance(&r.achieved, x).unwrap() <= 1e-11);
    }
}
