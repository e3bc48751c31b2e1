use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qudit_core::operator::{
    gell_mann, hermitian_eig, spectrum, structure_constants, unitary_exp, ComplexMatrix,
};
use qudit_core::wells::{
    analytic_spectrum, build_hamiltonian, cyclic_current, cyclic_shift, HamiltonianSpec,
};

fn random_hermitian(dim: usize, entries: &[f64]) -> ComplexMatrix {
    let mut rows = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    let mut it = entries.iter().cycle();
    for i in 0..dim {
        rows[i][i] = C64::new(*it.next().unwrap(), 0.0);
        for j in i + 1..dim {
            let z = C64::new(*it.next().unwrap(), *it.next().unwrap());
            rows[i][j] = z;
            rows[j][i] = z.conj();
        }
    }
    ComplexMatrix::from_rows(&rows).unwrap()
}

fn hermitian_strategy(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|d| {
        prop::collection::vec(-3.0f64..3.0, d * d).prop_map(move |e| random_hermitian(d, &e))
    })
}

#[test]
fn commutators_rebuilt_from_structure_constants() {
    let f = structure_constants();
    for a in 1..=8 {
        for b in 1..=8 {
            let la = gell_mann(a).unwrap();
            let lb = gell_mann(b).unwrap();
            let mut rebuilt = ComplexMatrix::zeros(3);
            for k in 1..=8 {
                rebuilt = rebuilt + gell_mann(k).unwrap().scale(C64::new(0.0, 2.0 * f.get(a, b, k)));
            }
            assert!(la.commutator(&lb).max_abs_diff(&rebuilt) < 1e-12, "a={a} b={b}");
        }
    }
}

#[test]
fn structure_constants_totally_antisymmetric() {
    let f = structure_constants();
    for i in 1..=8 {
        for j in 1..=8 {
            for k in 1..=8 {
                let v = f.get(i, j, k);
                assert!((v + f.get(j, i, k)).abs() < 1e-14);
                assert!((v + f.get(i, k, j)).abs() < 1e-14);
                assert!((v + f.get(k, j, i)).abs() < 1e-14);
                assert!((v - f.get(j, k, i)).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn every_topology_matches_its_closed_form() {
    let mut specs = vec![
        HamiltonianSpec::symmetric_double(0.37),
        HamiltonianSpec::asymmetric_double(0.37, -1.3),
        HamiltonianSpec::periodic_triple(2.1),
    ];
    for d in 2..=8 {
        specs.push(HamiltonianSpec::fully_connected(d, 0.8));
    }
    for d in 2..=12 {
        specs.push(HamiltonianSpec::cyclic_chain(d, 1.7));
    }
    for spec in specs {
        let h = build_hamiltonian(&spec).unwrap();
        let numeric = spectrum(&h).unwrap().eigenvalues;
        let exact = analytic_spectrum(&spec).unwrap();
        for (a, b) in numeric.iter().zip(&exact) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{spec:?}");
        }
    }
}

#[test]
fn fully_connected_has_two_levels() {
    for d in 2..=8 {
        let h = build_hamiltonian(&HamiltonianSpec::fully_connected(d, 1.0)).unwrap();
        let levels = spectrum(&h).unwrap().levels();
        let mult: Vec<usize> = levels.iter().map(|l| l.1).collect();
        if d == 2 {
            assert_eq!(mult, vec![1, 1]);
        } else {
            assert_eq!(mult, vec![1, d - 1]);
        }
    }
}

#[test]
fn cyclic_spectrum_forms_pairs() {
    for d in 3..=12 {
        let nu = 1.0;
        let e: Vec<f64> = (0..d)
            .map(|n| qudit_core::wells::cyclic_band_energy(nu, n, d))
            .collect();
        for n in 1..d.div_ceil(2) {
            assert!((e[n] - e[d - n]).abs() < 1e-12);
        }
        let h = build_hamiltonian(&HamiltonianSpec::cyclic_chain(d, nu)).unwrap();
        let s = spectrum(&h).unwrap();
        let singles = s.levels().iter().filter(|l| l.1 == 1).count();
        assert_eq!(singles, if d % 2 == 0 { 2 } else { 1 }, "d = {d}");
    }
}

#[test]
fn symmetry_operators_commute() {
    for d in 3..=12 {
        let h = build_hamiltonian(&HamiltonianSpec::cyclic_chain(d, 1.0)).unwrap();
        let s = cyclic_shift(d).unwrap();
        assert!((s.adjoint() * &h * &s).max_abs_diff(&h) < 1e-15);
        assert!(h.commutator(&cyclic_current(d).unwrap()).max_abs() < 1e-12);
    }
    let t = build_hamiltonian(&HamiltonianSpec::periodic_triple(1.0)).unwrap();
    let s = cyclic_shift(3).unwrap();
    assert!((s.adjoint() * &t * &s).max_abs_diff(&t) < 1e-15);
}

proptest! {
    #[test]
    fn exponential_is_unitary(h in hermitian_strategy(6), t in -100.0f64..100.0) {
        let u = unitary_exp(&h, t, 1.0).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn eig_reconstructs(h in hermitian_strategy(16)) {
        let s = hermitian_eig(&h, None).unwrap();
        let err = (s.reconstruct() - &h).frobenius_norm();
        prop_assert!(err <= 1e-10, "error {}", err);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eig_is_deterministic(h in hermitian_strategy(8)) {
        let a = hermitian_eig(&h, None).unwrap();
        let b = hermitian_eig(&h.clone(), None).unwrap();
        prop_assert_eq!(&a.eigenvalues, &b.eigenvalues);
        prop_assert_eq!(a.eigenvectors.max_abs_diff(&b.eigenvectors), 0.0);
    }
}
