use proptest::prelude::*;

use qudit_core::continuum::{
    asymmetric_nu, barrier_action, cosine_band_fit, effective_two_level, periodic_d_well, solve_grid,
    square_double_well, square_well_for_action, tilted_double_well, validate_reduction, wkb_tunneling,
    WkbFormula,
};
use qudit_core::continuum::tridiag::SymTridiagonal;
use qudit_core::operator::{spectrum, ComplexMatrix};

#[test]
fn wkb_tracks_grid_splitting() {
    for action in [3.0, 4.0, 6.0] {
        let t = square_well_for_action(action, 250.0, 1.0, 1024, 1.0, 1.0).unwrap();
        let red = effective_two_level(&t.solution).unwrap();
        for formula in [WkbFormula::Square, WkbFormula::General] {
            let w = wkb_tunneling(&t.potential, t.energy, 1.0, 1.0, formula).unwrap();
            let rel = (w.nu - red.nu_eff).abs() / red.nu_eff;
            assert!(rel < 0.25, "action {action}: wkb {} grid {}", w.nu, red.nu_eff);
        }
    }
}

#[test]
fn gap_ratio_falls_with_action() {
    let mut last = f64::INFINITY;
    for action in [1.5, 2.0, 3.0, 4.0, 5.0] {
        let t = square_well_for_action(action, 250.0, 1.0, 1024, 1.0, 1.0).unwrap();
        let r = validate_reduction(&t.solution, 2).unwrap();
        assert!(r.ratio < last, "action {action}");
        last = r.ratio;
    }
    assert!(last < 0.01);
}

#[test]
fn periodic_bands_are_cosines() {
    for d in [3, 4, 5, 6] {
        let p = periodic_d_well(d, 250.0, 1.0, 0.18).unwrap();
        let sol = solve_grid(&p, d * 128, d + 1, 1.0, 1.0).unwrap();
        let fit = cosine_band_fit(&sol.eigenvalues[..d]).unwrap();
        assert!(fit.relative_residual < 0.02, "d = {d}: {}", fit.relative_residual);
        assert!(validate_reduction(&sol, d).unwrap().pass);
        if d == 3 {
            let e = &sol.eigenvalues;
            assert!((e[2] - e[1]).abs() <= 1e-6 * e[1].abs());
        }
    }
}

#[test]
fn tilted_well_matches_two_level_model() {
    let symmetric = solve_grid(&square_double_well(250.0, 1.0, 0.1805).unwrap(), 1024, 3, 1.0, 1.0).unwrap();
    let one_well_gap = symmetric.eigenvalues[2] - symmetric.eigenvalues[0];
    for frac in [0.0, 0.02, 0.1, 0.3] {
        let p = tilted_double_well(250.0, 1.0, 0.1805, frac * one_well_gap).unwrap();
        let rep = asymmetric_nu(&p, 1024, 1.0, 1.0).unwrap();
        let sol = solve_grid(&p, 1024, 2, 1.0, 1.0).unwrap();
        let gap = sol.eigenvalues[1] - sol.eigenvalues[0];
        assert!((rep.model_gap() - gap).abs() <= 0.1 * gap, "tilt {frac}");

        let theta = rep.mixing_angle();
        let psi0 = &sol.eigenvectors[0];
        let right = sol.weight_right_of(psi0, rep.barrier_center) / sol.inner(psi0, psi0);
        assert!((1.0 - right - (theta / 2.0).sin().powi(2)).abs() < 0.05, "tilt {frac}");
        assert!((right - (theta / 2.0).cos().powi(2)).abs() < 0.05, "tilt {frac}");
    }
}

fn ring(diag: Vec<f64>, off: Vec<f64>, corner: f64) -> (SymTridiagonal, ComplexMatrix) {
    let n = diag.len();
    let mut dense = vec![0.0; n * n];
    for i in 0..n {
        dense[i * n + i] = diag[i];
    }
    for i in 0..n - 1 {
        dense[i * n + i + 1] = off[i];
        dense[(i + 1) * n + i] = off[i];
    }
    dense[n - 1] += corner;
    dense[(n - 1) * n] += corner;
    let t = SymTridiagonal::new(diag, off, corner).unwrap();
    (t, ComplexMatrix::from_real_row_slice(n, &dense).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tridiagonal_solver_agrees_with_dense(
        n in 3usize..24,
        seed in prop::collection::vec(-2.0f64..2.0, 48),
        corner in prop::sample::select(vec![0.0, -0.7, 1.3]),
    ) {
        let diag: Vec<f64> = seed[..n].to_vec();
        let off: Vec<f64> = seed[24..24 + n - 1].iter().map(|x| x - 2.5).collect();
        let (t, dense) = ring(diag, off, corner);
        let k = n.min(6);
        let (values, vectors) = t.lowest_eigenpairs(k).unwrap();
        let reference = spectrum(&dense).unwrap().eigenvalues;
        for (j, (value, vector)) in values.iter().zip(&vectors).enumerate() {
            prop_assert!((value - reference[j]).abs() < 1e-10);
            let tv = t.apply(vector);
            let res: f64 = tv.iter().zip(vector).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt();
            prop_assert!(res < 1e-8, "residual {}", res);
        }
    }

    #[test]
    fn barrier_action_scales_with_width(a in 0.05f64..0.4, v0 in 50.0f64..400.0, e in 1.0f64..40.0) {
        let p = square_double_well(v0, 1.0, a).unwrap();
        let (s, w) = barrier_action(&p, e, 1.0);
        prop_assert!((w - a).abs() < 1e-12);
        prop_assert!((s - a * (2.0 * (v0 - e)).sqrt()).abs() < 1e-10);
    }
}
