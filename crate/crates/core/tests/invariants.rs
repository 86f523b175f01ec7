use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;

use dtpt::dynamics::{
    complex_diagonalize, effective_hamiltonian, lindblad_oracle, propagate, OracleOptions,
};
use dtpt::linalg::symmetric_eigen;
use dtpt::model::{check_chiral, check_parity};
use dtpt::modes::{decay_matrix, diagonalize};
use dtpt::sweep::{rng, AxisName, AxisSpec};
use dtpt::{assemble, ModelConfig};

fn config_strategy(
    sizes: std::ops::RangeInclusive<usize>,
    spacing: impl Strategy<Value = f64>,
) -> impl Strategy<Value = ModelConfig> {
    (sizes, 0.0..2.0f64, 0.0..PI, 0.2..3.0f64, spacing)
        .prop_map(|(n, j0, phi, g0, d)| ModelConfig::new(n, j0, phi, g0, d))
}

fn quarter_spacing() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.25), Just(0.75), Just(1.25), Just(1.75)]
}

fn generic_spacing() -> impl Strategy<Value = f64> {
    (0.05..2.0f64).prop_filter("not a multiple of 1/2", |d| {
        let r = (2.0 * d).rem_euclid(1.0);
        r > 1e-3 && r < 1.0 - 1e-3
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quarter_spacing_chain_is_chiral(c in config_strategy(2..=30, quarter_spacing())) {
        let cs = assemble(&c).unwrap();
        prop_assert!(check_chiral(&cs.h));
        prop_assert!(check_parity(&cs.gamma));
        let e = diagonalize(&cs).unwrap().energies;
        let scale = 1.0 + e.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let n = e.len();
        for m in 0..n {
            prop_assert!((e[m] + e[n - 1 - m]).abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn dissipator_is_psd_with_rank_at_most_two(c in config_strategy(2..=30, generic_spacing())) {
        let cs = assemble(&c).unwrap();
        let w = symmetric_eigen(&cs.gamma).unwrap().values;
        let tol = 1e-10 * c.gamma0 * c.n_emitters as f64;
        prop_assert!(w.iter().all(|&x| x > -tol));
        prop_assert!(w.iter().filter(|&&x| x > tol).count() <= 2);
    }

    #[test]
    fn trace_identities(c in config_strategy(2..=24, generic_spacing())) {
        let cs = assemble(&c).unwrap();
        let n = c.n_emitters as f64;
        let modes = diagonalize(&cs).unwrap();
        let decay = decay_matrix(&modes, &cs.gamma).unwrap();
        prop_assert!((decay.trace() - n * c.gamma0).abs() < 1e-9 * n * c.gamma0);
        let rates: f64 = complex_diagonalize(&effective_hamiltonian(&cs))
            .unwrap()
            .decay_rates()
            .iter()
            .sum();
        prop_assert!((rates - 0.5 * n * c.gamma0).abs() < 1e-9 * n * c.gamma0);
    }

    #[test]
    fn biorthogonal_eigensystem(c in config_strategy(2..=20, generic_spacing())) {
        let h_eff = effective_hamiltonian(&assemble(&c).unwrap());
        let m = complex_diagonalize(&h_eff).unwrap();
        let n = m.n();
        let scale = 1.0 + h_eff.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        for j in 0..n {
            let r = m.right.column(j);
            let res = h_eff.dot(&r) - &r * m.eigenvalues[j];
            prop_assert!(res.iter().all(|z| z.norm() < 1e-9 * scale));
        }
        let gram: Array2<Complex64> = m.left.t().mapv(|z| z.conj()).dot(&m.right);
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram[[i, j]] - target).norm() < 1e-8 * m.condition.max(1.0));
            }
        }
    }

    #[test]
    fn populations_never_grow(c in config_strategy(2..=16, generic_spacing()), site in 0usize..16) {
        let n = c.n_emitters;
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        psi[site % n] = Complex64::new(1.0, 0.0);
        let times: Vec<f64> = (0..20).map(|k| 0.25 * k as f64 / c.gamma0).collect();
        let traj = propagate(&effective_hamiltonian(&assemble(&c).unwrap()), &psi, &times).unwrap();
        prop_assert!((traj.norm[0] - 1.0).abs() < 1e-12);
        for w in traj.norm.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-10);
        }
        for (g, s) in traj.ground_population.iter().zip(&traj.norm) {
            prop_assert!((g + s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn axis_grid_hits_both_endpoints(start in -5.0..5.0f64, span in 0.01..5.0f64, count in 2usize..200) {
        let axis = AxisSpec::new(AxisName::Phi, start, start + span, count);
        let v = axis.values();
        prop_assert_eq!(v.len(), count);
        prop_assert_eq!(v[0], start);
        prop_assert_eq!(v[count - 1], start + span);
        prop_assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rng_streams_are_reproducible(seed in any::<u64>(), stream in any::<u64>()) {
        let draw = || {
            let mut r = rng::stream(seed, stream);
            (0..8).map(|_| rng::unit(&mut r)).collect::<Vec<f64>>()
        };
        let a = draw();
        prop_assert_eq!(&a, &draw());
        prop_assert!(a.iter().all(|x| (0.0..1.0).contains(x)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reduced_dynamics_matches_master_equation(
        c in config_strategy(2..=4, 0.05..2.0f64),
        re in proptest::collection::vec(-1.0..1.0f64, 4),
        im in proptest::collection::vec(-1.0..1.0f64, 4),
    ) {
        let n = c.n_emitters;
        let mut psi: Vec<Complex64> = (0..n).map(|i| Complex64::new(re[i], im[i])).collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        psi.iter_mut().for_each(|z| *z /= norm);
        let cs = assemble(&c).unwrap();
        let times: Vec<f64> = (0..10).map(|k| 0.3 * k as f64 / c.gamma0).collect();
        let exact = lindblad_oracle(&cs, &psi, &times, OracleOptions::default()).unwrap();
        let reduced = propagate(&effective_hamiltonian(&cs), &psi, &times).unwrap();
        for (a, b) in exact.site_populations.iter().zip(reduced.site_populations.iter()) {
            prop_assert!((a - b).abs() < 1e-6, "{} vs {}", a, b);
        }
    }
}
