use necklace::model::{build_hamiltonian, Anisotropy, ChainSpec};
use necklace::thermal::{gibbs_state, Temperature, ThermalSolver};
use proptest::prelude::*;

fn anisotropy() -> impl Strategy<Value = Anisotropy> {
    prop_oneof![Just(Anisotropy::Xy), Just(Anisotropy::X)]
}

fn t(v: f64) -> Temperature {
    Temperature::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gibbs_state_commutes_with_hamiltonian(
        a in anisotropy(), j in -2.0..2.0f64, w in 0.0..2.0f64, b in 0.0..2.0f64, temp in 0.01..5.0f64,
    ) {
        let h = build_hamiltonian(&ChainSpec::two_site(a, j, w).with_field(b)).unwrap();
        let rho = gibbs_state(&h, t(temp)).unwrap();
        prop_assert!(rho.matrix().commutator(&h).max_abs() < 1e-12);
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_rises_with_temperature(a in anisotropy(), j in -2.0..2.0f64, w in 0.0..2.0f64, b in 0.0..2.0f64) {
        let solver = ThermalSolver::new(&ChainSpec::two_site(a, j, w).with_field(b)).unwrap();
        let energies: Vec<f64> = (0..=40).map(|k| solver.energy(t(0.05 * k as f64))).collect();
        prop_assert!(energies.windows(2).all(|p| p[1] >= p[0] - 1e-12));
    }

    #[test]
    fn low_temperature_limit(a in anisotropy(), j in -2.0..2.0f64, w in 0.0..2.0f64, b in 0.0..2.0f64) {
        let solver = ThermalSolver::new(&ChainSpec::two_site(a, j, w).with_field(b)).unwrap();
        // only gaps of order T can separate the two; skip near-degenerate points
        let e = solver.spectrum().eigenvalues();
        let gap = e.iter().find(|&&x| x - e[0] > 1e-9).map_or(f64::INFINITY, |x| x - e[0]);
        prop_assume!(gap > 1e-4);
        for (p, q) in [(0, 1), (0, 2), (0, 3)] {
            let c0 = solver.pair_concurrence(p, q, Temperature::ZERO).unwrap();
            let c = solver.pair_concurrence(p, q, t(1e-6)).unwrap();
            prop_assert!((c - c0).abs() < 1e-6, "pair ({}, {}): {} vs {}", p, q, c, c0);
        }
    }

    #[test]
    fn entanglement_dies_at_high_temperature(a in anisotropy(), j in -3.0..3.0f64, w in 0.0..3.0f64) {
        let scale = j.abs().max(w).max(0.1);
        let solver = ThermalSolver::new(&ChainSpec::two_site(a, j, w)).unwrap();
        for (p, q) in [(0, 1), (0, 2), (0, 3)] {
            prop_assert_eq!(solver.pair_concurrence(p, q, t(50.0 * scale)).unwrap(), 0.0);
        }
    }
}

#[test]
fn four_site_ring_thermal_state_is_valid() {
    let solver = ThermalSolver::new(&ChainSpec::two_site(Anisotropy::Xy, 1.0, 1.0).with_sites(4)).unwrap();
    let rho = solver.gibbs(t(0.5));
    assert!((rho.trace() - 1.0).abs() < 1e-12);
    assert!(rho.purity() < 1.0);
    let c = solver.pair_concurrence(0, 1, t(0.5)).unwrap();
    assert!((0.0..=1.0).contains(&c));
}
