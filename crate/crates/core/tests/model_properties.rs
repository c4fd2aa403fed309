mod common;

use common::qubo_model;
use l1_qubo::io::{qubo_from_coordinate, qubo_from_json, qubo_to_coordinate, qubo_to_json};
use l1_qubo::model::{all_assignments, bits_to_spins};
use l1_qubo::QuboModel;
use proptest::prelude::*;

fn argmin_set(model: &QuboModel) -> Vec<Vec<u8>> {
    let energies: Vec<(Vec<u8>, f64)> = all_assignments(model.num_vars())
        .map(|a| {
            let e = model.energy(&a).unwrap();
            (a, e)
        })
        .collect();
    let best = energies.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    energies
        .into_iter()
        .filter(|p| p.1 <= best + 1e-9)
        .map(|p| p.0)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ising_conversion_preserves_every_energy(model in qubo_model(12)) {
        let ising = model.to_ising();
        let back = ising.to_qubo();
        for a in all_assignments(model.num_vars()) {
            let e = model.energy(&a).unwrap();
            let s = bits_to_spins(&a);
            prop_assert!((ising.energy(&s).unwrap() - e).abs() <= 1e-9);
            prop_assert!((back.energy(&a).unwrap() - e).abs() <= 1e-9);
            prop_assert!((back.to_ising().energy(&s).unwrap() - e).abs() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn offset_shifts_energies_and_keeps_argmin(model in qubo_model(8), c in -100.0..100.0f64) {
        let shifted = model.shifted(c);
        for a in all_assignments(model.num_vars()) {
            let d = shifted.energy(&a).unwrap() - model.energy(&a).unwrap();
            prop_assert!((d - c).abs() <= 1e-9);
        }
        prop_assert_eq!(argmin_set(&model), argmin_set(&shifted));
    }

    #[test]
    fn energy_is_linear_in_the_model(a in qubo_model(8), b in qubo_model(8)) {
        let sum = &a + &b;
        let n = a.num_vars().max(b.num_vars());
        prop_assert_eq!(sum.num_vars(), n);
        let (wa, wb) = (a.widened(n), b.widened(n));
        for x in all_assignments(n) {
            let want = wa.energy(&x).unwrap() + wb.energy(&x).unwrap();
            prop_assert!((sum.energy(&x).unwrap() - want).abs() <= 1e-9);
        }
    }

    #[test]
    fn scaling_scales_energies(model in qubo_model(8), c in -5.0..5.0f64) {
        let s = model.scaled(c);
        for x in all_assignments(model.num_vars()) {
            prop_assert!((s.energy(&x).unwrap() - c * model.energy(&x).unwrap()).abs() <= 1e-9);
        }
    }

    #[test]
    fn file_formats_round_trip(model in qubo_model(12)) {
        prop_assert_eq!(&qubo_from_json(&qubo_to_json(&model)).unwrap(), &model);
        prop_assert_eq!(&qubo_from_coordinate(&qubo_to_coordinate(&model)).unwrap(), &model);
    }

    #[test]
    fn lowered_models_have_no_diagonal_keys(model in qubo_model(10)) {
        prop_assert!(model.quadratic().keys().all(|&(i, j)| i < j));
        prop_assert!(model.to_ising().to_qubo().quadratic().keys().all(|&(i, j)| i < j));
    }
}
