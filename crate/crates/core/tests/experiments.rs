use l1_qubo::experiments::{
    default_lasso_pairs, run_continuous, run_discrete_verification, run_fig2, run_lasso_demo,
    run_reduced, write_records_csv, ExperimentConfig, LassoConfig, Solver,
};
use l1_qubo::gadgets::{
    l1_naive_value, l1_reduced_value, relu_wolfe_value, AuxConfig, GadgetVariant,
};
use l1_qubo::AnnealSchedule;

fn quick() -> ExperimentConfig {
    ExperimentConfig {
        n_samples: 16,
        schedule: AnnealSchedule::new(100.0, 0.999, 1e-3).unwrap(),
        step: 0.01,
        ..Default::default()
    }
}

fn csv(records: &[l1_qubo::experiments::SampleRecord], v: GadgetVariant) -> String {
    let mut buf = Vec::new();
    write_records_csv(records, v, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn records_re_evaluate_to_their_objective() {
    let cfg = quick();
    for (variant, recs) in [
        (GadgetVariant::L1Naive, run_fig2(&cfg).unwrap()),
        (GadgetVariant::L1Reduced, run_reduced(&cfg).unwrap()),
        (
            GadgetVariant::ReluWolfe,
            run_continuous(&ExperimentConfig {
                variant: GadgetVariant::ReluWolfe,
                ..cfg.clone()
            })
            .unwrap(),
        ),
    ] {
        assert_eq!(recs.len(), 16);
        for r in &recs {
            let v = match variant {
                GadgetVariant::L1Naive => l1_naive_value(r.m, r.t.unwrap(), r.z1, r.z2, 10.0),
                GadgetVariant::L1Reduced => l1_reduced_value(r.m, r.z1, r.z2, 10.0),
                _ => relu_wolfe_value(r.m, r.t.unwrap(), r.z1, r.z2, 10.0),
            };
            assert!((v - r.f_value).abs() <= 1e-12);
            assert!((-10.0..10.0).contains(&r.m));
        }
    }
}

#[test]
fn csv_is_byte_identical_across_runs_and_sorted() {
    let cfg = quick();
    let a = csv(&run_fig2(&cfg).unwrap(), GadgetVariant::L1Naive);
    let b = csv(&run_fig2(&cfg).unwrap(), GadgetVariant::L1Naive);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "m,f,t,z1,z2,gap,seed");
    assert_eq!(lines.len(), 17);
    let ms: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(ms.windows(2).all(|w| w[0] <= w[1]));
    assert!(!a.contains('\r'));

    let other = csv(
        &run_fig2(&ExperimentConfig {
            seed: 1,
            ..cfg.clone()
        })
        .unwrap(),
        GadgetVariant::L1Naive,
    );
    assert_ne!(a, other);

    let reduced = csv(&run_reduced(&cfg).unwrap(), GadgetVariant::L1Reduced);
    assert!(reduced.starts_with("m,f,z1,z2,gap,seed\n"));
}

#[test]
fn brute_verification_at_zero_is_exact() {
    let cfg = ExperimentConfig {
        variant: GadgetVariant::L1Reduced,
        solver: Solver::Brute,
        n_samples: 1,
        m_range: (0.0, 0.0),
        ..Default::default()
    };
    let r = run_discrete_verification(&cfg, 0.02).unwrap();
    assert_eq!(r.rows.len(), 1);
    assert_eq!(r.rows[0].abs_dev, 0.0);
    assert_eq!(r.penalty_violations, 0);
    assert!(r.passed);
}

#[test]
fn verification_surfaces_infeasible_inputs() {
    let cfg = ExperimentConfig {
        variant: GadgetVariant::L1Reduced,
        solver: Solver::Brute,
        n_samples: 3,
        m_range: (-12.0, 12.0),
        ..Default::default()
    };
    let err = run_discrete_verification(&cfg, 0.02).unwrap_err();
    assert!(err.to_string().contains("12"), "{err}");
}

#[test]
fn annealing_never_beats_exhaustive_search() {
    let aux = AuxConfig {
        z_hi: 6.3,
        z_bits: 6,
        t_bits: 3,
    };
    let base = ExperimentConfig {
        variant: GadgetVariant::L1Naive,
        n_samples: 7,
        m_range: (-6.0, 6.0),
        aux,
        penalty: aux.dominant_penalty().unwrap().weight(),
        restarts: 3,
        seed: 5,
        ..Default::default()
    };
    let exact = run_discrete_verification(
        &ExperimentConfig {
            solver: Solver::Brute,
            ..base.clone()
        },
        0.02,
    )
    .unwrap();
    assert!(exact.passed);
    let sa = run_discrete_verification(
        &ExperimentConfig {
            solver: Solver::Discrete,
            ..base
        },
        0.05,
    )
    .unwrap();
    assert_eq!(sa.rows.len(), 21);
    for row in &sa.rows {
        let b = exact.rows.iter().find(|r| r.m == row.m).unwrap();
        assert!(
            row.energy >= b.energy - 1e-9,
            "m={}: {} < {}",
            row.m,
            row.energy,
            b.energy
        );
    }
}

#[test]
fn lasso_sweep_matches_soft_threshold() {
    let report = run_lasso_demo(&default_lasso_pairs(), &LassoConfig::default()).unwrap();
    assert_eq!(report.rows.len(), 20);
    assert!((report.resolution - 0.1).abs() < 1e-12);
    for r in &report.rows {
        // sign(a) max(|a| - λ/2, 0), computed here independently
        let want = if r.a.abs() > r.lambda / 2.0 {
            r.a - r.lambda / 2.0 * r.a.signum()
        } else {
            0.0
        };
        assert!(
            (r.m_found - want).abs() <= 2.0 * report.resolution + 1e-9,
            "{r:?}"
        );
    }
    assert!(report.passed);
    let find = |a: f64, l: f64| {
        report
            .rows
            .iter()
            .find(|r| r.a == a && r.lambda == l)
            .unwrap()
            .m_found
    };
    assert!((find(5.0, 0.0) - 5.0).abs() <= 0.2);
    assert!((find(5.0, 4.0) - 3.0).abs() <= 0.2);
    assert!(find(1.0, 4.0).abs() <= 0.2);
}
