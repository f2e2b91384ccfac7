use std::f64::consts::{FRAC_PI_2, PI, TAU};

use ctxfrac::quantum::{diagonal_entropy, random_bloch_basis, random_state, random_unitary};
use ctxfrac::scenario::{restrict_row, two_context_scenario};
use ctxfrac::{
    born_model, contextual_fraction, diag_state, entanglement_entropy, mix_models,
    schmidt_decompose, BellScenario, EmpiricalModel, GlobalDistribution, MeasurementScenario,
    PartySettings,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chsh_scenario() -> MeasurementScenario {
    MeasurementScenario::new(
        ["a1", "a2", "b1", "b2"],
        [["a1", "b1"], ["a1", "b2"], ["a2", "b1"], ["a2", "b2"]],
        2,
    )
    .unwrap()
}

fn normalise(v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

prop_compose! {
    fn row4()(v in prop::collection::vec(0.01f64..1.0, 4)) -> Vec<f64> {
        normalise(v)
    }
}

prop_compose! {
    fn chsh_model()(rows in prop::collection::vec(row4(), 4)) -> EmpiricalModel {
        EmpiricalModel::new(chsh_scenario(), rows).unwrap()
    }
}

prop_compose! {
    fn global_dist()(w in prop::collection::vec(0.0f64..1.0, 8), mass in 0.0f64..=1.0)
        -> GlobalDistribution {
        let s: f64 = w.iter().sum::<f64>().max(1e-12);
        let w = w.into_iter().map(|x| x * mass / s).collect();
        GlobalDistribution::new(two_context_scenario(), w).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marginals_conserve_mass(d in global_dist()) {
        for c in 0..2 {
            let m = d.marginalize(c).unwrap();
            prop_assert!((m.iter().sum::<f64>() - d.total_mass()).abs() < 1e-12);
        }
    }

    #[test]
    fn marginalisation_commutes_with_restriction(d in global_dist()) {
        // context 0 is (a1, b); restrict onto (b) and onto (b, a1)
        let full = d.marginalize(0).unwrap();
        for onto in [vec![2usize], vec![0], vec![2, 0]] {
            let via = restrict_row(2, &[0, 2], &full, &onto).unwrap();
            let direct = d.marginal_onto(&onto).unwrap();
            for (a, b) in via.iter().zip(&direct) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixing_preserves_validity(e1 in chsh_model(), e2 in chsh_model(), l in 0.0f64..=1.0) {
        prop_assert!(mix_models(&e1, &e2, l).unwrap().validate().is_empty());
    }

    #[test]
    fn witness_is_dominated_and_decomposes(e in chsh_model()) {
        let r = contextual_fraction(&e).unwrap();
        prop_assert!((r.cf + r.ncf - 1.0).abs() < 1e-9);
        prop_assert!((r.witness.total_mass() - r.ncf).abs() < 1e-6);
        for (c, row) in e.rows().iter().enumerate() {
            let m = r.witness.marginalize(c).unwrap();
            for (x, y) in m.iter().zip(row) {
                prop_assert!(*x <= y + 1e-6);
            }
        }
        if let (Some(nc), Some(res)) = (&r.noncontextual_part, &r.residual_part) {
            prop_assert!(nc.validate().is_empty());
            prop_assert!(res.validate().is_empty());
            for ((row, a), b) in e.rows().iter().zip(nc.rows()).zip(res.rows()) {
                for ((p, x), y) in row.iter().zip(a).zip(b) {
                    prop_assert!((p - (r.ncf * x + r.cf * y)).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn cf_is_convex(e1 in chsh_model(), e2 in chsh_model(), l in 0.0f64..=1.0) {
        let cf = |e: &EmpiricalModel| contextual_fraction(e).unwrap().cf;
        let mixed = cf(&mix_models(&e1, &e2, l).unwrap());
        prop_assert!(mixed <= l * cf(&e1) + (1.0 - l) * cf(&e2) + 1e-6);
    }

    #[test]
    fn solver_is_deterministic(e in chsh_model()) {
        let a = contextual_fraction(&e).unwrap();
        let b = contextual_fraction(&e).unwrap();
        prop_assert_eq!(a.cf.to_bits(), b.cf.to_bits());
        prop_assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn entropy_symmetries(theta in 0.0f64..=PI, phi in 0.0f64..TAU) {
        let s = entanglement_entropy(&diag_state(theta, phi).unwrap()).unwrap();
        let s0 = entanglement_entropy(&diag_state(theta, 0.0).unwrap()).unwrap();
        let mirrored = entanglement_entropy(&diag_state(PI - theta, phi).unwrap()).unwrap();
        prop_assert!((s - s0).abs() < 1e-9);
        prop_assert!((s - mirrored).abs() < 1e-9);
        prop_assert!((s - diagonal_entropy(theta)).abs() < 1e-9);
    }

    #[test]
    fn schmidt_recovers_diagonal_theta(theta in 0.0f64..=PI) {
        let f = schmidt_decompose(&diag_state(theta, 0.0).unwrap()).unwrap();
        let canonical = theta.min(PI - theta);
        prop_assert!((f.theta - canonical).abs() < 1e-9);
        prop_assert!(f.theta <= FRAC_PI_2 + 1e-15);
    }

    #[test]
    fn born_rows_are_distributions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 2) as usize;
        let psi = random_state(n, &mut rng);
        let parties = (0..n)
            .map(|_| {
                PartySettings::new(random_bloch_basis(&mut rng), random_bloch_basis(&mut rng))
                    .rotated(random_unitary(&mut rng))
            })
            .collect();
        let m = born_model(&psi, &BellScenario::new(parties).unwrap()).unwrap();
        prop_assert!(m.validate().is_empty());
        prop_assert!(m.rows().iter().flatten().all(|p| *p >= 0.0));
    }
}
