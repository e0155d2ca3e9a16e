use hca_core::action::{stationarity_check, TrajectoryWindow};
use hca_core::automaton::{hamiltonian_matrix, AutomatonSpec};
use hca_core::dynamics::{
    evolve, evolve_pair, for_each_step, invariant_series, step_backward, step_forward, EvolveConfig, StatePair,
};
use hca_core::hermitian::HermitianIntMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;

fn spec_strategy(max_dim: usize) -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>)> {
    (1..=max_dim).prop_flat_map(|n| {
        let pairs = n * (n + 1) / 2;
        let strict = n * (n - 1) / 2;
        (
            Just(n),
            prop::collection::vec(-2i64..=2, pairs),
            prop::collection::vec(-2i64..=2, strict),
        )
    })
}

fn build_spec(n: usize, s_up: &[i64], a_up: &[i64]) -> AutomatonSpec {
    let mut s = vec![vec![0; n]; n];
    let mut a = vec![vec![0; n]; n];
    let (mut k, mut m) = (0, 0);
    for i in 0..n {
        for j in i..n {
            s[i][j] = s_up[k];
            s[j][i] = s_up[k];
            k += 1;
            if j > i {
                a[i][j] = a_up[m];
                a[j][i] = -a_up[m];
                m += 1;
            }
        }
    }
    AutomatonSpec::new(s, a).unwrap()
}

fn state_strategy(n: usize) -> impl Strategy<Value = StatePair> {
    (
        prop::collection::vec(-5i64..=5, 4 * n),
        prop::collection::vec(-5i64..=5, 4),
        -3i64..=3,
    )
        .prop_map(move |(v, extra, tick)| {
            let b = |r: &[i64]| r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
            StatePair {
                x_prev: b(&v[0..n]),
                p_prev: b(&v[n..2 * n]),
                x_curr: b(&v[2 * n..3 * n]),
                p_curr: b(&v[3 * n..4 * n]),
                tau_prev: extra[0].into(),
                tau_curr: extra[1].into(),
                pi2_prev: extra[2].into(),
                pi2_curr: extra[3].into(),
                tick,
            }
        })
}

fn spec_and_state(max_dim: usize) -> impl Strategy<Value = (AutomatonSpec, StatePair)> {
    spec_strategy(max_dim).prop_flat_map(|(n, s, a)| (Just(build_spec(n, &s, &a)), state_strategy(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn step_backward_inverts_step_forward(
        (spec, s) in spec_and_state(4),
        c in prop::collection::vec(-3i64..=3, 1..4),
    ) {
        let spec = spec.with_c(c).unwrap();
        prop_assert_eq!(&step_backward(&spec, &step_forward(&spec, &s)), &s);
        prop_assert_eq!(&step_forward(&spec, &step_backward(&spec, &s)), &s);
    }

    #[test]
    fn walking_matches_single_steps(
        (spec, s) in spec_and_state(3),
        c in prop::collection::vec(-3i64..=3, 1..4),
        k in -25i64..25,
    ) {
        // for_each_step reuses tick energies between steps
        let spec = spec.with_c(c).unwrap();
        let mut seen = Vec::new();
        let end = for_each_step(&spec, &s, k, &EvolveConfig::default(), |p, _| seen.push(p.clone())).unwrap();
        let mut cur = s.clone();
        for p in &seen {
            cur = if k >= 0 { step_forward(&spec, &cur) } else { step_backward(&spec, &cur) };
            prop_assert_eq!(p, &cur);
        }
        prop_assert_eq!(end, cur);
    }

    #[test]
    fn stepper_windows_are_stationary(
        (spec, s) in spec_and_state(3),
        c in prop::collection::vec(-2i64..=2, 1..3),
        len in 3i64..8,
    ) {
        let spec = spec.with_c(c).unwrap();
        let t = evolve(&spec, &s, len, &EvolveConfig::default()).unwrap();
        let w = TrajectoryWindow::from_trajectory(&t).unwrap();
        prop_assert!(stationarity_check(&spec, &w, &[1, 2, 3]).unwrap().is_stationary());
    }

    #[test]
    fn evolve_round_trip((spec, s) in spec_and_state(3), k in 0i64..60) {
        let cfg = EvolveConfig::default();
        let there = evolve_pair(&spec, &s, k, &cfg).unwrap();
        prop_assert_eq!(evolve_pair(&spec, &there, -k, &cfg).unwrap(), s);
    }

    #[test]
    fn trajectories_satisfy_the_recurrence((spec, s) in spec_and_state(3), k in -30i64..30) {
        let t = evolve(&spec, &s, k, &EvolveConfig::default()).unwrap();
        prop_assert_eq!(t.len(), k.unsigned_abs() as usize + 2);
        prop_assert!(t.verify(&spec));
    }

    #[test]
    fn commuting_observables_are_conserved((spec, s) in spec_and_state(4)) {
        let h = hamiltonian_matrix(&spec);
        let cfg = EvolveConfig::default();
        for g in [HermitianIntMatrix::identity(spec.dim()), h.clone(), h.square()] {
            let series = invariant_series(&spec, &g, &s, 200, &cfg).unwrap();
            prop_assert!(series.is_constant());
        }
    }

    #[test]
    fn parity_chains_of_pi_minus_h_are_constant((spec, s) in spec_and_state(3)) {
        let t = evolve(&spec, &s, 40, &EvolveConfig::default()).unwrap();
        let sorted = t.sorted();
        let gap = |k: usize| &sorted[k].pi2 - spec.doubled_energy(&sorted[k].x, &sorted[k].p);
        for k in 2..sorted.len() {
            prop_assert_eq!(gap(k), gap(k - 2));
        }
    }
}
