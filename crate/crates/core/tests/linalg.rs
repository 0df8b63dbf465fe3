use bosim::linalg::{
    align_gauge, apply_gauge, gate_fidelity, haar_sample, seeded_rng, similarity, wrap_phase,
};
use bosim::permanent::{
    permanent,
    PermanentAlgorithm::{Naive, Ryser},
};
use bosim::{Complex64, ComplexMatrix, GaugePhases, UnitaryMatrix};
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::{PI, TAU};

fn random_phases(m: usize, seed: u64) -> GaugePhases {
    let mut rng = seeded_rng(seed);
    let mut p = || {
        (0..m)
            .map(|_| rng.random_range(-PI..PI))
            .collect::<Vec<_>>()
    };
    GaugePhases::new(p(), p()).unwrap()
}

fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn haar_samples_are_unitary(m in 1usize..=10, seed in any::<u64>()) {
        prop_assert!(haar_sample(m, seed).unwrap().as_matrix().unitarity_residual() < 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(m in 2usize..=7, a in any::<u64>(), b in any::<u64>()) {
        let u = haar_sample(m, a).unwrap();
        let v = haar_sample(m, b).unwrap();
        let f = gate_fidelity(&u, &v).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - gate_fidelity(&v, &u).unwrap()).abs() < 1e-12);
        prop_assert!((gate_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn global_phase_is_invisible(m in 2usize..=6, seed in any::<u64>(), theta in -PI..PI) {
        let u = haar_sample(m, seed).unwrap();
        let v = UnitaryMatrix::new(u.as_matrix().scale(Complex64::from_polar(1.0, theta))).unwrap();
        prop_assert!((gate_fidelity(&u, &v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alignment_undoes_a_gauge(m in 2usize..=6, seed in any::<u64>()) {
        let u = haar_sample(m, seed).unwrap();
        let v = apply_gauge(&u, &random_phases(m, seed.wrapping_add(1))).unwrap();
        let (aligned, _) = align_gauge(&v, &u).unwrap();
        prop_assert!(gate_fidelity(&aligned, &u).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn ryser_matches_the_naive_sum(n in 1usize..=6, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let d = permanent(&a, Ryser).unwrap() - permanent(&a, Naive).unwrap();
        prop_assert!(d.norm() < 1e-10);
    }

    #[test]
    fn permanent_ignores_row_order(n in 2usize..=6, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let swapped = ComplexMatrix::from_fn(n, n, |r, c| a[((r + 1) % n, c)]);
        prop_assert!((permanent(&a, Ryser).unwrap() - permanent(&swapped, Ryser).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn wrapped_phases_stay_in_range(theta in -100.0f64..100.0) {
        let w = wrap_phase(theta);
        prop_assert!((0.0..TAU).contains(&w));
        prop_assert!(((w - theta) / TAU - ((w - theta) / TAU).round()).abs() < 1e-9);
    }

    #[test]
    fn similarity_of_a_distribution_with_itself(raw in proptest::collection::vec(0.0f64..1.0, 1..20)) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 0.0);
        let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
        prop_assert!((similarity(&p, &p).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn permanent_of_identity_and_ones() {
    assert_eq!(
        permanent(&ComplexMatrix::identity(5), Ryser).unwrap(),
        Complex64::new(1.0, 0.0)
    );
    let ones = ComplexMatrix::from_fn(5, 5, |_, _| Complex64::new(1.0, 0.0));
    assert!((permanent(&ones, Ryser).unwrap().re - 120.0).abs() < 1e-9);
}
