mod common;

use bosim::fixtures;
use bosim::linalg::{haar_sample, seeded_rng};
use bosim::sampler::{
    classical_distribution, coincidence_probabilities, collision_free_states, enumerate_states,
    full_distribution, full_distribution_with, hom_visibility, output_probability, sample_outcomes,
    three_photon_partial_distribution, three_photon_partial_distribution_with, visibility_tensor,
    FockState, Model, PhotonRoles, Restriction, SamplerOptions,
};
use bosim::{Complex64, ComplexMatrix, Execution, UnitaryMatrix};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn three_photon_transition_matches_fock_expansion() {
    let u = fixtures::sampled_unitary();
    let input: FockState = "10101".parse().unwrap();
    let output: FockState = "11100".parse().unwrap();
    let p = output_probability(&u, &input, &output).unwrap();
    assert!((p - common::fock_probability(&u, &input, &output)).abs() < 1e-12);
}

#[test]
fn bunched_inputs_match_fock_expansion() {
    let u = haar_sample(4, 40).unwrap();
    for input in enumerate_states(4, 3)
        .iter()
        .filter(|s| !s.is_collision_free())
    {
        for output in enumerate_states(4, 3) {
            let a = output_probability(&u, input, &output).unwrap();
            let b = common::fock_probability(&u, input, &output);
            assert!((a - b).abs() < 1e-12, "{input} -> {output}");
        }
    }
}

#[test]
fn one_photon_rows_of_the_sampled_unitary() {
    let u = fixtures::sampled_unitary();
    for i in 0..5 {
        let d = full_distribution(
            &u,
            &FockState::from_modes(5, &[i]).unwrap(),
            Restriction::All,
        )
        .unwrap();
        for o in &d.outcomes {
            let k = o.state.mode_list()[0];
            assert_eq!(o.p, u[(k, i)].norm_sqr());
        }
    }
}

#[test]
fn five_modes_three_photons_has_35_outcomes() {
    let d = full_distribution(
        &fixtures::sampled_unitary(),
        &"10101".parse().unwrap(),
        Restriction::All,
    )
    .unwrap();
    assert_eq!(d.outcomes.len(), 35);
    assert!((d.raw_total() - 1.0).abs() < 1e-9);
    let sorted = d.outcomes.windows(2).all(|w| w[0].state < w[1].state);
    assert!(sorted);
}

#[test]
fn classical_matches_monte_carlo_routing() {
    let u = fixtures::sampled_unitary();
    let input: FockState = "11000".parse().unwrap();
    let exact = classical_distribution(&u, &input, Restriction::All).unwrap();
    let shots = 1_000_000;
    let mut rng = seeded_rng(3);
    let mut counts = std::collections::HashMap::<Vec<usize>, usize>::new();
    for _ in 0..shots {
        let mut occ = vec![0usize; 5];
        for i in input.mode_list() {
            let x: f64 = rng.random();
            let mut acc = 0.0;
            let mut out = 4;
            for k in 0..5 {
                acc += u[(k, i)].norm_sqr();
                if x < acc {
                    out = k;
                    break;
                }
            }
            occ[out] += 1;
        }
        *counts.entry(occ).or_default() += 1;
    }
    for o in &exact.outcomes {
        let freq = *counts.get(o.state.occupations()).unwrap_or(&0) as f64 / shots as f64;
        let sigma = (o.p * (1.0 - o.p) / shots as f64).sqrt().max(1e-9);
        assert!(
            (freq - o.p).abs() <= 3.0 * sigma + 1e-6,
            "{}: {freq} vs {}",
            o.state,
            o.p
        );
    }
}

#[test]
fn single_photon_classical_equals_quantum() {
    let u = haar_sample(6, 2).unwrap();
    let input = FockState::from_modes(6, &[3]).unwrap();
    let a = full_distribution(&u, &input, Restriction::All).unwrap();
    let b = classical_distribution(&u, &input, Restriction::All).unwrap();
    for (x, y) in a.outcomes.iter().zip(&b.outcomes) {
        assert!((x.p - y.p).abs() < 1e-15);
    }
}

#[test]
fn visibilities_agree_with_distributions() {
    let u = fixtures::sampled_unitary();
    let t = visibility_tensor(&u, 1.0).unwrap();
    assert_eq!(t.entries().len(), 100);
    for (i, j, k, l, v) in t.entries() {
        let input = FockState::from_modes(5, &[i, j]).unwrap();
        let output = FockState::from_modes(5, &[k, l]).unwrap();
        let pq = full_distribution(&u, &input, Restriction::All)
            .unwrap()
            .probability_of(&output)
            .unwrap();
        let pcl = classical_distribution(&u, &input, Restriction::All)
            .unwrap()
            .probability_of(&output)
            .unwrap();
        assert!((v.unwrap() - (pcl - pq) / pcl).abs() < 1e-12);
        let (cl, q) = coincidence_probabilities(&u, i, j, k, l).unwrap();
        assert!((cl - pcl).abs() < 1e-14 && (q - pq).abs() < 1e-14);
    }
}

#[test]
fn partial_distinguishability_matches_internal_state_oracle() {
    let u = fixtures::reconstructed_unitary();
    let r = fixtures::THREE_PHOTON_OVERLAP.powi(2);
    let d = three_photon_partial_distribution(&u, r).unwrap();
    assert_eq!(d.model, Model::Partial { r });
    let input: FockState = "10101".parse().unwrap();
    assert_eq!(d.input, input);
    for o in &d.outcomes {
        let indist = common::fock_probability(&u, &input, &o.state);
        let dist = common::distinguishable_odd_probability(&u, (0, 4), 2, &o.state);
        let expected = r * indist + (1.0 - r) * dist;
        assert!((o.p - expected).abs() < 1e-12, "{}", o.state);
    }
    assert!((d.conditional().iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn partial_model_with_other_roles() {
    let u = haar_sample(6, 9).unwrap();
    let roles = PhotonRoles {
        pair: (1, 4),
        odd: 5,
    };
    let d =
        three_photon_partial_distribution_with(&u, roles, 0.0, &SamplerOptions::default()).unwrap();
    for o in &d.outcomes {
        let dist = common::distinguishable_odd_probability(&u, (1, 4), 5, &o.state);
        assert!((o.p - dist).abs() < 1e-12);
    }
}

#[test]
fn uniform_sampling_frequencies() {
    let mut d = full_distribution(
        &UnitaryMatrix::identity(5),
        &"11000".parse().unwrap(),
        Restriction::CollisionFree,
    )
    .unwrap();
    assert_eq!(d.outcomes.len(), collision_free_states(5, 2).len());
    for o in &mut d.outcomes {
        o.p = 0.1;
    }
    let shots = 1_000_000;
    let draws = sample_outcomes(&d, shots, 12).unwrap();
    for o in &d.outcomes {
        let f = draws.iter().filter(|x| **x == o.state).count() as f64 / shots as f64;
        assert!((f - 0.1).abs() < 0.001, "{f}");
    }
}

#[test]
fn sequential_feature_path_is_identical() {
    let u = haar_sample(8, 1).unwrap();
    let input: FockState = "11110000".parse().unwrap();
    let mut opts = SamplerOptions {
        exec: Execution::Sequential,
        ..Default::default()
    };
    let a = full_distribution_with(&u, &input, Restriction::All, &opts).unwrap();
    opts.exec = Execution::Parallel;
    let b = full_distribution_with(&u, &input, Restriction::All, &opts).unwrap();
    assert_eq!(a, b);
}

#[test]
fn identity_visibility_structure() {
    let id = UnitaryMatrix::identity(3);
    assert_eq!(hom_visibility(&id, 0, 1, 0, 1).unwrap(), 0.0);
    assert!(hom_visibility(&id, 0, 1, 0, 2).is_err());
}

fn any_unitary(max_m: usize) -> impl Strategy<Value = UnitaryMatrix> {
    (2..=max_m, any::<u64>()).prop_map(|(m, seed)| haar_sample(m, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributions_are_normalised(u in any_unitary(6), seed in any::<u64>()) {
        let m = u.dim();
        let mut rng = seeded_rng(seed);
        let n = rng.random_range(1..=3);
        let modes: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
        let input = FockState::from_modes(m, &modes).unwrap();
        let d = full_distribution(&u, &input, Restriction::All).unwrap();
        prop_assert!((d.raw_total() - 1.0).abs() < 1e-9);
        prop_assert!(d.outcomes.iter().all(|o| o.p >= 0.0));
    }

    #[test]
    fn visibility_symmetries(u in any_unitary(6), seed in any::<u64>()) {
        let m = u.dim();
        let mut rng = seeded_rng(seed);
        let (i, j) = (rng.random_range(0..m), rng.random_range(0..m));
        let (k, l) = (rng.random_range(0..m), rng.random_range(0..m));
        prop_assume!(i != j && k != l);
        if let Ok(v) = hom_visibility(&u, i, j, k, l) {
            prop_assert!((v - hom_visibility(&u, j, i, k, l).unwrap()).abs() < 1e-12);
            prop_assert!((v - hom_visibility(&u, i, j, l, k).unwrap()).abs() < 1e-12);
            prop_assert!(v <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn partial_model_is_affine(u in any_unitary(6), r in 0.0f64..=1.0) {
        prop_assume!(u.dim() >= 3);
        let p0 = three_photon_partial_distribution(&u, 0.0).unwrap().probabilities();
        let p1 = three_photon_partial_distribution(&u, 1.0).unwrap().probabilities();
        let pr = three_photon_partial_distribution(&u, r).unwrap().probabilities();
        for k in 0..pr.len() {
            prop_assert!((pr[k] - (r * p1[k] + (1.0 - r) * p0[k])).abs() <= 4.0 * f64::EPSILON);
        }
    }
}

#[test]
fn permutation_matrix_partial_model_is_deterministic() {
    let mut m = ComplexMatrix::zeros(5, 5);
    for (c, r) in [4usize, 3, 0, 2, 1].into_iter().enumerate() {
        m[(r, c)] = Complex64::new(1.0, 0.0);
    }
    let u = UnitaryMatrix::new(m).unwrap();
    let d = three_photon_partial_distribution(&u, 0.3).unwrap();
    let hits: Vec<_> = d.outcomes.iter().filter(|o| o.p > 0.0).collect();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].state, "11001".parse().unwrap());
}
