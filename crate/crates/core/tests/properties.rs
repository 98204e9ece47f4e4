use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfa_core::analysis::{
    cutpoint_member, gpfa_equivalent, haar_unitary, random_kwqfa, random_nqfa, random_qfc,
    random_rational_gpfa, random_word, EquivalenceMode, RandomSpec,
};
use qfa_core::convert::{kwqfa_to_nqfa, kwqfa_to_qfc, nqfa_to_gpfa, qfc_to_gpfa};
use qfa_core::linalg::{
    devectorize, hermitian_basis, validate_projector_family, vectorize, DensityLikeMatrix,
    TOL_ROUNDTRIP, TOL_VALID,
};
use qfa_core::sim::{gpfa_state, run_gpfa, run_kwqfa_pure, run_nqfa, run_nqfa_observed, run_qfc};
use qfa_core::{Complex64, ComplexMatrix, CutpointSpec, Gpfa, Word};

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

fn spec(seed: u64, states: usize, alphabet: usize) -> RandomSpec {
    RandomSpec::new(seed, states, alphabet)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vectorize_round_trip(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = hermitian_basis(n).unwrap();
        let h = random_hermitian(&mut rng, n);
        let back = devectorize(&vectorize(&h, &basis).unwrap(), &basis).unwrap();
        prop_assert!(back.max_abs_diff(&h) <= TOL_ROUNDTRIP);

        let v: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let again = vectorize(&devectorize(&v, &basis).unwrap(), &basis).unwrap();
        let err = v.iter().zip(&again).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= TOL_ROUNDTRIP);
    }

    #[test]
    fn rank_one_split_is_a_projector_family(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = haar_unitary(&mut rng, n).column(0);
        let p = ComplexMatrix::outer(&psi);
        let q = &ComplexMatrix::identity(n) - &p;
        prop_assert!(validate_projector_family(&[p, q], TOL_VALID).unwrap());
    }

    #[test]
    fn nqfa_runs_conserve_mass_and_stay_density_like(
        seed in any::<u64>(), n in 2usize..6, sigma in 1usize..4,
    ) {
        let m = random_nqfa(&spec(seed, n, sigma)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..5 {
            let w = random_word(&mut rng, sigma, 10);
            let mut density_ok = true;
            let r = run_nqfa_observed(&m, &w, |_, rho| {
                density_ok &= DensityLikeMatrix::new(rho.clone(), 1e-9).is_ok();
            })
            .unwrap();
            prop_assert!(density_ok);
            prop_assert!(r.conservation_error() <= 1e-9);
            prop_assert!(r.is_monotone());
        }
    }

    #[test]
    fn kwqfa_matches_pure_state_oracle(seed in any::<u64>(), sigma in 1usize..4) {
        let m = random_kwqfa(&spec(seed, 4, sigma)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let w = random_word(&mut rng, sigma, 10);
            let dense = run_nqfa(m.as_nqfa(), &w).unwrap().final_accept;
            let pure = run_kwqfa_pure(&m, &w).unwrap();
            prop_assert!((dense - pure).abs() <= 1e-12, "{dense} vs {pure}");
        }
    }

    #[test]
    fn converted_nqfa_computes_the_same_function(
        seed in any::<u64>(), n in 2usize..6, sigma in 1usize..4,
    ) {
        let m = random_nqfa(&spec(seed, n, sigma)).unwrap();
        let g = nqfa_to_gpfa(&m);
        prop_assert_eq!(g.state_count(), n * n + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        for _ in 0..10 {
            let w = random_word(&mut rng, sigma, 12);
            let direct = run_nqfa(&m, &w).unwrap().final_accept;
            prop_assert!((run_gpfa(&g, &w).unwrap() - direct).abs() <= 1e-9);
        }
    }

    #[test]
    fn converted_qfc_computes_the_same_function(seed in any::<u64>(), sigma in 1usize..3) {
        let m = random_qfc(&spec(seed, 3, sigma)).unwrap();
        let g = qfc_to_gpfa(&m);
        prop_assert_eq!(g.state_count(), m.control().state_count() * 9);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..30 {
            let w = random_word(&mut rng, sigma, 8);
            let direct = run_qfc(&m, &w).unwrap().final_accept;
            prop_assert!((run_gpfa(&g, &w).unwrap() - direct).abs() <= 1e-9);
        }
    }

    #[test]
    fn conversion_diagram_commutes(seed in any::<u64>(), n in 2usize..5, sigma in 1usize..3) {
        let m = random_kwqfa(&spec(seed, n, sigma)).unwrap();
        let via_nqfa = nqfa_to_gpfa(&kwqfa_to_nqfa(&m));
        let via_qfc = qfc_to_gpfa(&kwqfa_to_qfc(&m));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let w = random_word(&mut rng, sigma, 10);
            let a = run_gpfa(&via_nqfa, &w).unwrap();
            let b = run_gpfa(&via_qfc, &w).unwrap();
            prop_assert!((a - b).abs() <= 2e-9);
        }
        prop_assert!(gpfa_equivalent(&via_nqfa, &via_qfc, EquivalenceMode::Numeric).unwrap().equivalent);
    }

    #[test]
    fn gpfa_values_are_multiplicative(seed in any::<u64>(), s in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_rational_gpfa(&mut rng, s, 2);
        let u = random_word(&mut rng, 2, 5);
        let v = random_word(&mut rng, 2, 5);
        let split = gpfa_state(&g, gpfa_state(&g, g.initial().to_vec(), &u), &v);
        let joined = gpfa_state(&g, g.initial().to_vec(), &u.concat(&v));
        prop_assert_eq!(split, joined);
    }

    #[test]
    fn cutpoint_membership_is_monotone(
        seed in any::<u64>(), lo in 0.0f64..1.0, hi in 0.0f64..1.0,
    ) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let m = random_nqfa(&spec(seed, 3, 2)).unwrap();
        let g = nqfa_to_gpfa(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 2, 8);
        let hi_c = CutpointSpec::new(hi).unwrap();
        let lo_c = CutpointSpec::new(lo).unwrap();
        if cutpoint_member(&g, &hi_c, &w).unwrap() {
            prop_assert!(cutpoint_member(&g, &lo_c, &w).unwrap());
        }
    }

    #[test]
    fn equivalence_witnesses_separate(seed in any::<u64>(), s1 in 1usize..4, s2 in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g1 = random_rational_gpfa(&mut rng, s1, 2);
        let g2 = random_rational_gpfa(&mut rng, s2, 2);
        for mode in [EquivalenceMode::Exact, EquivalenceMode::Numeric] {
            let v = gpfa_equivalent(&g1, &g2, mode).unwrap();
            prop_assert!(v.rank() <= s1 + s2);
            if let Some(w) = &v.witness {
                let gap = (run_gpfa(&g1, w).unwrap() - run_gpfa(&g2, w).unwrap()).abs();
                prop_assert!(gap > v.tolerance);
            }
        }
    }
}

#[test]
fn padding_with_an_unreachable_state_keeps_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let g = random_rational_gpfa(&mut rng, 3, 2);
        let d = g.to_description();
        let pad = |row: &Vec<f64>| row.iter().copied().chain([0.0]).collect::<Vec<f64>>();
        let mut padded = d.clone();
        padded.initial.push(0.0);
        padded.final_vector.push(1.0);
        for (_, rows) in &mut padded.matrices {
            *rows = rows.iter().map(pad).collect();
            rows.push(vec![0.25; 4]);
        }
        let h = Gpfa::new(padded).unwrap();
        let v = gpfa_equivalent(&g, &h, EquivalenceMode::Exact).unwrap();
        assert!(v.equivalent);
    }
}

#[test]
fn empty_word_value_is_initial_dot_final() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = random_rational_gpfa(&mut rng, 4, 1);
    let want: f64 = g
        .initial()
        .iter()
        .zip(g.final_vector())
        .map(|(a, b)| a * b)
        .sum();
    assert_eq!(run_gpfa(&g, &Word::empty()).unwrap(), want);
}
