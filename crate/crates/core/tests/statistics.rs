use std::collections::HashMap;

use proptest::prelude::*;
use qlock::protocol::{decrypt, encrypt, keygen, Codebook, SecretKey};
use qlock::sampling::{
    clifford_key, sample_two_qubit_clifford, sample_uniform_clifford, two_qubit_clifford,
    MasterSeed, SamplerConfig,
};
use qlock::security::{
    conditional_states, draw_circuits, eve_state, holevo, measured_mi, mixture_defect, Measurement,
    PriorDistribution,
};
use qlock::BitString;

fn seed(hex: &str) -> MasterSeed {
    MasterSeed::from_hex(hex).unwrap()
}

/// Pearson statistic against a uniform distribution over `counts.len()` bins.
fn chi_square(counts: &[u64], total: u64) -> f64 {
    let e = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

/// Within `z` standard deviations of the chi-square mean for `df` degrees.
fn plausible(stat: f64, df: f64, z: f64) -> bool {
    (stat - df).abs() <= z * (2.0 * df).sqrt()
}

#[test]
fn keygen_is_uniform() {
    let mut rng = seed("6e").stream(0);
    let k = 10;
    let mut counts = vec![0u64; k as usize];
    for _ in 0..100_000 {
        counts[keygen(k, &mut rng).unwrap().index() as usize] += 1;
    }
    let stat = chi_square(&counts, 100_000);
    assert!(plausible(stat, 9.0, 5.0), "chi2 = {stat}");
}

#[test]
fn two_qubit_draws_cover_group_uniformly() {
    let index: HashMap<_, usize> = (0..11_520)
        .map(|i| (clifford_key(&two_qubit_clifford(i), true), i))
        .collect();
    assert_eq!(index.len(), 11_520);
    let mut rng = seed("22").stream(0);
    let draws = 400_000;
    let mut counts = vec![0u64; 11_520];
    for _ in 0..draws {
        counts[index[&clifford_key(&sample_two_qubit_clifford(&mut rng), true)]] += 1;
    }
    assert!(counts.iter().all(|&c| c > 0));
    let stat = chi_square(&counts, draws);
    assert!(plausible(stat, 11_519.0, 5.0), "chi2 = {stat}");
}

#[test]
fn uniform_one_qubit_sampler_hits_all_24() {
    let index: HashMap<_, usize> = qlock::sampling::single_qubit_cliffords()
        .iter()
        .enumerate()
        .map(|(i, c)| (clifford_key(c, true), i))
        .collect();
    let mut rng = seed("1a").stream(0);
    let mut counts = vec![0u64; 24];
    for _ in 0..48_000 {
        counts[index[&clifford_key(&sample_uniform_clifford(1, &mut rng), true)]] += 1;
    }
    let stat = chi_square(&counts, 48_000);
    assert!(plausible(stat, 23.0, 5.0), "chi2 = {stat}");
}

#[test]
fn wrong_key_recovers_plaintext_rarely() {
    let n = 8;
    let cb = Codebook::build(n, 2, 0.01, seed("bad")).unwrap();
    let right = SecretKey::new(0, 2).unwrap();
    let wrong = SecretKey::new(1, 2).unwrap();
    let mut rng = seed("bad1").stream(0);
    let trials = 4000;
    let mut hits = 0;
    for t in 0..trials {
        let x = BitString::random(n, &mut rng);
        let c = encrypt(&cb, &right, &x).unwrap();
        hits += usize::from(
            decrypt(&cb, &wrong, &c, &mut seed("bad2").stream(t))
                .unwrap()
                .bits
                == x,
        );
    }
    // about trials / 2^8 = 15.6 for a scrambling circuit pair
    assert!(hits < 50, "hits = {hits}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eve_state_is_prior_mixture(s in any::<u64>(), k in 1usize..6, raw in prop::collection::vec(1u32..100, 8)) {
        let total: u32 = raw.iter().sum();
        let entries = raw.iter().enumerate()
            .map(|(i, &w)| (BitString::from_index(3, i as u64), w as f64 / total as f64))
            .collect();
        let prior = PriorDistribution::from_entries(3, entries).unwrap();
        let circuits = draw_circuits(&SamplerConfig::uniform(3), k, &mut MasterSeed(s as u128).stream(0)).unwrap();
        prop_assert!(mixture_defect(&circuits, &prior).unwrap() < 1e-12);
        let rho = eve_state(&circuits, &prior).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measured_information_never_exceeds_holevo(s in any::<u64>(), k in 1usize..9) {
        let seed = MasterSeed(s as u128);
        let prior = PriorDistribution::uniform(2).unwrap();
        let circuits = draw_circuits(&SamplerConfig::uniform(2), k, &mut seed.stream(0)).unwrap();
        let (w, states) = conditional_states(&circuits, &prior).unwrap();
        let chi = holevo(&w, &states).unwrap();
        prop_assert!(chi <= 2.0 + 1e-12);
        for i in 0..4 {
            let m = Measurement::haar_basis(2, &mut seed.stream(1 + i)).unwrap();
            let mi = measured_mi(&m, &w, &states).unwrap();
            prop_assert!(mi >= -1e-12 && mi <= chi + 1e-9, "mi {} chi {}", mi, chi);
        }
    }
}
