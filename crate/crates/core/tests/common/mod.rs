#![allow(dead_code)]

use modent::fock::{DensityOperator, FockBasis};
use modent::spin::{collective_frame, spin_frame};
use modent::ssr::{sample_separable, separable_state, SampleConfig, SampleMode};
use modent::witnesses::{
    chsh_modes, chsh_value, hillery_correlation_test, pair_mode_tests, pair_qubit_observable, sorensen_test,
    two_mode_battery, WitnessVerdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_axis(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let n2: f64 = v.iter().map(|c| c * c).sum();
        if n2 > 1e-3 && n2 <= 1.0 {
            return v;
        }
    }
}

/// Two single-mode subsystems, 1 to 4 components, occupancies up to 1..=3.
pub fn local_ssr_config(seed: u64) -> SampleConfig {
    let occ = 1 + (seed % 3) as usize;
    SampleConfig {
        n_components: 1 + ((seed / 3) % 4) as usize,
        subsystems: vec![1, 1],
        mode: SampleMode::LocalSsr,
        max_occupancy: occ,
        cutoff: occ,
    }
}

pub fn local_ssr_sample(seed: u64) -> DensityOperator {
    separable_state(&sample_separable(seed, &local_ssr_config(seed)).unwrap()).unwrap()
}

/// Two to four pairs with one boson each.
pub fn one_boson_pair_config(seed: u64) -> SampleConfig {
    SampleConfig {
        n_components: 1 + ((seed / 3) % 4) as usize,
        subsystems: vec![2; 2 + (seed % 3) as usize],
        mode: SampleMode::OneBosonPair,
        max_occupancy: 1,
        cutoff: 1,
    }
}

pub fn one_boson_pair_sample(seed: u64) -> (DensityOperator, usize) {
    let cfg = one_boson_pair_config(seed);
    let m = cfg.subsystems.len();
    (separable_state(&sample_separable(seed, &cfg).unwrap()).unwrap(), m)
}

/// Embed a two-mode state so that every mode can hold the pair total plus one.
pub fn padded_two_mode(rho: &DensityOperator) -> DensityOperator {
    let c = *rho.basis().cutoffs().iter().max().unwrap();
    let target = FockBasis::uniform(2, (2 * c).max(c + 1)).unwrap();
    rho.embed(&target).unwrap()
}

/// The full two-mode battery, higher-order correlation tests and CHSH with
/// random axes, all on the padded state.
pub fn two_mode_verdicts(rho: &DensityOperator, rng: &mut ChaCha8Rng) -> Vec<WitnessVerdict> {
    let padded = padded_two_mode(rho);
    let frame = spin_frame(padded.basis(), 0, 1).unwrap();
    let mut out = two_mode_battery(&padded, &frame).unwrap();
    for (m, n) in [(1, 2), (2, 1), (2, 2)] {
        for ssr in [false, true] {
            out.push(hillery_correlation_test(&padded, 0, 1, m, n, ssr).unwrap());
        }
    }
    let axes = [random_axis(rng), random_axis(rng), random_axis(rng), random_axis(rng)];
    out.push(chsh_modes(&padded, 0, 1, &axes).unwrap().renamed("chsh_random_axes"));
    out
}

/// Sorensen on the collective spin, CHSH between pairs, pair tests on the
/// first two pairs and two-mode tests on modes from different pairs.
pub fn one_boson_pair_verdicts(rho: &DensityOperator, m_pairs: usize, rng: &mut ChaCha8Rng) -> Vec<WitnessVerdict> {
    let basis = rho.basis().clone();
    let pairs: Vec<(usize, usize)> = (0..m_pairs).map(|k| (2 * k, 2 * k + 1)).collect();
    let frame = collective_frame(&basis, &pairs).unwrap();
    let mut out = vec![sorensen_test(rho, &frame).unwrap()];
    let obs: Vec<_> = [(0, 1), (0, 1), (2, 3), (2, 3)]
        .into_iter()
        .map(|(a, b)| pair_qubit_observable(&basis, a, b, random_axis(rng)).unwrap())
        .collect();
    out.push(chsh_value(rho, &obs[0], &obs[1], &obs[2], &obs[3]).unwrap());
    out.extend(pair_mode_tests(&rho.partial_trace(&[0, 1, 2, 3]).unwrap()).unwrap());
    for modes in [[0, 2], [1, 3], [0, 3]] {
        out.extend(two_mode_verdicts(&rho.partial_trace(&modes).unwrap(), rng));
    }
    out
}

pub fn triggered(verdicts: &[WitnessVerdict]) -> Vec<&WitnessVerdict> {
    verdicts.iter().filter(|v| v.signals_entanglement()).collect()
}
