#![allow(dead_code)]

use monkey_zipf::{keyboard_from_spacings, sample_spacings, DistributionSpec, Keyboard};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic family of spacing keyboards: K in `k_range`, letter mass in
/// [0.3, 0.95], uniform or Beta(3,2) cut points.
pub fn random_keyboards(
    count: usize,
    k_range: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Vec<Keyboard> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let k = rng.gen_range(k_range.clone());
            let c = rng.gen_range(0.3..0.95);
            let spec = if i % 2 == 0 {
                DistributionSpec::Uniform
            } else {
                DistributionSpec::BetaThreeTwo
            };
            let sample = sample_spacings(&spec, k, rng.gen()).unwrap();
            keyboard_from_spacings(&sample, c).unwrap()
        })
        .collect()
}
