#![allow(dead_code)]

use pof::{BudgetUtilitySet, UtilityLimits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes three shapes: uniform on [0.01, 1], log-uniform on [1e-3, 1] and a
/// near-equal cluster around 1.
pub fn random_limits(n: usize, rng: &mut ChaCha8Rng) -> UtilityLimits {
    let shape = rng.random_range(0..3);
    let values = (0..n)
        .map(|_| match shape {
            0 => rng.random_range(0.01..=1.0),
            1 => 10f64.powf(rng.random_range(-3.0..=0.0)),
            _ => 1.0 + rng.random_range(-0.05..=0.05),
        })
        .collect();
    UtilityLimits::new(values).unwrap()
}

/// A valid instance: random limits and costs with `c_i L_i` spread over
/// `[0, 1]`, occasionally zero.
pub fn random_instance(n: usize, rng: &mut ChaCha8Rng) -> BudgetUtilitySet {
    let limits = random_limits(n, rng);
    let costs = limits
        .values()
        .iter()
        .map(|&l| {
            if rng.random::<f64>() < 0.05 {
                return 0.0;
            }
            let mut c: f64 = rng.random_range(0.05..=1.0) / l;
            while c * l > 1.0 {
                c = c.next_down();
            }
            c
        })
        .collect();
    BudgetUtilitySet::validate_instance(limits, costs).unwrap()
}
