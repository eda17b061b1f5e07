//! Seeded sampling helpers for probes, property checks and fixtures.
//!
//! Everything runs off a `ChaCha8Rng` so that a `(seed, trial)` pair
//! reproduces the same draw on every platform. Grid samplers draw from
//! quarter-integer values, which keeps the bounded integer-sum oracle
//! decidable and LP data exactly representable.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gamble::{Gamble, PossibilitySpace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform gamble with entries in `[-range, range]`.
pub fn gamble_uniform(space: &PossibilitySpace, rng: &mut ChaCha8Rng, range: f64) -> Gamble {
    let values = (0..space.size())
        .map(|_| rng.gen_range(-range..=range))
        .collect();
    Gamble::new(space, values).expect("finite uniform values")
}

/// Gamble with entries on the quarter-integer grid in `[-2, 2]`.
pub fn gamble_grid(space: &PossibilitySpace, rng: &mut ChaCha8Rng) -> Gamble {
    let values = (0..space.size())
        .map(|_| rng.gen_range(-8..=8i32) as f64 * 0.25)
        .collect();
    Gamble::new(space, values).expect("grid values are finite")
}

/// Nonzero grid gamble.
pub fn gamble_grid_nonzero(space: &PossibilitySpace, rng: &mut ChaCha8Rng) -> Gamble {
    loop {
        let g = gamble_grid(space, rng);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Pointwise-nonnegative grid gamble with at least one positive entry.
pub fn gamble_grid_positive(space: &PossibilitySpace, rng: &mut ChaCha8Rng) -> Gamble {
    loop {
        let values: Vec<f64> = (0..space.size())
            .map(|_| rng.gen_range(0..=8i32) as f64 * 0.25)
            .collect();
        if values.iter().any(|&v| v > 0.0) {
            return Gamble::new(space, values).expect("grid values are finite");
        }
    }
}

/// Between one and `max_count` nonzero grid generators.
pub fn generators_grid(
    space: &PossibilitySpace,
    rng: &mut ChaCha8Rng,
    max_count: usize,
) -> Vec<Gamble> {
    let count = rng.gen_range(1..=max_count);
    (0..count).map(|_| gamble_grid_nonzero(space, rng)).collect()
}

/// Deterministic battery of small vectors with entries in
/// `{-1, -1/2, 0, 1/2, 1}`, the zero vector excluded. Probes walk this
/// before falling back to random draws so that symmetric counterexamples
/// are found reproducibly.
pub fn battery(space: &PossibilitySpace) -> Vec<Gamble> {
    let levels = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let n = space.size();
    let mut out = Vec::new();
    let total = levels.len().pow(n as u32);
    for mut code in 0..total {
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            values.push(levels[code % levels.len()]);
            code /= levels.len();
        }
        if values.iter().any(|&v| v != 0.0) {
            out.push(Gamble::new(space, values).expect("battery values are finite"));
        }
    }
    out
}
