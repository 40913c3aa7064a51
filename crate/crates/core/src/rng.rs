//! Seeded randomness.
//!
//! All stochastic steps use Xoshiro256++ (seeded through SplitMix64 by
//! `seed_from_u64`). Independent purposes draw from independent streams so
//! that, for example, omitting a head does not shift the shuffling order.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Rng = Xoshiro256PlusPlus;

/// Stream identifiers used with [`stream`].
pub mod streams {
    pub const SPLIT: u64 = 0x5350_4c49;
    pub const ENCODER_INIT: u64 = 1;
    pub const TAG_HEAD_INIT: u64 = 2;
    pub const DIFF_HEAD_INIT: u64 = 3;
    pub const SHUFFLE: u64 = 4;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for `(seed, stream)`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    Rng::seed_from_u64(splitmix64(seed) ^ splitmix64(stream.wrapping_mul(0x2545_f491_4f6c_dd1d)))
}

/// Uniform integer in `[0, bound)` by Lemire's widening multiply with rejection.
pub fn below(rng: &mut Rng, bound: u64) -> u64 {
    assert!(bound > 0);
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let m = (rng.next_u64() as u128) * (bound as u128);
        if (m as u64) >= threshold {
            return (m >> 64) as u64;
        }
    }
}

/// Uniform float in `[0, 1)` with 53 bits of precision.
pub fn unit(rng: &mut Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform float in `[-limit, limit)`.
pub fn symmetric(rng: &mut Rng, limit: f64) -> f64 {
    (2.0 * unit(rng) - 1.0) * limit
}

/// Fisher-Yates shuffle, walking from the back.
pub fn shuffle<T>(rng: &mut Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}
