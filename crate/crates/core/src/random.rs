//! Seeded generation of "generic" vectors.
//!
//! Every random choice in the library goes through [`rng`], a ChaCha8 stream
//! keyed by a `u64` seed (default 0). Entries are c·ζ_N^k with c ∈ [−2, 2]
//! and k ∈ [0, N), so a fixed seed reproduces the same vectors on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::CycNumber;
use crate::linalg::{is_zero_vector, Vector};

pub const DEFAULT_SEED: u64 = 0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_entry(rng: &mut impl Rng, conductor: u32) -> CycNumber {
    let c: i64 = rng.gen_range(-2..=2);
    let k: i64 = rng.gen_range(0..conductor as i64);
    &CycNumber::from_i64(conductor, c) * &CycNumber::root_of_unity(conductor, k)
}

pub fn random_vector(rng: &mut impl Rng, conductor: u32, dim: usize) -> Vector {
    (0..dim).map(|_| random_entry(rng, conductor)).collect()
}

/// A random vector with every entry nonzero.
pub fn random_full_support(rng: &mut impl Rng, conductor: u32, dim: usize) -> Vector {
    (0..dim)
        .map(|_| loop {
            let x = random_entry(rng, conductor);
            if !x.is_zero() {
                break x;
            }
        })
        .collect()
}

pub fn random_nonzero_vector(rng: &mut impl Rng, conductor: u32, dim: usize) -> Vector {
    loop {
        let v = random_vector(rng, conductor, dim);
        if !is_zero_vector(&v) {
            return v;
        }
    }
}
