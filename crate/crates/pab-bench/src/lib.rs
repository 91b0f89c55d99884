//! Shared fixtures for the criterion benches.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pab_core::IntMatrix;

/// Seeded dense matrix with entries in `[-max_abs, max_abs]`.
pub fn random_matrix(seed: u64, rows: usize, cols: usize, max_abs: i64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = IntMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = BigInt::from(rng.gen_range(-max_abs..=max_abs));
        }
    }
    m
}
