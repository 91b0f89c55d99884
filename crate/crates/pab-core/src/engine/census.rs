//! Invariant factors of an enumerable abelian group by order statistics:
//! the counts `n_j = #{g : g^(p^j) = 1}` determine the type uniquely.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use num_bigint::BigUint;

use super::{EngineError, FiniteGroup};
use crate::pcpres::AbelianType;

/// Above this many elements, commutativity is verified on seeded random
/// pairs instead of exhaustively.
const EXHAUSTIVE_ABELIAN_LIMIT: usize = 128;
const ABELIAN_SAMPLE_PAIRS: usize = 4096;

fn log_exact(mut x: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    while x > 1 {
        if !x.is_multiple_of(p) {
            return None;
        }
        x /= p;
        e += 1;
    }
    Some(e)
}

/// Census decoding: if the type has `r_j` factors of order at least `p^j`,
/// then `log_p n_j - log_p n_(j-1) = r_j`, so the differences of the count
/// logarithms read off the factor multiplicities.
pub fn abelian_invariants_census<G: FiniteGroup>(
    group: &G,
    p: u64,
    seed: u64,
) -> Result<AbelianType, EngineError> {
    let elements = group.elements()?;
    let n = elements.len();
    let id = group.identity();

    if n <= EXHAUSTIVE_ABELIAN_LIMIT {
        for a in &elements {
            for b in &elements {
                if group.op(a, b) != group.op(b, a) {
                    return Err(EngineError::NotAbelian);
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ABELIAN_SAMPLE_PAIRS {
            let a = &elements[rng.gen_range(0..n)];
            let b = &elements[rng.gen_range(0..n)];
            if group.op(a, b) != group.op(b, a) {
                return Err(EngineError::NotAbelian);
            }
        }
    }

    // counts[j-1] = n_j; stop once everything is killed.
    let mut counts: Vec<u64> = Vec::new();
    let mut current = elements;
    loop {
        for e in &mut current {
            *e = group.power(e, p as i64);
        }
        let killed = current.iter().filter(|e| **e == id).count() as u64;
        counts.push(killed);
        if killed as usize == n {
            break;
        }
        if counts.len() > 64 {
            return Err(EngineError::Internal(
                "element order census did not stabilize".to_string(),
            ));
        }
    }

    let mut multiplicities: Vec<u32> = Vec::new(); // r_j for j = 1..
    let mut prev_log = 0u32;
    for &count in &counts {
        let log = log_exact(count, p).ok_or(EngineError::NotAbelian)?;
        if log < prev_log {
            return Err(EngineError::NotAbelian);
        }
        multiplicities.push(log - prev_log);
        prev_log = log;
    }
    for w in multiplicities.windows(2) {
        if w[1] > w[0] {
            return Err(EngineError::NotAbelian);
        }
    }

    let mut factors: Vec<BigUint> = Vec::new();
    for (j, &r) in multiplicities.iter().enumerate() {
        let next = multiplicities.get(j + 1).copied().unwrap_or(0);
        let order = BigUint::from(p).pow(j as u32 + 1);
        for _ in 0..(r - next) {
            factors.push(order.clone());
        }
    }
    Ok(AbelianType::new(factors))
}
