//! Exact integer Smith Normal Form and invariant factors of finitely
//! presented abelian groups.
//!
//! [`smith_normal_form`] diagonalizes an integer matrix `A` as
//! `U * A * V = D` with `U`, `V` unimodular, `D` diagonal, nonnegative, and
//! each diagonal entry dividing the next. [`minor_gcd_invariants`] recovers
//! the same diagonal from determinantal divisors (`d_1 * ... * d_i` equals
//! the gcd of all i-by-i minors) and serves as an independent oracle for the
//! elimination. [`abelian_type_from_relations`] reads the matrix as a
//! relation matrix on its columns and produces the invariant-factor type of
//! the presented group, rejecting anything that is not a finite p-group.

mod matrix;

pub use matrix::IntMatrix;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::pcpres::AbelianType;

/// Largest `min(rows, cols)` for which all minors are enumerated.
const MINOR_ENUMERATION_LIMIT: usize = 6;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SnfError {
    #[error("matrix with min dimension {min_dim} exceeds the minor enumeration limit {limit}")]
    TooLargeForMinorEnumeration { min_dim: usize, limit: usize },
    #[error("relation matrix does not present a finite p-group: {reason}")]
    NotFiniteP { reason: String },
}

/// Smith decomposition `U * A * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `D`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }

    /// Verifies every invariant of the decomposition against the input.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        if self.u.mul(a).mul(&self.v) != self.d {
            return false;
        }
        if !self.d.is_diagonal() {
            return false;
        }
        let diag = self.diagonal();
        for pair in diag.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.is_negative() || b.is_negative() {
                return false;
            }
            if a.is_zero() {
                if !b.is_zero() {
                    return false;
                }
            } else if !(b % a).is_zero() {
                return false;
            }
        }
        true
    }
}

fn min_abs_nonzero(d: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs = BigInt::zero();
    for i in from..d.rows() {
        for j in from..d.cols() {
            let entry = &d[(i, j)];
            if entry.is_zero() {
                continue;
            }
            let abs = entry.abs();
            if best.is_none() || abs < best_abs {
                best = Some((i, j));
                best_abs = abs;
            }
        }
    }
    best
}

/// Computes the Smith Normal Form by elimination with the smallest nonzero
/// entry as pivot, restoring the divisibility chain before each pivot is
/// finalized. Entries stay exact arbitrary-precision integers throughout.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let rows = a.rows();
    let cols = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_nonzero(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            // Reduce column t and row t against the pivot. Quotients
            // truncate toward zero, so leftover remainders are strictly
            // smaller than the pivot in absolute value.
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                let (pi, pj) = min_abs_nonzero(&d, t).expect("dirty submatrix is nonzero");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row and column are clear. If the pivot fails to divide some
            // remaining entry, fold that row in; the next pass leaves a
            // remainder and shrinks the pivot.
            let offender = (t + 1..rows)
                .cartesian_product(t + 1..cols)
                .find(|&(i, j)| !(&d[(i, j)] % &d[(t, t)]).is_zero());
            match offender {
                Some((i, _)) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    SnfResult { u, d, v }
}

/// The SNF diagonal computed from determinantal divisors: `d_i` is the gcd
/// of all i-by-i minors divided by the gcd of all (i-1)-by-(i-1) minors,
/// with the gcd over an empty set taken as 0. Independent of the
/// elimination path in [`smith_normal_form`].
pub fn minor_gcd_invariants(a: &IntMatrix) -> Result<Vec<BigInt>, SnfError> {
    let n = a.rows().min(a.cols());
    if n > MINOR_ENUMERATION_LIMIT {
        return Err(SnfError::TooLargeForMinorEnumeration {
            min_dim: n,
            limit: MINOR_ENUMERATION_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for size in 1..=n {
        let mut g = BigInt::zero();
        'scan: for row_idx in (0..a.rows()).combinations(size) {
            for col_idx in (0..a.cols()).combinations(size) {
                let det = a.submatrix(&row_idx, &col_idx).determinant();
                g = g.gcd(&det);
                if g.is_one() {
                    break 'scan;
                }
            }
        }
        if g.is_zero() {
            // Rank reached: this and all later invariants are zero.
            while out.len() < n {
                out.push(BigInt::zero());
            }
            return Ok(out);
        }
        out.push(&g / &prev);
        prev = g;
    }
    Ok(out)
}

/// Invariant factors of the abelian group presented by `A`: rows are
/// relations on `cols` generators. Unit factors are dropped; a free factor
/// (zero diagonal entry or more generators than relations can bound) or a
/// factor that is not a power of p is rejected as `NotFiniteP`.
pub fn abelian_type_from_relations(a: &IntMatrix, p: u64) -> Result<AbelianType, SnfError> {
    let diag = smith_normal_form(a).diagonal();
    if a.cols() > diag.len() {
        return Err(SnfError::NotFiniteP {
            reason: format!(
                "{} generators but only {} relations: free part of rank at least {}",
                a.cols(),
                diag.len(),
                a.cols() - diag.len()
            ),
        });
    }
    let mut factors = Vec::new();
    let big_p = BigInt::from(p);
    for d in diag {
        if d.is_zero() {
            return Err(SnfError::NotFiniteP {
                reason: "zero invariant factor (free generator)".to_string(),
            });
        }
        if d.is_one() {
            continue;
        }
        let mut rest = d.clone();
        while (&rest % &big_p).is_zero() {
            rest /= &big_p;
        }
        if !rest.is_one() {
            return Err(SnfError::NotFiniteP {
                reason: format!("invariant factor {} is not a power of {}", d, p),
            });
        }
        factors.push(BigUint::try_from(d).expect("positive factor"));
    }
    Ok(AbelianType::new(factors))
}
