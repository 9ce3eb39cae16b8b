//! Invariant factors from determinantal divisors: `d_k` is the gcd of all
//! `k × k` minors and the `k`-th invariant factor is `d_k / d_{k-1}`.
//!
//! Shares nothing with the elimination in [`super::snf`] beyond the matrix
//! type, so the two can check each other.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::IntMatrix;

/// Largest `min(rows, cols)` the oracle accepts.
pub const ORACLE_MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("determinantal-divisor oracle refuses a {rows}x{cols} matrix (limit {ORACLE_MAX_DIM})")]
pub struct OracleTooLarge {
    pub rows: usize,
    pub cols: usize,
}

/// All `k`-element subsets of `0..n`, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[pos] += 1;
        for i in pos + 1..k {
            cur[i] = cur[i - 1] + 1;
        }
    }
}

/// gcd of all `k × k` minors.
pub fn determinantal_divisor(m: &IntMatrix, k: usize) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    let rows = subsets(m.rows(), k);
    let cols = subsets(m.cols(), k);
    let mut g = BigInt::zero();
    for r in &rows {
        for c in &cols {
            let minor = IntMatrix::from_fn(k, k, |i, j| m[(r[i], c[j])].clone());
            g = g.gcd(&minor.determinant());
            if g.is_one() {
                return g;
            }
        }
    }
    g.abs()
}

/// Nonzero invariant factors `d_k / d_{k-1}` for `k = 1..rank`.
pub fn invariant_factors_oracle(m: &IntMatrix) -> Result<Vec<BigInt>, OracleTooLarge> {
    if m.rows().min(m.cols()) > ORACLE_MAX_DIM {
        return Err(OracleTooLarge { rows: m.rows(), cols: m.cols() });
    }
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let d = determinantal_divisor(m, k);
        if d.is_zero() {
            break;
        }
        out.push(&d / &prev);
        prev = d;
    }
    Ok(out)
}
