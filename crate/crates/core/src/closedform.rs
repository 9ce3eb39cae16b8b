//! Exchange systems on one vertex: `A = [N]`, `B = [M]` with
//! `κ(α, a) = (a, α)`. Here `A_κ + B_κ - I = E_N ⊗ I_M + I_N ⊗ E_M - I`, and
//! its cokernel has a closed form driven by the Euclidean algorithm on
//! `m = M - 1`, `n = N - 1`:
//!
//! ```text
//! K_0 ≅ (Z/n)^{M-2} ⊕ (Z/m)^{N-2} ⊕ Z/d ⊕ Z/([k₁,…,k_{j+1}] · m(m+n+1))
//! ```
//!
//! where `d = gcd(m, n)`, `k₀, k₁, …` are the successive quotients and
//! `[k₁,…,k_t]` is their continuant. When `n | m` the last two summands are
//! `Z/n ⊕ Z/m(m+n+1)`. `K_1` vanishes.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ktheory::{canonicalize, cokernel, group_equal, kgroups_of_system, AbelianGroup, KGroups, SystemKGroups};
use crate::matrix::{IntMatrix, NonnegMatrix};
use crate::textile::{exchange_system, TextileError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("Euclidean trace needs m >= n >= 1, got m = {m}, n = {n}")]
    BadTraceInput { m: u64, n: u64 },
    #[error("closed form needs 1 < N <= M, got N = {n}, M = {m}")]
    BadOrder { n: u64, m: u64 },
    #[error(transparent)]
    Textile(#[from] TextileError),
}

/// Quotients and remainders of the Euclidean algorithm on `(m, n)`:
///
/// ```text
/// m       = n k₀ + r₀
/// n       = r₀ k₁ + r₁
/// r₀      = r₁ k₂ + r₂
/// …
/// r_{j-1} = r_j k_{j+1}
/// ```
///
/// `remainders` holds the nonzero `r₀ … r_j`; it is empty when `n | m`, in
/// which case `quotients = [k₀]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclidTrace {
    pub m: u64,
    pub n: u64,
    pub quotients: Vec<u64>,
    pub remainders: Vec<u64>,
    pub gcd: u64,
}

impl EuclidTrace {
    pub fn divisible(&self) -> bool {
        self.remainders.is_empty()
    }

    /// `k₁, …, k_{j+1}`: the quotients after the first.
    pub fn tail_quotients(&self) -> &[u64] {
        &self.quotients[1..]
    }
}

pub fn euclid_trace(m: u64, n: u64) -> Result<EuclidTrace, ClosedFormError> {
    if n == 0 || m < n {
        return Err(ClosedFormError::BadTraceInput { m, n });
    }
    let mut quotients = vec![m / n];
    let mut remainders = Vec::new();
    let (mut prev, mut cur) = (n, m % n);
    while cur != 0 {
        remainders.push(cur);
        quotients.push(prev / cur);
        (prev, cur) = (cur, prev % cur);
    }
    Ok(EuclidTrace { m, n, quotients, remainders, gcd: prev })
}

/// Continuant `[k₁, …, k_t]`: `[] = 1`, `[k₁] = k₁`,
/// `[k₁, …, k_t] = [k₁, …, k_{t-1}] k_t + [k₁, …, k_{t-2}]`.
pub fn continuant(ks: &[u64]) -> BigInt {
    let (mut cur, mut prev) = (BigInt::from(1u8), BigInt::from(0u8));
    for &k in ks {
        let next = &cur * k + &prev;
        prev = core::mem::replace(&mut cur, next);
    }
    cur
}

fn check_order(n: u64, m: u64) -> Result<(), ClosedFormError> {
    if n <= 1 || n > m {
        return Err(ClosedFormError::BadOrder { n, m });
    }
    Ok(())
}

fn check_sizes(n: u64, m: u64) -> Result<(), ClosedFormError> {
    if n <= 1 || m <= 1 {
        return Err(ClosedFormError::BadOrder { n, m });
    }
    Ok(())
}

/// The 2×2 matrix `[[N-1, 0], [M+N-2, (M-1)(M+N-1)]]` left over after
/// reducing the `M × M` block.
pub fn l_matrix(n: u64, m: u64) -> Result<IntMatrix, ClosedFormError> {
    check_sizes(n, m)?;
    let e = BigInt::from(m - 1);
    let f = BigInt::from(m + n - 2);
    let corner = &e + BigInt::from(m - 1) * &f;
    Ok(IntMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => &f - &e,
        (0, 1) => BigInt::from(0u8),
        (1, 0) => f.clone(),
        _ => corner.clone(),
    }))
}

/// `E_M - I_M`
pub fn ones_minus_identity(m: u64) -> IntMatrix {
    let m = m as usize;
    NonnegMatrix::ones(m).to_int().sub(&IntMatrix::identity(m))
}

/// `(M+N-2) E_M - (N-1) I_M`
pub fn shifted_ones_block(n: u64, m: u64) -> IntMatrix {
    let size = m as usize;
    let ones = NonnegMatrix::ones(size).to_int().scale(&BigInt::from(m + n - 2));
    ones.sub(&IntMatrix::identity(size).scale(&BigInt::from(n - 1)))
}

/// `E_M² + (i-1) E_M - i I_M`, by direct multiplication.
pub fn ones_polynomial(m: u64, i: u64) -> IntMatrix {
    let size = m as usize;
    let e = NonnegMatrix::ones(size).to_int();
    let i_big = BigInt::from(i);
    e.mul(&e).sub(&IntMatrix::identity(size).scale(&i_big)).sub(&e.scale(&(BigInt::from(1u8) - &i_big)))
}

/// `K_0` assembled from blocks: `N-2` copies of `coker(E_M - I_M)` plus
/// `coker((M+N-2) E_M - (N-1) I_M)`, each by Smith normal form.
pub fn block_decomposed_k0(n: u64, m: u64) -> Result<AbelianGroup, ClosedFormError> {
    check_sizes(n, m)?;
    let unit = cokernel(&ones_minus_identity(m));
    let mut acc = cokernel(&shifted_ones_block(n, m));
    for _ in 0..n - 2 {
        acc = acc.direct_sum(&unit);
    }
    Ok(acc)
}

/// `coker((M+N-2) E_M - (N-1) I_M)` split as `M-2` copies of `Z/(N-1)`
/// plus `coker(L)`.
pub fn split_block_cokernel(n: u64, m: u64) -> Result<AbelianGroup, ClosedFormError> {
    let l = l_matrix(n, m)?;
    let mut orders = vec![BigInt::from(n - 1); (m - 2) as usize];
    let rest = cokernel(&l);
    orders.extend(core::iter::repeat_n(BigInt::from(0u8), rest.free_rank()));
    orders.extend(rest.torsion().iter().cloned());
    Ok(canonicalize(&orders))
}

/// The two summands standing for `coker(L)`, from the Euclidean trace.
fn l_summands(n: u64, m: u64) -> Result<(Vec<BigInt>, EuclidTrace, BigInt), ClosedFormError> {
    let (nn, mm) = (n - 1, m - 1);
    let trace = euclid_trace(mm, nn)?;
    let g = BigInt::from(mm) * BigInt::from(mm + nn + 1);
    let pair = if trace.divisible() {
        vec![BigInt::from(nn), g.clone()]
    } else {
        vec![BigInt::from(trace.gcd), continuant(trace.tail_quotients()) * &g]
    };
    Ok((pair, trace, g))
}

/// `coker(L)` in closed form: `Z/d ⊕ Z/([k₁,…,k_{j+1}] g)`, or
/// `Z/(N-1) ⊕ Z/g` when `N-1` divides `M-1`.
pub fn l_cokernel_closed_form(n: u64, m: u64) -> Result<AbelianGroup, ClosedFormError> {
    check_order(n, m)?;
    Ok(canonicalize(&l_summands(n, m)?.0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormResult {
    /// Cyclic orders as listed by the formula, ones included.
    pub summands: Vec<BigInt>,
    pub canonical: AbelianGroup,
    pub k1: AbelianGroup,
    pub trace: EuclidTrace,
    /// `(M-1)(M+N-1)`
    pub g: BigInt,
}

pub fn closed_form_kgroups(n: u64, m: u64) -> Result<ClosedFormResult, ClosedFormError> {
    check_order(n, m)?;
    let mut summands = vec![BigInt::from(n - 1); (m - 2) as usize];
    summands.extend(core::iter::repeat_n(BigInt::from(m - 1), (n - 2) as usize));
    let (pair, trace, g) = l_summands(n, m)?;
    summands.extend(pair);
    let canonical = canonicalize(&summands);
    Ok(ClosedFormResult { summands, canonical, k1: AbelianGroup::trivial(), trace, g })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormReport {
    pub n: u64,
    pub m: u64,
    pub computed: SystemKGroups,
    pub closed: ClosedFormResult,
    pub k0_agree: bool,
    pub k1_agree: bool,
}

impl ClosedFormReport {
    pub fn agree(&self) -> bool {
        self.k0_agree && self.k1_agree && self.computed.consistent()
    }
}

/// Builds the exchange system, computes its K-groups by Smith normal form
/// and compares them with the closed form.
pub fn verify_closed_form(n: u64, m: u64) -> Result<ClosedFormReport, ClosedFormError> {
    check_order(n, m)?;
    let closed = closed_form_kgroups(n, m)?;
    let computed = kgroups_of_system(&exchange_system(n, m)?);
    let KGroups { k0, k1 } = &computed.groups;
    let k0_agree = group_equal(k0, &closed.canonical);
    let k1_agree = group_equal(k1, &closed.k1);
    Ok(ClosedFormReport { n, m, computed, closed, k0_agree, k1_agree })
}
