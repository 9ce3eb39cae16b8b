//! Smith normal form with unimodular transforms.
//!
//! The elimination runs on checked `i128` first and restarts on `BigInt` if
//! any intermediate value overflows, so results are always exact.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::IntMatrix;

/// `left · M · right = diag` with `left`, `right` unimodular and `diag`
/// diagonal, nonnegative, `d₁ | d₂ | … | d_r` followed by zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.diag.diagonal()
    }

    /// Nonzero diagonal entries (ones included).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !Zero::is_zero(d)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !Zero::is_zero(*d)).count()
    }

    /// Checks `left · m · right = diag` exactly, plus the shape of `diag`.
    pub fn reproduces(&self, m: &IntMatrix) -> bool {
        self.left.mul(m).mul(&self.right) == self.diag && is_smith_form(&self.diag)
    }

    /// [`reproduces`](Self::reproduces) plus `|det left| = |det right| = 1`.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        self.reproduces(m) && self.left.determinant().abs().is_one() && self.right.determinant().abs().is_one()
    }
}

/// Diagonal, nonnegative, divisibility chain, zeros last.
pub fn is_smith_form(s: &IntMatrix) -> bool {
    if !s.is_diagonal() {
        return false;
    }
    let d = s.diagonal();
    if d.iter().any(Signed::is_negative) {
        return false;
    }
    d.windows(2).all(|w| if Zero::is_zero(&w[0]) { Zero::is_zero(&w[1]) } else { Zero::is_zero(&(&w[1] % &w[0])) })
}

/// Integer arithmetic the elimination needs; `None` signals overflow.
trait Ring: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn neg(&self) -> Option<Self>;
    /// `self - q * other`
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self>;
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    /// Truncated quotient and whether the remainder is zero.
    fn div_rem_zero(&self, other: &Self) -> Option<(Self, bool)>;
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*other)?)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn div_rem_zero(&self, other: &Self) -> Option<(Self, bool)> {
        Some((self.checked_div(*other)?, self.checked_rem(*other)? == 0))
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        Some(self - q * other)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn div_rem_zero(&self, other: &Self) -> Option<(Self, bool)> {
        let (q, r) = self.div_rem(other);
        Some((q, Zero::is_zero(&r)))
    }
}

#[derive(Clone)]
struct Dense<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Dense<T> {
    fn identity(n: usize) -> Self {
        let mut data = alloc::vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self { rows: n, cols: n, data }
    }

    fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] -= q * row[src]`
    fn row_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_nil() {
                continue;
            }
            let v = self.data[dst * self.cols + j].sub_mul(q, s)?;
            self.data[dst * self.cols + j] = v;
        }
        Some(())
    }

    /// `col[dst] -= q * col[src]`
    fn col_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if s.is_nil() {
                continue;
            }
            let v = self.data[i * self.cols + dst].sub_mul(q, s)?;
            self.data[i * self.cols + dst] = v;
        }
        Some(())
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for j in 0..self.cols {
            let v = self.data[i * self.cols + j].neg()?;
            self.data[i * self.cols + j] = v;
        }
        Some(())
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        let mut data = alloc::vec![T::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_nil() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_nil() {
                        let cell = &mut data[i * other.cols + j];
                        *cell = cell.add(&a.mul(b)?)?;
                    }
                }
            }
        }
        Some(Self { rows: self.rows, cols: other.cols, data })
    }
}

struct Elimination<T> {
    s: Dense<T>,
    u: Dense<T>,
    v: Dense<T>,
}

impl<T: Ring> Elimination<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn row_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        self.s.row_sub_mul(dst, src, q)?;
        self.u.row_sub_mul(dst, src, q)
    }

    fn col_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        self.s.col_sub_mul(dst, src, q)?;
        self.v.col_sub_mul(dst, src, q)
    }

    /// Smallest nonzero `|s(i,j)|` with `i, j ≥ t`.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.s.rows {
            for j in t..self.s.cols {
                let x = self.s.at(i, j);
                if !x.is_nil() && best.is_none_or(|(bi, bj)| x.abs_lt(self.s.at(bi, bj))) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Smallest nonzero entry in row `t` or column `t` beyond the pivot.
    fn smallest_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let cand = (t + 1..self.s.rows).map(|i| (i, t)).chain((t + 1..self.s.cols).map(|j| (t, j)));
        for (i, j) in cand {
            let x = self.s.at(i, j);
            if !x.is_nil() && best.is_none_or(|(bi, bj)| x.abs_lt(self.s.at(bi, bj))) {
                best = Some((i, j));
            }
        }
        best
    }

    fn run(&mut self) -> Option<()> {
        let (rows, cols) = (self.s.rows, self.s.cols);
        for t in 0..rows.min(cols) {
            let Some((pi, pj)) = self.smallest_in_block(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // reduce the pivot row and column modulo the pivot
                let pivot = self.s.at(t, t).clone();
                for i in t + 1..rows {
                    if !self.s.at(i, t).is_nil() {
                        let (q, _) = self.s.at(i, t).div_rem_zero(&pivot)?;
                        self.row_sub_mul(i, t, &q)?;
                    }
                }
                for j in t + 1..cols {
                    if !self.s.at(t, j).is_nil() {
                        let (q, _) = self.s.at(t, j).div_rem_zero(&pivot)?;
                        self.col_sub_mul(j, t, &q)?;
                    }
                }
                if let Some((i, j)) = self.smallest_in_cross(t) {
                    // a remainder is left; it is smaller than the pivot
                    if i == t {
                        self.swap_cols(t, j);
                    } else {
                        self.swap_rows(t, i);
                    }
                    continue;
                }
                // pivot must divide the rest of the block
                let pivot = self.s.at(t, t).clone();
                let mut offender = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        let x = self.s.at(i, j);
                        if !x.is_nil() && !x.div_rem_zero(&pivot)?.1 {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    // row t += row i, then reduce again
                    Some(i) => self.row_sub_mul(t, i, &T::one().neg()?)?,
                    None => break,
                }
            }
            if self.s.at(t, t).is_neg() {
                self.s.negate_row(t)?;
                self.u.negate_row(t)?;
            }
        }
        Some(())
    }
}

fn eliminate<T: Ring>(m: Dense<T>) -> Option<(Dense<T>, Dense<T>, Dense<T>)> {
    let (rows, cols) = (m.rows, m.cols);
    let mut e = Elimination { u: Dense::identity(rows), v: Dense::identity(cols), s: m };
    e.run()?;
    Some((e.u, e.s, e.v))
}

fn to_small(m: &IntMatrix) -> Option<Dense<i128>> {
    let data = m.entries().iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>()?;
    Some(Dense { rows: m.rows(), cols: m.cols(), data })
}

fn small_to_int(d: &Dense<i128>) -> IntMatrix {
    IntMatrix::from_fn(d.rows, d.cols, |i, j| BigInt::from(*d.at(i, j)))
}

fn big_to_int(d: &Dense<BigInt>) -> IntMatrix {
    IntMatrix::from_fn(d.rows, d.cols, |i, j| d.at(i, j).clone())
}

fn small_attempt(m: &IntMatrix) -> Option<SnfResult> {
    let small = to_small(m)?;
    let (u, s, v) = eliminate(small.clone())?;
    // exact check in the same arithmetic; overflow here also means retry
    if u.mul(&small)?.mul(&v)?.data != s.data {
        return None;
    }
    Some(SnfResult { left: small_to_int(&u), diag: small_to_int(&s), right: small_to_int(&v) })
}

/// Smith normal form `U · M · V = S` of an arbitrary integer matrix.
///
/// The identity `U · M · V = S` and the shape of `S` are checked before
/// returning; a failure there is a bug and panics.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let result = small_attempt(m).unwrap_or_else(|| {
        let big = Dense { rows: m.rows(), cols: m.cols(), data: m.entries().to_vec() };
        let (u, s, v) = eliminate(big).expect("bigint arithmetic cannot overflow");
        SnfResult { left: big_to_int(&u), diag: big_to_int(&s), right: big_to_int(&v) }
    });
    assert!(result.reproduces(m), "Smith normal form failed to reproduce its input");
    debug_assert!(
        result.left.determinant().abs().is_one() && result.right.determinant().abs().is_one(),
        "Smith normal form transforms are not unimodular"
    );
    result
}

/// Forces the arbitrary-precision path; used to cross-check the fast path.
pub fn smith_normal_form_bigint(m: &IntMatrix) -> SnfResult {
    let big = Dense { rows: m.rows(), cols: m.cols(), data: m.entries().to_vec() };
    let (u, s, v) = eliminate(big).expect("bigint arithmetic cannot overflow");
    let result = SnfResult { left: big_to_int(&u), diag: big_to_int(&s), right: big_to_int(&v) };
    assert!(result.reproduces(m), "Smith normal form failed to reproduce its input");
    result
}
