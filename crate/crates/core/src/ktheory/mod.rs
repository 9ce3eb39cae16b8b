//! Finitely generated abelian groups from integer matrices, and the K-groups
//! of the Cuntz-Krieger algebra of a textile system:
//!
//! ```text
//! K_0 = Z^n / (A_κ + B_κ - I_n) Z^n,    K_1 = Ker(A_κ + B_κ - I_n) in Z^n
//! ```
//!
//! with `n = |Ω_κ|`, checked against the usual Cuntz-Krieger route through
//! `I - H_κᵀ`.

pub mod oracle;
pub mod snf;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;
use crate::textile::TextileSystem;

pub use oracle::{invariant_factors_oracle, OracleTooLarge, ORACLE_MAX_DIM};
pub use snf::{smith_normal_form, SnfResult};

/// `Z^free_rank ⊕ Z/t₁ ⊕ … ⊕ Z/t_k` with `t₁ | t₂ | … | t_k`, every `tᵢ ≥ 2`.
///
/// The representation is canonical, so structural equality is isomorphism.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z/order Z`; order 0 gives `Z`.
    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        canonicalize(&[order.into()])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Direct sum, re-canonicalized.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders: Vec<BigInt> = Vec::new();
        orders.extend(core::iter::repeat_n(BigInt::zero(), self.free_rank + other.free_rank));
        orders.extend(self.torsion.iter().cloned());
        orders.extend(other.torsion.iter().cloned());
        canonicalize(&orders)
    }

    fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|t| *t >= BigInt::from(2))
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for AbelianGroup {
    /// `0`, `Z/8Z`, `Z^2 + Z/3Z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let s = if first { "" } else { " + " };
            first = false;
            f.write_str(s)
        };
        match self.free_rank {
            0 => {}
            1 => {
                sep(f)?;
                f.write_str("Z")?;
            }
            r => {
                sep(f)?;
                write!(f, "Z^{r}")?;
            }
        }
        for t in &self.torsion {
            sep(f)?;
            write!(f, "Z/{t}Z")?;
        }
        Ok(())
    }
}

/// Invariant-factor form of `⊕ Z/oᵢ Z` (order `0` meaning `Z`).
///
/// Pairs are replaced by `(gcd, lcm)` until the orders form a divisibility
/// chain; `Z/a ⊕ Z/b ≅ Z/gcd ⊕ Z/lcm` keeps the group fixed. Orders are
/// taken up to sign.
pub fn canonicalize(orders: &[BigInt]) -> AbelianGroup {
    let free_rank = orders.iter().filter(|o| o.is_zero()).count();
    let mut finite: Vec<BigInt> = orders.iter().filter(|o| !o.is_zero()).map(|o| o.abs()).filter(|o| !o.is_one()).collect();
    for i in 0..finite.len() {
        for j in i + 1..finite.len() {
            let (g, l) = (finite[i].gcd(&finite[j]), finite[i].lcm(&finite[j]));
            finite[i] = g;
            finite[j] = l;
        }
    }
    finite.retain(|o| !o.is_one());
    let group = AbelianGroup { free_rank, torsion: finite };
    debug_assert!(group.is_canonical());
    group
}

pub fn group_equal(g1: &AbelianGroup, g2: &AbelianGroup) -> bool {
    g1 == g2
}

/// `Z^rows / M Z^cols` read off the Smith form.
pub fn cokernel_of_snf(rows: usize, snf: &SnfResult) -> AbelianGroup {
    let nonzero = snf.invariant_factors();
    let mut orders: Vec<BigInt> = nonzero;
    orders.extend(core::iter::repeat_n(BigInt::zero(), rows - snf.rank()));
    canonicalize(&orders)
}

/// `Z^n / M Z^n` for a square `M`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    assert!(m.is_square(), "cokernel of a non-square matrix");
    cokernel_of_snf(m.rows(), &smith_normal_form(m))
}

/// `n - rank(M)`: the rank of the (free) kernel of `M` in `Z^n`.
pub fn kernel_rank(m: &IntMatrix) -> usize {
    assert!(m.is_square(), "kernel of a non-square matrix");
    m.cols() - smith_normal_form(m).rank()
}

/// `K_0` and `K_1`; `K_1` is always free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGroups {
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
}

fn kgroups_of(m: &IntMatrix) -> KGroups {
    let snf = smith_normal_form(m);
    KGroups { k0: cokernel_of_snf(m.rows(), &snf), k1: AbelianGroup::free(m.cols() - snf.rank()) }
}

/// K-groups of a textile system computed two ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemKGroups {
    /// From `A_κ + B_κ - I_n`.
    pub groups: KGroups,
    /// From `I_{2n} - H_κᵀ`.
    pub cuntz_krieger: KGroups,
}

impl SystemKGroups {
    pub fn consistent(&self) -> bool {
        group_equal(&self.groups.k0, &self.cuntz_krieger.k0) && group_equal(&self.groups.k1, &self.cuntz_krieger.k1)
    }
}

/// `A_κ + B_κ - I_n` as an integer matrix.
pub fn reduced_matrix(sys: &TextileSystem) -> IntMatrix {
    let n = sys.omega().len();
    sys.sum_matrix().to_int().sub(&IntMatrix::identity(n))
}

/// `I_{2n} - H_κᵀ` as an integer matrix.
pub fn cuntz_krieger_matrix(sys: &TextileSystem) -> IntMatrix {
    let h = sys.h_kappa();
    IntMatrix::identity(h.dim()).sub(&h.transpose().to_int())
}

pub fn kgroups_of_system(sys: &TextileSystem) -> SystemKGroups {
    SystemKGroups { groups: kgroups_of(&reduced_matrix(sys)), cuntz_krieger: kgroups_of(&cuntz_krieger_matrix(sys)) }
}
