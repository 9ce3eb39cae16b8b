use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use textile_core::ktheory::snf::{is_smith_form, smith_normal_form_bigint};
use textile_core::ktheory::{canonicalize, cokernel, invariant_factors_oracle, kernel_rank, smith_normal_form};
use textile_core::{AbelianGroup, IntMatrix};

fn int_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c)
            .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j])))
    })
}

fn square(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * n)
            .prop_map(move |v| IntMatrix::from_fn(n, n, |i, j| BigInt::from(v[i * n + j])))
    })
}

/// Elementary divisors regrouped by prime: the largest power of each prime
/// goes into the last factor, the next largest into the one before, and so on.
fn prime_power_canonical(orders: &[u64]) -> AbelianGroup {
    let free = orders.iter().filter(|&&o| o == 0).count();
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &o in orders.iter().filter(|&&o| o > 1) {
        let mut rest = o;
        let mut p = 2;
        while rest > 1 {
            if rest % p == 0 {
                let mut q = 1;
                while rest % p == 0 {
                    rest /= p;
                    q *= p;
                }
                by_prime.entry(p).or_default().push(q);
            }
            p += 1;
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable();
        for (k, q) in powers.iter().rev().enumerate() {
            factors[len - 1 - k] *= q;
        }
    }
    let mut all: Vec<BigInt> = vec![BigInt::zero(); free];
    all.extend(factors.into_iter().map(BigInt::from));
    canonicalize(&all)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn snf_matches_determinantal_divisors(m in int_matrix(6, 9)) {
        let snf = smith_normal_form(&m);
        prop_assert!(snf.verify(&m));
        prop_assert!(is_smith_form(&snf.diag));
        prop_assert_eq!(snf.invariant_factors(), invariant_factors_oracle(&m).unwrap());
    }

    #[test]
    fn snf_is_transpose_invariant(m in int_matrix(6, 9)) {
        let t = m.transpose();
        prop_assert_eq!(smith_normal_form(&m).diagonal(), smith_normal_form(&t).diagonal());
    }

    #[test]
    fn bigint_path_agrees_with_fast_path(m in int_matrix(5, 30)) {
        let fast = smith_normal_form(&m);
        let slow = smith_normal_form_bigint(&m);
        prop_assert!(slow.verify(&m));
        prop_assert_eq!(fast.diagonal(), slow.diagonal());
    }

    #[test]
    fn cokernel_order_is_determinant(m in square(6, 9)) {
        let det = m.determinant();
        let g = cokernel(&m);
        if det.is_zero() {
            prop_assert!(g.free_rank() > 0);
            prop_assert_eq!(g.free_rank(), kernel_rank(&m));
        } else {
            prop_assert_eq!(g.free_rank(), 0);
            prop_assert_eq!(g.order().unwrap(), det.abs());
            prop_assert_eq!(kernel_rank(&m), 0);
        }
    }

    #[test]
    fn canonicalize_matches_prime_power_regrouping(orders in prop::collection::vec(0u64..=60, 0..7)) {
        let big: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
        let g = canonicalize(&big);
        prop_assert_eq!(&g, &prime_power_canonical(&orders));
        for w in g.torsion().windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        let mut reversed = big.clone();
        reversed.reverse();
        prop_assert_eq!(canonicalize(&reversed), g);
    }
}

#[test]
fn diagonal_of_invariant_factors_is_its_own_smith_form() {
    let d = IntMatrix::from_i64_rows(&[[2, 0, 0], [0, 6, 0], [0, 0, 0]]).unwrap();
    let snf = smith_normal_form(&d);
    assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::zero()]);
    assert_eq!(cokernel(&d).to_string(), "Z + Z/2Z + Z/6Z");
}

#[test]
fn unimodular_matrices_have_trivial_cokernel() {
    let u = IntMatrix::from_i64_rows(&[[1, 7, -3], [0, 1, 5], [0, 0, 1]]).unwrap();
    let l = u.transpose();
    let p = u.mul(&l);
    assert!(p.determinant().abs().is_one());
    assert!(cokernel(&p).is_trivial());
}
