use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;
use textile_core::closedform::{
    block_decomposed_k0, closed_form_kgroups, continuant, euclid_trace, l_cokernel_closed_form, l_matrix,
    ones_minus_identity, ones_polynomial, shifted_ones_block, split_block_cokernel, verify_closed_form,
    ClosedFormError,
};
use textile_core::ktheory::{canonicalize, cokernel, kgroups_of_system};
use textile_core::textile::exchange_system;
use textile_core::AbelianGroup;

fn big(xs: &[u64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #[test]
    fn continuant_recurrence(ks in prop::collection::vec(1u64..50, 0..12)) {
        let c = continuant(&ks);
        prop_assert!(c >= BigInt::one());
        if ks.len() >= 2 {
            let t = ks.len();
            let expect = continuant(&ks[..t - 1]) * ks[t - 1] + continuant(&ks[..t - 2]);
            prop_assert_eq!(c, expect);
        }
    }

    /// The tail continuant of the Euclidean trace of `(m, n)` is `n / gcd`.
    #[test]
    fn tail_continuant_is_reduced_divisor(n in 1u64..500, extra in 0u64..500) {
        let m = n + extra;
        let t = euclid_trace(m, n).unwrap();
        prop_assert_eq!(t.gcd, m.gcd(&n));
        prop_assert_eq!(continuant(t.tail_quotients()), BigInt::from(n / t.gcd));
        let mut a = n;
        for (k, r) in t.quotients.iter().zip(t.remainders.iter()) {
            prop_assert!(*r < a);
            a = *r;
            prop_assert!(*k >= 1);
        }
    }
}

#[test]
fn examples() {
    let k = kgroups_of_system(&exchange_system(2, 3).unwrap());
    assert_eq!(k.groups.k0, AbelianGroup::cyclic(8));
    assert!(k.groups.k1.is_trivial());

    let k = kgroups_of_system(&exchange_system(3, 3).unwrap());
    assert_eq!(k.groups.k0, canonicalize(&big(&[2, 2, 2, 10])));
    assert_eq!(k.groups.k0.to_string(), "Z/2Z + Z/2Z + Z/2Z + Z/10Z");

    let r = verify_closed_form(2, 20).unwrap();
    assert!(r.agree());
    assert_eq!(r.computed.groups.k0, AbelianGroup::cyclic(399));
}

#[test]
fn raw_summands_keep_unit_factors() {
    // m = 3, n = 2: 3 = 2·1 + 1, 2 = 1·2, so d = 1 and [k₁] = 2; g = 3·6
    let r = closed_form_kgroups(3, 4).unwrap();
    assert_eq!(r.summands, big(&[2, 2, 3, 1, 36]));
    assert_eq!(r.g, BigInt::from(18));
    assert_eq!(r.canonical, canonicalize(&big(&[2, 6, 36])));
}

#[test]
fn two_row_family() {
    for m in 2..=20u64 {
        let r = closed_form_kgroups(2, m).unwrap();
        assert_eq!(r.canonical, AbelianGroup::cyclic(m * m - 1), "M = {m}");
    }
}

#[test]
fn rejects_reversed_order() {
    assert_eq!(closed_form_kgroups(4, 3), Err(ClosedFormError::BadOrder { n: 4, m: 3 }));
    assert!(matches!(verify_closed_form(1, 3), Err(ClosedFormError::BadOrder { .. })));
    assert!(matches!(euclid_trace(2, 3), Err(ClosedFormError::BadTraceInput { .. })));
}

#[test]
fn ones_minus_identity_cokernel() {
    for m in 2..=8u64 {
        assert_eq!(cokernel(&ones_minus_identity(m)), AbelianGroup::cyclic(m - 1), "M = {m}");
    }
}

#[test]
fn ones_polynomial_identity() {
    for n in 2..=8u64 {
        for m in 2..=8u64 {
            assert_eq!(ones_polynomial(m, n - 1), shifted_ones_block(n, m), "({n},{m})");
        }
    }
}

#[test]
fn block_decompositions() {
    for n in 2..=8u64 {
        for m in n..=8u64 {
            let k0 = kgroups_of_system(&exchange_system(n, m).unwrap()).groups.k0;
            assert_eq!(block_decomposed_k0(n, m).unwrap(), k0, "({n},{m})");
            assert_eq!(split_block_cokernel(n, m).unwrap(), cokernel(&shifted_ones_block(n, m)), "({n},{m})");

            let l = l_matrix(n, m).unwrap();
            let coker_l = cokernel(&l);
            assert_eq!(l_cokernel_closed_form(n, m).unwrap(), coker_l, "({n},{m})");
            let det = BigInt::from((n - 1) * (m - 1) * (m + n - 1));
            assert_eq!(l.determinant().abs(), det);
            assert_eq!(coker_l.order().unwrap(), det, "({n},{m})");
        }
    }
}

#[test]
fn closed_form_sweep() {
    for n in 2..=10u64 {
        for m in n..=10u64 {
            let r = verify_closed_form(n, m).unwrap();
            assert!(r.agree(), "({n},{m}): {} vs {}", r.computed.groups.k0, r.closed.canonical);
        }
    }
}
