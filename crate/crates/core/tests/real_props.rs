//! Soundness properties of the ball arithmetic: enclosures always contain
//! the exact value (checked against exact rational arithmetic), refinement
//! never widens, and the small-deviation logarithm bound holds on a grid.

use num_bigint::BigInt;
use num_traits::Signed;
use num_rational::BigRational;
use proptest::prelude::*;

use fibpow_core::real::{log_deviation_check, log_ratio, Dyadic, Real};

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn contains_rational(v: &Real, x: &BigRational) -> bool {
    let lo = v.lower(1024).to_rational();
    let hi = v.upper(1024).to_rational();
    lo <= *x && *x <= hi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn arithmetic_encloses_exact_rationals(
        an in -9999i64..10000, ad in 1i64..500,
        bn in -9999i64..10000, bd in 1i64..500,
        cn in 1i64..10000, cd in 1i64..500,
    ) {
        let a = rational(an, ad);
        let b = rational(bn, bd);
        let c = rational(cn, cd); // positive, safe divisor
        let p = 64;
        let ra = Real::from_ratio(&a, p);
        let rb = Real::from_ratio(&b, p);
        let rc = Real::from_ratio(&c, p);
        // ((a + b) * c - a) / c
        let got = ra.add(&rb, p).mul(&rc, p).sub(&ra, p).div(&rc, p).unwrap();
        let exact = (&(&(&a + &b) * &c) - &a) / &c;
        prop_assert!(contains_rational(&got, &exact));
    }

    #[test]
    fn log_soundness_and_refinement(
        xn in 1i64..1_000_000, xd in 100_000i64..1_000_000,
    ) {
        // x in (0, 10]
        let x = rational(xn, xd);
        let p = 64;
        let coarse = log_ratio(&x, p).unwrap();
        let fine = log_ratio(&x, 4 * p).unwrap();
        // the reference at 4x precision lies inside (overlaps) the coarse
        // enclosure, and refinement tightened the width
        prop_assert!(coarse.overlaps(&fine));
        prop_assert!(
            fine.width().cmp_val(&coarse.width()) != std::cmp::Ordering::Greater
        );
    }

    #[test]
    fn dyadic_order_matches_rationals(
        ma in -2000i64..2000, ea in -40i64..40,
        mb in -2000i64..2000, eb in -40i64..40,
    ) {
        let a = Dyadic::new(BigInt::from(ma), ea);
        let b = Dyadic::new(BigInt::from(mb), eb);
        prop_assert_eq!(a.cmp_val(&b), a.to_rational().cmp(&b.to_rational()));
    }

    #[test]
    fn rounding_is_directed(
        m in -100_000i64..100_000, e in -30i64..30, p in 2u32..20,
    ) {
        prop_assume!(m != 0);
        let v = Dyadic::new(BigInt::from(m), e);
        let exact = v.to_rational();
        let (down, _) = v.round(p, fibpow_core::real::Round::Down);
        let (up, _) = v.round(p, fibpow_core::real::Round::Up);
        let (near, err) = v.round(p, fibpow_core::real::Round::Nearest);
        prop_assert!(down.to_rational() <= exact);
        prop_assert!(exact <= up.to_rational());
        let delta = (near.to_rational() - &exact).abs();
        prop_assert!(delta <= err.to_rational());
    }

    #[test]
    fn endpoints_bracket_exact_values(
        an in -9999i64..10000, ad in 1i64..500,
        bn in -9999i64..10000, bd in 1i64..500,
        p in 8u32..200,
    ) {
        let a = rational(an, ad);
        let b = rational(bn, bd);
        let v = Real::from_ratio(&a, p).add(&Real::from_ratio(&b, p), p);
        let exact = &a + &b;
        prop_assert!(v.lower(p).to_rational() <= exact);
        prop_assert!(exact <= v.upper(p).to_rational());
    }

    #[test]
    fn exp_and_sqrt_agree_with_refined_precision(
        xn in 1i64..2000, xd in 1i64..2000,
    ) {
        let x = rational(xn, xd);
        let coarse = Real::from_ratio(&x, 64).exp(64).unwrap();
        let fine = Real::from_ratio(&x, 256).exp(256).unwrap();
        prop_assert!(coarse.overlaps(&fine));
        let cs = Real::from_ratio(&x, 64).sqrt(64).unwrap();
        let fs = Real::from_ratio(&x, 256).sqrt(256).unwrap();
        prop_assert!(cs.overlaps(&fs));
    }

    #[test]
    fn powers_enclose_exact_rationals(e in 1i64..12, n in 1i64..80, d in 1i64..80) {
        let x = rational(n, d);
        let rx = Real::from_ratio(&x, 96);
        let got = rx.powi(e, 96).unwrap();
        let mut exact = BigRational::from_integer(BigInt::from(1));
        for _ in 0..e {
            exact *= &x;
        }
        prop_assert!(contains_rational(&got, &exact));
    }
}

#[test]
fn bigint_shr_rounds_toward_negative_infinity() {
    // the exp argument reduction relies on floor semantics for negatives
    assert_eq!(BigInt::from(-5) >> 1u32, BigInt::from(-3));
    assert_eq!(BigInt::from(-1) >> 10u32, BigInt::from(-1));
    assert_eq!(BigInt::from(-9) >> 2u32, BigInt::from(-3));
    assert_eq!(BigInt::from(5) >> 1u32, BigInt::from(2));
}

#[test]
fn monotone_refinement_on_fixed_inputs() {
    let x = BigInt::from(123456789u64);
    let mut last_width: Option<Dyadic> = None;
    for p in [64u32, 128, 256, 512, 1024] {
        let v = fibpow_core::real::log_int(&x, p).unwrap();
        let w = v.width();
        if let Some(prev) = last_width {
            assert!(
                w.cmp_val(&prev) != std::cmp::Ordering::Greater,
                "widened at p={p}"
            );
        }
        last_width = Some(w);
    }
}

#[test]
fn deviation_bound_on_grid() {
    // |log x| <= 2|x-1| certified on a 10^4-point grid of [0.5, 1.5]
    let steps = 10_000i64;
    for i in 0..=steps {
        let x = rational(5_000 + i, 10_000); // 0.5 ..= 1.5
        let c = log_deviation_check(&Real::from_ratio(&x, 96), 96).unwrap();
        assert!(c.certified, "deviation bound uncertified at i={i}");
    }
}
