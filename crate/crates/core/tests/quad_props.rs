//! Ring identities, valuations, and heights in `Z[phi]`, cross-checked
//! against repeated exact multiplication and a from-scratch height oracle.

use num_bigint::BigInt;
use num_traits::Signed;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fibpow_core::fib::{fib, lucas};
use fibpow_core::quad::{
    alpha_pow, alpha_pow_signed, alpha_real, height_bound_eta3, height_bound_eta4, log_alpha,
    log_sqrt5, v_sqrt5, QuadInt,
};
use fibpow_core::real::{Dyadic, Real};

/// Test-only height oracle for algebraic integers `a + b phi`:
/// `h = (1/2)(log+ |eta| + log+ |eta'|)` for degree 2, `log+ |a|` for
/// rational integers. Lives here so the library bounds stay independent.
fn height_oracle(z: &QuadInt, p: u32) -> Real {
    use num_traits::Zero;
    if z.b.is_zero() {
        if z.a.magnitude() <= &1u32.into() {
            return Real::zero();
        }
        return fibpow_core::real::log_int(&z.a.abs(), p).unwrap();
    }
    let log_plus = |v: &QuadInt| -> Real {
        let mag = v.embed(p + 8).abs();
        if mag.le_certain(&Real::one()) {
            return Real::zero();
        }
        mag.ln(p).unwrap()
    };
    let h = log_plus(z).add(&log_plus(&z.conjugate()), p);
    h.half()
}

fn abs_diff_below(a: &Real, b: &Real, tol_exp: i64) -> bool {
    let d = a.sub(b, 512).abs();
    d.le_certain(&Real::exact(Dyadic::pow2(tol_exp)))
}

#[test]
fn alpha_powers_match_fibonacci_coordinates() {
    // exact repeated-multiplication oracle
    let alpha = QuadInt::alpha();
    let mut acc = QuadInt::one();
    for x in 1..=1000u64 {
        acc = &acc * &alpha;
        assert_eq!(acc, alpha_pow(x), "power {x}");
        assert_eq!(acc.a, fib(x - 1), "rational part at {x}");
        assert_eq!(acc.b, fib(x), "phi part at {x}");
    }
}

#[test]
fn norm_of_alpha_power_plus_one() {
    // (phi^x + 1)(beta^x + 1) = (-1)^x + L_x + 1
    for x in 0..=1000u64 {
        let z = &alpha_pow(x) + &QuadInt::one();
        let n = z.norm();
        if x % 2 == 1 {
            assert_eq!(n, lucas(x), "odd {x}");
        } else {
            assert_eq!(n, lucas(x) + 2, "even {x}");
        }
    }
}

#[test]
fn odd_powers_plus_one_avoid_sqrt5() {
    for x in (1..=999u64).step_by(2) {
        let z = &alpha_pow(x) + &QuadInt::one();
        assert_eq!(v_sqrt5(&z).unwrap(), 0, "x={x}");
    }
}

#[test]
fn valuation_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let random_elt = |rng: &mut ChaCha8Rng| loop {
        let a = BigInt::from(rng.gen_range(-50i64..=50));
        let b = BigInt::from(rng.gen_range(-50i64..=50));
        let e = rng.gen_range(0u32..3);
        let mut z = QuadInt::new(a, b);
        for _ in 0..e {
            z = &z * &QuadInt::sqrt5();
        }
        if !z.is_zero() {
            return z;
        }
    };
    for _ in 0..500 {
        let z = random_elt(&mut rng);
        let w = random_elt(&mut rng);
        let prod = &z * &w;
        assert_eq!(
            v_sqrt5(&prod).unwrap(),
            v_sqrt5(&z).unwrap() + v_sqrt5(&w).unwrap()
        );
    }
}

#[test]
fn binet_cross_check() {
    // F_n is the unique integer inside the enclosure of
    // (phi^n - beta^n)/sqrt5 once the width is below 1/2
    let p = 320;
    let alpha = alpha_real(p);
    let beta = Real::one().sub(&alpha, p);
    let sqrt5 = fibpow_core::quad::sqrt5_real(p);
    for n in 0..=200u64 {
        let an = alpha.powi(n as i64, p).unwrap();
        let bn = beta.powi(n as i64, p).unwrap();
        let v = an.sub(&bn, p).div(&sqrt5, p).unwrap();
        assert!(
            v.width().cmp_val(&Dyadic::pow2(-1)) == std::cmp::Ordering::Less,
            "width too large at {n}"
        );
        assert!(v.contains_bigint(&fib(n)), "Binet misses F_{n}");
    }
}

#[test]
fn fundamental_heights() {
    // h(sqrt5) = (log 5)/2 and h(phi) = (log phi)/2, to 2^-100
    let p = 256;
    let h_sqrt5 = height_oracle(&QuadInt::sqrt5(), p);
    assert!(abs_diff_below(&h_sqrt5, &log_sqrt5(p), -100));
    let h_alpha = height_oracle(&QuadInt::alpha(), p);
    assert!(abs_diff_below(&h_alpha, &log_alpha(p).half(), -100));
}

#[test]
fn eta3_height_bound_holds() {
    // 1 + phi^-2 + phi^-5 has k = 3 terms and spread 5: h <= k * T for T = 5
    let p = 200;
    let z = &(&QuadInt::one() + &alpha_pow_signed(-2)) + &alpha_pow_signed(-5);
    let h = height_oracle(&z, p);
    let t = BigRational::from_integer(BigInt::from(5));
    let bound = height_bound_eta3(3, &t);
    assert!(h.le_certain(&Real::from_ratio(&bound.value, p)));
    // tighter sanity: the oracle height is around 1.1989
    assert!(h.le_certain(&Real::from_ratio(
        &BigRational::new(BigInt::from(12), BigInt::from(10)),
        p
    )));
    assert!(Real::from_ratio(&BigRational::new(BigInt::from(11), BigInt::from(10)), p)
        .le_certain(&h));
}

#[test]
fn eta4_height_bound_holds() {
    // h(phi^6 + 1) <= 6 (log phi)/2 + log 2, numerically
    let p = 200;
    let z = &alpha_pow(6) + &QuadInt::one();
    let h = height_oracle(&z, p);
    let rhs = log_alpha(p)
        .mul_int(&BigInt::from(6), p)
        .half()
        .add(&Real::from_i64(2).ln(p).unwrap(), p);
    assert!(h.le_certain(&rhs));
    // and the declared bound dominates that expression for S = 24
    let s = BigRational::from_integer(BigInt::from(24));
    let hb = height_bound_eta4(&s);
    assert!(rhs.le_certain(&Real::from_ratio(&hb.value, p)));
}
