//! Linear-form certification across many instances, the elementary sum and
//! size bounds used by the derivation, and the coefficient audit behind the
//! choice `B = n^2`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fibpow_core::linform::{basic_forms, max_star_coefficient, InstanceAB, Verdict};
use fibpow_core::quad::{alpha_pow_signed, alpha_real};
use fibpow_core::real::Real;
use fibpow_core::search::{enumerate, instance_of};

#[test]
fn representation_forms_certify_for_small_y() {
    // every applicable A-form holds for 2 <= y <= 2000 (the acceptance suite
    // extends this to 10^4)
    for y in 2i64..=2000 {
        let inst = InstanceAB::from_y(BigInt::from(y)).unwrap();
        for f in basic_forms(&inst, 128) {
            assert!(
                f.verdict == Verdict::Certified || f.verdict == Verdict::NotApplicable,
                "y={y} form {} verdict {:?}",
                f.tag,
                f.verdict
            );
        }
    }
}

#[test]
fn alpha_power_sums_stay_below_three() {
    // for strictly decreasing indices, sum phi^-n_i < 3 and
    // |sum beta^n_i| < 3, certified
    let p = 96;
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1b0);
    let three = Real::from_i64(3);
    let alpha = alpha_real(p);
    let beta = Real::one().sub(&alpha, p);
    for _ in 0..1000 {
        let len = rng.gen_range(1usize..=8);
        let mut indices = Vec::new();
        let mut next = rng.gen_range(0u64..6);
        for _ in 0..len {
            indices.push(next);
            next += rng.gen_range(1u64..7);
        }
        // sum phi^-n_i via exact ring elements, embedded once
        let mut acc = fibpow_core::quad::QuadInt::zero();
        for &i in &indices {
            acc = &acc + &alpha_pow_signed(-(i as i64));
        }
        let alpha_sum = acc.embed(p);
        assert!(alpha_sum.lt_certain(&three), "phi sum for {indices:?}");
        // |sum beta^n_i| via ball powers
        let mut bsum = Real::zero();
        for &i in &indices {
            bsum = bsum.add(&beta.powi(i as i64, p).unwrap(), p);
        }
        assert!(bsum.abs().lt_certain(&three), "beta sum for {indices:?}");
    }
}

#[test]
fn enumerated_solutions_satisfy_size_bounds() {
    // reduced-shape solutions have n_1 < n and a < n
    for sol in enumerate(60) {
        if sol.y < BigInt::from(2) {
            continue;
        }
        let inst = instance_of(&sol).unwrap();
        if let Some(claim) = inst.power() {
            assert!(
                inst.rep().largest() < claim.n,
                "n_1 >= n at ({}, {})",
                sol.n,
                sol.m
            );
            assert!((claim.a as u64) < claim.n, "a >= n at ({}, {})", sol.n, sol.m);
        }
    }
}

#[test]
fn log_y_below_largest_index() {
    // y < 2 F_{n_1} < phi^{n_1} forces log y < n_1; certify it broadly
    let p = 96;
    for y in 2i64..=5000 {
        let inst = InstanceAB::from_y(BigInt::from(y)).unwrap();
        let n1 = inst.rep().largest();
        let ln_y = fibpow_core::real::log_int(&BigInt::from(y), p).unwrap();
        assert!(
            ln_y.lt_certain(&Real::from_i64(n1 as i64)),
            "log y >= n_1 at y={y}"
        );
    }
}

#[test]
fn odd_parity_instance_gets_valuation_certificate() {
    // F_16 + F_7 = 1000 = 10^3 has n - m = 9 odd: the eliminated forms with
    // the eta4 logarithm carry the full valuation certificate
    use fibpow_core::linform::{verify_nonzero, FormTag};
    use fibpow_core::quad::NonvanishingOutcome;
    let sols = enumerate(16);
    let sol = sols.iter().find(|s| s.n == 16 && s.m == 7).unwrap();
    let inst = instance_of(sol).unwrap();
    assert!(inst.power().is_some());
    let ev = verify_nonzero(&inst, FormTag::BStar(1), 128).unwrap();
    assert!(matches!(ev.outcome, NonvanishingOutcome::Certificate(c) if c.exponent == 3));
    assert!(ev.numeric_witness.is_some());
}

#[test]
fn coefficient_bound_justifies_b_equals_n_squared() {
    for sol in enumerate(60) {
        if sol.y < BigInt::from(2) {
            continue;
        }
        let inst = instance_of(&sol).unwrap();
        if inst.power().is_some() {
            let n = inst.power().unwrap().n;
            let max = max_star_coefficient(&inst).unwrap();
            assert!(
                max <= BigInt::from(n) * BigInt::from(n),
                "coefficient exceeds n^2 at ({}, {})",
                sol.n,
                sol.m
            );
        }
    }
}
