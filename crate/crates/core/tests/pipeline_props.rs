//! End-to-end properties of the bound pipeline: the frozen k = 1 regression
//! value, monotonicity in k, soundness of the fixed point, the closed-form
//! solver's implication property, and the instantiation of Matveev's bound
//! that defines the step constant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fibpow_core::matveev::{matveev_lower, step_constant_value, MatveevParams};
use fibpow_core::pipeline::{
    closed_form_bound, closed_form_log_bound, finish, finish_rhs, rhs_at_most, FinishMethod,
    PathLabel,
};
use fibpow_core::quad::{log_alpha, log_sqrt5};
use fibpow_core::real::{log_int, Real};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn weight_one_bound_regression() {
    // frozen by an independent high-precision fixed-point computation:
    // the least certified N has 174 digits and begins 1449561165340335
    let fb = finish(1, FinishMethod::Iteration, None, 192, 1 << 14).unwrap();
    assert_eq!(fb.dominant_path, PathLabel::Crossover(1));
    assert_eq!(fb.final_exponent, 8);
    let s = fb.n_bound.to_string();
    assert_eq!(s.len(), 174);
    assert!(s.starts_with("1449561165340335"), "got {}", &s[..20]);
    // log10 lies in the expected band
    let l10 = log_int(&fb.n_bound, 128)
        .unwrap()
        .div(&log_int(&BigInt::from(10), 128).unwrap(), 128)
        .unwrap()
        .to_f64();
    assert!((170.0..=176.0).contains(&l10), "log10 = {l10}");
    assert!((l10 - 173.1612365).abs() < 1e-5);
    // minimality: N - 1 still satisfies the inequality
    let prev = &fb.n_bound - BigInt::one();
    assert_eq!(
        rhs_at_most(&fb.final_coeff, fb.final_exponent, &prev, 192, 1 << 14),
        Some(false)
    );
}

#[test]
fn closed_form_dominates_iteration_at_weight_one() {
    let it = finish(1, FinishMethod::Iteration, None, 160, 1 << 14).unwrap();
    let cf = finish(
        1,
        FinishMethod::ClosedForm,
        Some(&ratio(1, 2)),
        160,
        1 << 14,
    )
    .unwrap();
    assert!(cf.n_bound >= it.n_bound);
    // delta = 1/2 puts the exp-exp branch on top: ~e^8103, 3520 digits
    assert_eq!(cf.n_bound.to_string().len(), 3520);
}

#[test]
fn bounds_grow_with_weight() {
    let mut last = BigInt::one();
    for k in 1..=7u64 {
        let fb = finish(k, FinishMethod::Iteration, None, 160, 1 << 14).unwrap();
        assert!(fb.n_bound > last, "bound shrank at k={k}");
        assert!(fb.log_ya_bound.is_positive_certain());
        last = fb.n_bound;
    }
}

#[test]
fn fixed_point_is_sound() {
    // beyond the returned bound the inequality must fail, sampled on a
    // geometric grid of larger integers
    for k in 1..=4u64 {
        let fb = finish(k, FinishMethod::Iteration, None, 160, 1 << 14).unwrap();
        let mut n = &fb.n_bound + BigInt::one();
        for _ in 0..12 {
            assert_eq!(
                rhs_at_most(&fb.final_coeff, fb.final_exponent, &n, 160, 1 << 14),
                Some(true),
                "inequality survived past the bound at k={k}"
            );
            n = &n * BigInt::from(1000);
        }
    }
}

#[test]
fn closed_form_branch_values() {
    // c = 1, x = 1, delta = 1: branches are exp(exp(4)) ~ 5.14e23, 0, 4
    let one = BigRational::one();
    let v = closed_form_bound(&one, &one, &one, 128).unwrap();
    let lv = v.ln(128).unwrap();
    // log of the max is exp(4) = 54.598150...
    let e4 = Real::from_i64(4).exp(160).unwrap();
    assert!(lv.overlaps(&e4));
    // delta -> large: the exp-exp branch tends to exp(exp(1)) ~ 15.15 and
    // stays bounded (the overall max is then carried by the third branch)
    let big_delta = ratio(1_000_000, 1);
    let lb = closed_form_log_bound(&one, &one, &big_delta, 128).unwrap();
    // bound's log = (1 + delta) * 1 * log 2 ~ 693147.87
    assert!(lb.to_f64() > 600_000.0);
}

#[test]
fn closed_form_implication_example() {
    // c = 10^6, x = 3, delta = 1/2: every n <= 10^9 satisfies the premise
    // n <= c (log n)^3, and the closed-form bound exceeds 10^9
    let c = ratio(1_000_000, 1);
    let x = ratio(3, 1);
    let d = ratio(1, 2);
    let bound = closed_form_bound(&c, &x, &d, 128).unwrap();
    assert!(Real::from_ratio(&ratio(1_000_000_000, 1), 64).le_certain(&bound));
    // premise sanity at the edge
    let n = BigInt::from(1_000_000_000u64);
    let rhs = finish_rhs(&c, 3, &n, 96);
    assert!(Real::from_bigint(&n).le_certain(&rhs));
}

#[test]
fn closed_form_implication_random() {
    // sampled implication property: n <= c (log n)^x implies n below the
    // closed-form bound, compared in the log domain so tiny delta works too
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0b);
    for trial in 0..400 {
        let c = ratio(rng.gen_range(1i64..=1_000_000_000_000), 1);
        let x = ratio(rng.gen_range(1i64..=50), 1);
        let d = ratio(rng.gen_range(1i64..=999), 1000);
        let log_bound = closed_form_log_bound(&c, &x, &d, 96).unwrap();
        let x_int = num_traits::ToPrimitive::to_u32(&x.to_integer()).unwrap();
        for _ in 0..4 {
            let n = BigInt::from(rng.gen_range(2u64..=1_000_000_000));
            let premise = {
                let rhs = finish_rhs(&c, x_int, &n, 96);
                Real::from_bigint(&n).le_certain(&rhs)
            };
            if premise {
                let ln_n = log_int(&n, 96).unwrap();
                assert!(
                    ln_n.le_certain(&log_bound),
                    "implication fails: trial {trial}, n={n}, c={c}, x={x}, d={d}"
                );
            }
        }
    }
}

#[test]
fn matveev_instantiation_matches_step_constant() {
    // with t=4, D=2, B=n^2, A = (log5, log phi, 2kT, 2S), the general bound
    // stays above -C log n log phi k T S on a grid (using 1+log n^2 <= 3 log n)
    let p = 160;
    let a1 = log_int(&BigInt::from(5), p).unwrap().upper(p).to_rational();
    let a2 = log_alpha(p).upper(p).to_rational();
    let c = step_constant_value();
    for n in [10u64, 100, 10_000, 1_000_000] {
        for k in 1..=8u64 {
            for t_k in [1u64, 10, 1000] {
                for s in [1u64, 10, 1000] {
                    let b = BigRational::from_integer(BigInt::from(n) * BigInt::from(n));
                    let a3 = BigRational::from_integer(BigInt::from(2 * k * t_k));
                    let a4 = BigRational::from_integer(BigInt::from(2 * s));
                    let params =
                        MatveevParams::new(4, 2, b, vec![a1.clone(), a2.clone(), a3, a4]).unwrap();
                    let lower = matveev_lower(&params, p);
                    // rhs = -C log n log phi k T S
                    let rhs = log_int(&BigInt::from(n), p)
                        .unwrap()
                        .mul(&log_alpha(p), p)
                        .mul_int(&(&c * BigInt::from(k) * BigInt::from(t_k) * BigInt::from(s)), p)
                        .neg();
                    assert!(
                        rhs.le_certain(&lower),
                        "instantiation fails at n={n}, k={k}, T={t_k}, S={s}"
                    );
                }
            }
        }
    }
}

#[test]
fn matveev_example_instance() {
    // t=4, D=2, B=36^2, A=(log5, log phi, 10, 2): the enclosure matches a
    // direct product recomputation at higher precision
    let p = 256;
    let a1 = log_int(&BigInt::from(5), p).unwrap().upper(p).to_rational();
    let a2 = log_alpha(p).upper(p).to_rational();
    let b = BigRational::from_integer(BigInt::from(1296));
    let params = MatveevParams::new(
        4,
        2,
        b.clone(),
        vec![a1.clone(), a2.clone(), ratio(10, 1), ratio(2, 1)],
    )
    .unwrap();
    let got = matveev_lower(&params, p);
    // oracle: -1.4 * 30^7 * 4^4.5 * 4 (1+log2)(1+log1296) A1 A2 * 10 * 2
    let oracle = {
        let c0 = BigRational::new(BigInt::from(7) * BigInt::from(30).pow(7u32), BigInt::from(5));
        let t45 = Real::from_i64(4)
            .powi(4, p)
            .unwrap()
            .mul(&Real::from_i64(4).sqrt(p).unwrap(), p);
        let ln2 = fibpow_core::real::ln2(p);
        let ln_b = log_int(&BigInt::from(1296), p).unwrap();
        Real::from_ratio(&c0, p)
            .mul(&t45, p)
            .mul(&Real::from_i64(4), p)
            .mul(&ln2.add(&Real::one(), p), p)
            .mul(&ln_b.add(&Real::one(), p), p)
            .mul(&Real::from_ratio(&a1, p), p)
            .mul(&Real::from_ratio(&a2, p), p)
            .mul(&Real::from_i64(20), p)
            .neg()
    };
    assert!(got.overlaps(&oracle));
    // the magnitude is about 1.343e16
    let mag = got.to_f64().abs();
    assert!((mag - 1.3430944875066205e16).abs() < 1e6, "magnitude {mag}");
    // nonvanishing companion: the parity certificate machinery exists
    assert!((log_sqrt5(64).to_f64() - 0.8047189562170502).abs() < 1e-14);
}
