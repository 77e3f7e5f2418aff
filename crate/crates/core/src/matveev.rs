//! Matveev's explicit lower bound for linear forms in logarithms, and the
//! uniform step constant `2.1e15` used by the bound pipeline.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::real::Real;

/// Parameters for the lower bound on
/// `|b_1 log eta_1 + ... + b_t log eta_t|`.
///
/// The `heights` entries are exact rational upper bounds
/// `A_i >= max(D h(eta_i), |log eta_i|, 0.16)`; `coeff_bound` is an exact
/// rational `B >= max |b_i|`.
#[derive(Clone, Debug)]
pub struct MatveevParams {
    pub t: u32,
    pub degree: u32,
    pub coeff_bound: BigRational,
    pub heights: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatveevError {
    /// `t = 0` has no linear form.
    NoLogarithms,
    /// The field degree must be at least 1.
    BadDegree,
    /// Some `A_i` is below the floor `0.16`.
    HeightBelowFloor,
    /// `B` must be at least 1 (the coefficients are nonzero integers).
    CoeffBoundBelowOne,
    /// `heights` must have exactly `t` entries.
    HeightCountMismatch,
}

impl fmt::Display for MatveevError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatveevError::NoLogarithms => write!(f, "t must be at least 1"),
            MatveevError::BadDegree => write!(f, "degree must be at least 1"),
            MatveevError::HeightBelowFloor => write!(f, "every A_i must be at least 0.16"),
            MatveevError::CoeffBoundBelowOne => write!(f, "B must be at least 1"),
            MatveevError::HeightCountMismatch => write!(f, "need exactly t height parameters"),
        }
    }
}

impl MatveevParams {
    pub fn new(
        t: u32,
        degree: u32,
        coeff_bound: BigRational,
        heights: Vec<BigRational>,
    ) -> Result<Self, MatveevError> {
        if t == 0 {
            return Err(MatveevError::NoLogarithms);
        }
        if degree == 0 {
            return Err(MatveevError::BadDegree);
        }
        if heights.len() != t as usize {
            return Err(MatveevError::HeightCountMismatch);
        }
        let floor = BigRational::new(BigInt::from(4), BigInt::from(25));
        if heights.iter().any(|a| *a < floor) {
            return Err(MatveevError::HeightBelowFloor);
        }
        if coeff_bound < BigRational::one() {
            return Err(MatveevError::CoeffBoundBelowOne);
        }
        Ok(MatveevParams {
            t,
            degree,
            coeff_bound,
            heights,
        })
    }
}

/// Certified enclosure of
/// `-1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) A_1 ... A_t`.
///
/// The caller must pair this with a nonvanishing certificate before reading
/// it as a lower bound for `log |Lambda|`.
pub fn matveev_lower(params: &MatveevParams, p: u32) -> Real {
    let pw = p + 16;
    let t = params.t;
    // 1.4 * 30^(t+3), exact rational
    let coeff = BigRational::new(
        BigInt::from(7) * BigInt::from(30).pow(t + 3),
        BigInt::from(5),
    );
    let mut prod = Real::from_ratio(&coeff, pw);
    // t^4.5 = t^4 * sqrt(t)
    let t_real = Real::from_i64(t as i64);
    let t45 = t_real
        .powi(4, pw)
        .expect("integer power")
        .mul(&t_real.sqrt(pw).expect("t >= 1"), pw);
    prod = prod.mul(&t45, pw);
    // D^2 (1 + log D)
    let d = Real::from_i64(params.degree as i64);
    prod = prod.mul(&d.powi(2, pw).expect("integer power"), pw);
    let log_d = d.ln(pw).expect("D >= 1");
    prod = prod.mul(&log_d.add(&Real::one(), pw), pw);
    // (1 + log B)
    let log_b = crate::real::log_ratio(&params.coeff_bound, pw).expect("B >= 1");
    prod = prod.mul(&log_b.add(&Real::one(), pw), pw);
    for a in &params.heights {
        prod = prod.mul(&Real::from_ratio(a, pw), pw);
    }
    prod.neg()
}

/// The uniform step constant `C = 2.1e15`.
pub fn step_constant_value() -> BigInt {
    BigInt::from(2_100_000_000_000_000u64)
}

/// Certificate that the displayed product
/// `1.4 * 30^7 * 4^4.5 * 2^2 (1 + log 2) * 3 * log 5 * 2 * 2`
/// is at most the candidate constant.
#[derive(Clone, Debug)]
pub struct StepConstantCertificate {
    /// Enclosure of the product (midpoint near `2.05e15`).
    pub product: Real,
    /// The candidate that was checked.
    pub candidate: BigRational,
    /// Whether `product <= candidate` was certified.
    pub holds: bool,
}

/// Certify the step-constant inequality against an arbitrary candidate
/// (used for fault injection in the verification suite).
pub fn certify_step_constant(candidate: &BigRational, p: u32) -> StepConstantCertificate {
    let pw = p + 8;
    // 1.4 * 30^7 * 4^4.5 * 4 = 1.4 * 30^7 * 512 * 4, exact
    let exact_part = BigRational::new(
        BigInt::from(7) * BigInt::from(30).pow(7u32) * BigInt::from(2048),
        BigInt::from(5),
    );
    let mut prod = Real::from_ratio(&exact_part, pw);
    let ln2 = crate::real::ln2(pw);
    prod = prod.mul(&ln2.add(&Real::one(), pw), pw);
    prod = prod.mul(&Real::from_i64(3), pw);
    let ln5 = crate::real::log_int(&BigInt::from(5), pw).expect("5 > 0");
    prod = prod.mul(&ln5, pw);
    prod = prod.mul(&Real::from_i64(4), pw);
    let holds = prod.le_certain(&Real::from_ratio(candidate, pw));
    StepConstantCertificate {
        product: prod,
        candidate: candidate.clone(),
        holds,
    }
}

/// The certified step constant `C = 2.1e15`.
///
/// Panics if the defining inequality fails to certify at 128 bits, which
/// would mean the constant itself is wrong.
pub fn step_constant() -> (BigInt, StepConstantCertificate) {
    let value = step_constant_value();
    let cert = certify_step_constant(&BigRational::from_integer(value.clone()), 128);
    assert!(
        cert.holds,
        "step constant certificate failed: the product exceeds 2.1e15"
    );
    (value, cert)
}
