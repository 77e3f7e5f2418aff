//! Exact arithmetic in `Z[phi]`, the ring of integers of `Q(sqrt 5)`, with
//! `phi = (1 + sqrt 5)/2`: powers of `phi`, conjugation, norms, the
//! `sqrt(5)`-adic valuation, and the height bounds fed to Matveev's theorem.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::fib::fib;
use crate::real::{Real, RealError};

/// `a + b*phi` with exact integer coordinates in the basis `{1, phi}`.
///
/// The ring law uses `phi^2 = phi + 1`; conjugation sends `phi` to
/// `1 - phi = -1/phi`.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·φ", self.a, self.b)
    }
}

impl QuadInt {
    pub fn new(a: BigInt, b: BigInt) -> Self {
        QuadInt { a, b }
    }

    pub fn from_i64(v: i64) -> Self {
        QuadInt::new(BigInt::from(v), BigInt::zero())
    }

    pub fn zero() -> Self {
        QuadInt::from_i64(0)
    }

    pub fn one() -> Self {
        QuadInt::from_i64(1)
    }

    /// The fundamental unit `phi`.
    pub fn alpha() -> Self {
        QuadInt::new(BigInt::zero(), BigInt::from(1))
    }

    /// `sqrt 5 = 2*phi - 1`, a generator of the ramified prime above 5.
    pub fn sqrt5() -> Self {
        QuadInt::new(BigInt::from(-1), BigInt::from(2))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate: `a + b*phi  ->  (a + b) - b*phi`.
    pub fn conjugate(&self) -> Self {
        QuadInt::new(&self.a + &self.b, -&self.b)
    }

    /// Field norm `z * conj(z) = a^2 + ab - b^2` as a rational integer.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    /// Enclosure of the real embedding `a + b*(1+sqrt5)/2`.
    pub fn embed(&self, p: u32) -> Real {
        let alpha = alpha_real(p + 8);
        Real::from_bigint(&self.a).add(&alpha.mul_int(&self.b, p + 8), p)
    }

    /// Enclosure of `log` of the real embedding (must be positive).
    pub fn log(&self, p: u32) -> Result<Real, RealError> {
        self.embed(p + 8).ln(p)
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        QuadInt::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        QuadInt::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(-&self.a, -&self.b)
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        // (a1 + b1 φ)(a2 + b2 φ) = (a1 a2 + b1 b2) + (a1 b2 + a2 b1 + b1 b2) φ
        let bb = &self.b * &rhs.b;
        QuadInt::new(
            &self.a * &rhs.a + &bb,
            &self.a * &rhs.b + &rhs.a * &self.b + &bb,
        )
    }
}

/// `phi^x` for `x >= 0`, exactly: `phi^x = F_{x-1} + F_x * phi` for `x >= 1`.
pub fn alpha_pow(x: u64) -> QuadInt {
    if x == 0 {
        return QuadInt::one();
    }
    let (f_prev, f) = crate::fib::fib_pair(x - 1);
    QuadInt::new(BigInt::from(f_prev), BigInt::from(f))
}

/// `phi^x` for any integer `x`; `phi` is a unit, with
/// `phi^{-n} = (-1)^n (F_{n+1} - F_n phi)`.
pub fn alpha_pow_signed(x: i64) -> QuadInt {
    if x >= 0 {
        return alpha_pow(x as u64);
    }
    let n = x.unsigned_abs();
    let v = QuadInt::new(fib(n + 1), -fib(n));
    if n.is_multiple_of(2) {
        v
    } else {
        -&v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadError {
    /// The `sqrt(5)`-adic valuation of zero is undefined.
    ZeroValuation,
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::ZeroValuation => write!(f, "valuation of zero is undefined"),
        }
    }
}

/// `sqrt(5)`-adic valuation, normalized by `v(sqrt 5) = 1`: the largest `e`
/// such that `(sqrt 5)^e` divides `z` in `Z[phi]`.
///
/// Uses `1/sqrt5 = (2 phi - 1)/5`: divide by `sqrt 5` while both coordinates
/// of `z * (2 phi - 1)` are divisible by 5.
pub fn v_sqrt5(z: &QuadInt) -> Result<u64, QuadError> {
    if z.is_zero() {
        return Err(QuadError::ZeroValuation);
    }
    let five = BigInt::from(5);
    let s5 = QuadInt::sqrt5();
    let mut cur = z.clone();
    let mut e = 0u64;
    loop {
        let w = &cur * &s5;
        if (&w.a % &five).is_zero() && (&w.b % &five).is_zero() {
            cur = QuadInt::new(&w.a / &five, &w.b / &five);
            e += 1;
        } else {
            return Ok(e);
        }
    }
}

/// Parity of `n - m` in the power equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(v: u64) -> Parity {
        if v.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Evidence that an eliminated linear form cannot vanish.
///
/// The form contains `(a-1) log sqrt5`, and the only logarithm argument that
/// `sqrt 5` may divide carries the coefficient `-a`; full cancellation would
/// need `(a-1) - a*v = 0`, impossible since `(a-1) mod a != 0` for `a >= 2`.
/// When the form contains `phi^{n-m} + 1` this needs `n - m` odd (otherwise
/// `sqrt 5` may divide it, and the even-parity case is closed separately by
/// the Luca–Patel theorem).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationCertificate {
    /// Step index the certificate was issued for.
    pub step: u64,
    /// The exponent `a` of the instance.
    pub exponent: u32,
    /// `(a - 1) mod a`, recorded to be nonzero.
    pub residue: u32,
    /// Parity of `n - m` when the form contains `phi^{n-m} + 1`.
    pub eta4_parity: Option<Parity>,
}

/// Outcome of the nonvanishing check for an eliminated form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonvanishingOutcome {
    /// The valuation argument applies; the form is nonzero.
    Certificate(ValuationCertificate),
    /// `n ≡ m (mod 2)`: the instance falls to the parity theorem (`n <= 36`)
    /// instead of the valuation argument.
    ParityException,
}

/// Nonvanishing certificate for the eliminated form at step `ell` with
/// exponent `a >= 2`. `eta4_parity` is `None` when the form does not contain
/// the logarithm of `phi^{n-m} + 1`.
pub fn nonvanishing_certificate(
    ell: u64,
    a: u32,
    eta4_parity: Option<Parity>,
) -> NonvanishingOutcome {
    assert!(a >= 2, "the power exponent must be at least 2");
    if eta4_parity == Some(Parity::Even) {
        return NonvanishingOutcome::ParityException;
    }
    NonvanishingOutcome::Certificate(ValuationCertificate {
        step: ell,
        exponent: a,
        residue: (a - 1) % a,
        eta4_parity,
    })
}

/// A certified upper bound for an absolute logarithmic height, in natural-log
/// units. Matveev's theorem only needs upper bounds, so these stay exact
/// rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightBound {
    pub value: BigRational,
}

impl HeightBound {
    pub fn new(value: BigRational) -> Self {
        assert!(!value.is_negative(), "height bounds are nonnegative");
        HeightBound { value }
    }

    /// The Matveev parameter `A >= D * h` for field degree `degree`.
    pub fn matveev_param(&self, degree: u32) -> BigRational {
        &self.value * BigRational::from_integer(BigInt::from(degree))
    }
}

/// Height bound for `1 + phi^{n_2-n_1} + ... + phi^{n_k-n_1}`:
/// `h <= (k-1)(n_1-n_k) log(phi)/2 + log k <= k * T_k` for any `T_k >= n_1 - n_k`,
/// `T_k >= 1`. The associated Matveev parameter is `A_3 = 2 k T_k`.
pub fn height_bound_eta3(k: u64, t_k: &BigRational) -> HeightBound {
    assert!(k >= 1);
    HeightBound::new(t_k * BigRational::from_integer(BigInt::from(k)))
}

/// Height bound for `phi^{n-m} + 1`: `h <= (n-m) log(phi)/2 + log 2 <= S`
/// for any admissible `S`. The associated Matveev parameter is `A_4 = 2 S`.
pub fn height_bound_eta4(s: &BigRational) -> HeightBound {
    HeightBound::new(s.clone())
}

/// Enclosure of `sqrt 5`.
pub fn sqrt5_real(p: u32) -> Real {
    Real::from_i64(5).sqrt(p).expect("sqrt(5) is well-defined")
}

/// Enclosure of `phi = (1 + sqrt 5)/2`.
pub fn alpha_real(p: u32) -> Real {
    sqrt5_real(p + 4).add(&Real::one(), p + 4).half()
}

/// Enclosure of `log phi`.
pub fn log_alpha(p: u32) -> Real {
    alpha_real(p + 8).ln(p).expect("phi > 1")
}

/// Enclosure of `log sqrt 5 = (log 5)/2`.
pub fn log_sqrt5(p: u32) -> Real {
    crate::real::log_int(&BigInt::from(5), p + 1)
        .expect("5 > 0")
        .half()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fib::lucas;

    #[test]
    fn defining_relation() {
        let alpha = QuadInt::alpha();
        let sq = &alpha * &alpha;
        assert_eq!(sq, QuadInt::new(BigInt::from(1), BigInt::from(1)));
        assert_eq!(alpha_pow(1), alpha);
        assert_eq!(alpha_pow(2), sq);
        assert_eq!(
            alpha_pow(10),
            QuadInt::new(BigInt::from(34), BigInt::from(55))
        );
    }

    #[test]
    fn negative_powers_are_inverses() {
        for x in 1..=40i64 {
            let prod = &alpha_pow_signed(x) * &alpha_pow_signed(-x);
            assert_eq!(prod, QuadInt::one(), "x={x}");
        }
        // phi^{-1} = phi - 1
        assert_eq!(
            alpha_pow_signed(-1),
            QuadInt::new(BigInt::from(-1), BigInt::from(1))
        );
    }

    #[test]
    fn norms() {
        assert_eq!(QuadInt::one().norm(), BigInt::from(1));
        assert_eq!(QuadInt::alpha().norm(), BigInt::from(-1));
        assert_eq!(QuadInt::sqrt5().norm(), BigInt::from(-5));
        // norm(phi^x + 1) = (-1)^x + L_x + 1, which is L_x for odd x
        let z3 = &alpha_pow(3) + &QuadInt::one();
        assert_eq!(z3.norm(), BigInt::from(4));
        assert_eq!(z3.norm(), lucas(3));
        let z7 = &alpha_pow(7) + &QuadInt::one();
        assert_eq!(z7.norm(), BigInt::from(29));
        assert_eq!(z7.norm(), lucas(7));
        let z4 = &alpha_pow(4) + &QuadInt::one();
        assert_eq!(z4.norm(), lucas(4) + 2);
    }

    #[test]
    fn valuations() {
        assert_eq!(v_sqrt5(&QuadInt::sqrt5()).unwrap(), 1);
        assert_eq!(v_sqrt5(&QuadInt::alpha()).unwrap(), 0);
        assert_eq!(v_sqrt5(&QuadInt::from_i64(5)).unwrap(), 2);
        assert_eq!(v_sqrt5(&QuadInt::from_i64(25)).unwrap(), 4);
        assert_eq!(v_sqrt5(&QuadInt::from_i64(7)).unwrap(), 0);
        assert_eq!(v_sqrt5(&QuadInt::zero()), Err(QuadError::ZeroValuation));
        // additivity spot check
        let z = &QuadInt::sqrt5() * &alpha_pow(5);
        assert_eq!(v_sqrt5(&z).unwrap(), 1);
    }

    #[test]
    fn nonvanishing_outcomes() {
        assert!(matches!(
            nonvanishing_certificate(1, 2, Some(Parity::Odd)),
            NonvanishingOutcome::Certificate(c) if c.residue == 1
        ));
        assert_eq!(
            nonvanishing_certificate(3, 5, Some(Parity::Even)),
            NonvanishingOutcome::ParityException
        );
        assert!(matches!(
            nonvanishing_certificate(7, 2, None),
            NonvanishingOutcome::Certificate(_)
        ));
    }

    #[test]
    fn height_bound_values() {
        let one = BigRational::from_integer(BigInt::from(1));
        assert_eq!(height_bound_eta3(1, &one).value, one);
        let ten = BigRational::from_integer(BigInt::from(10));
        assert_eq!(
            height_bound_eta3(5, &ten).value,
            BigRational::from_integer(BigInt::from(50))
        );
        let s = BigRational::from_integer(BigInt::from(24));
        assert_eq!(height_bound_eta4(&s).value, s);
        assert_eq!(
            height_bound_eta4(&s).matveev_param(2),
            BigRational::from_integer(BigInt::from(48))
        );
    }

    #[test]
    fn embeddings() {
        let p = 128;
        let alpha = QuadInt::alpha().embed(p);
        // phi = 1.618033988749894848204586834...
        let mid = alpha.mid().to_rational();
        let phi_approx = BigRational::new(BigInt::from(16180339887498948482i128), BigInt::from(10000000000000000000i128));
        let tol = BigRational::new(BigInt::from(1), BigInt::from(10u64).pow(18));
        assert!((mid - phi_approx).abs() < tol);
        // log phi = 0.48121182505960344749...
        let la = QuadInt::alpha().log(p).unwrap();
        assert!(la.is_positive_certain());
        let want = BigRational::new(
            BigInt::from(4812118250596034474i64),
            BigInt::from(10u64.pow(19)),
        );
        let tol = BigRational::new(BigInt::from(1), BigInt::from(10u64.pow(17)));
        assert!((la.mid().to_rational() - want).abs() < tol);
    }
}
