//! The linear forms in logarithms attached to a concrete instance of
//! `y = F_{n_1} + ... + F_{n_k}` (and optionally `y^a = F_n + F_m`), with
//! certified evaluation against their printed upper bounds.
//!
//! Forms are always evaluated as exact-integer-coefficient combinations of
//! the logarithms `log y`, `log sqrt5`, `log phi`, `log eta3`, `log eta4`,
//! never as differences of huge powers, so cancellation is controlled by
//! interval width alone.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::quad::{self, alpha_pow_signed, NonvanishingOutcome, Parity, QuadInt};
use crate::real::Real;
use crate::zeck::{zeckendorf, ZeckendorfRep};

/// The power side `y^a = F_n + F_m` of an instance, in reduced shape
/// (`a >= 2`, `n - 2 >= m >= 2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerClaim {
    pub a: u32,
    pub n: u64,
    pub m: u64,
}

/// A concrete instance of the two defining equations. The representation
/// side always holds exactly; the power side is optional.
#[derive(Clone, Debug)]
pub struct InstanceAB {
    y: BigInt,
    rep: ZeckendorfRep,
    power: Option<PowerClaim>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    /// `y` must be positive.
    NonPositive,
    /// The representation does not decode to `y`.
    SumMismatch,
    /// `y^a != F_n + F_m`.
    PowerMismatch,
    /// The power side needs `a >= 2`.
    BadExponent,
    /// The power side needs `n - 2 >= m >= 2`.
    BadShape,
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::NonPositive => write!(f, "y must be positive"),
            InstanceError::SumMismatch => write!(f, "indices do not sum to y"),
            InstanceError::PowerMismatch => write!(f, "y^a != F_n + F_m"),
            InstanceError::BadExponent => write!(f, "need a >= 2"),
            InstanceError::BadShape => write!(f, "need n - 2 >= m >= 2"),
        }
    }
}

impl InstanceAB {
    pub fn new(
        y: BigInt,
        rep: ZeckendorfRep,
        power: Option<PowerClaim>,
    ) -> Result<Self, InstanceError> {
        if !y.is_positive() {
            return Err(InstanceError::NonPositive);
        }
        if rep.decode() != y {
            return Err(InstanceError::SumMismatch);
        }
        if let Some(claim) = &power {
            if claim.a < 2 {
                return Err(InstanceError::BadExponent);
            }
            if !(claim.m >= 2 && claim.n >= claim.m + 2) {
                return Err(InstanceError::BadShape);
            }
            let lhs = y.pow(claim.a);
            let rhs = crate::fib::fib(claim.n) + crate::fib::fib(claim.m);
            if lhs != rhs {
                return Err(InstanceError::PowerMismatch);
            }
        }
        Ok(InstanceAB { y, rep, power })
    }

    /// Instance from `y` alone (representation side only).
    pub fn from_y(y: BigInt) -> Result<Self, InstanceError> {
        let rep = zeckendorf(&y).map_err(|_| InstanceError::NonPositive)?;
        InstanceAB::new(y, rep, None)
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn rep(&self) -> &ZeckendorfRep {
        &self.rep
    }

    pub fn power(&self) -> Option<&PowerClaim> {
        self.power.as_ref()
    }

    pub fn k(&self) -> usize {
        self.rep.weight()
    }
}

/// Names of the linear forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormTag {
    /// `A(l)`: from the representation equation, largest `l` powers shifted.
    A(u32),
    /// From the power equation, largest power shifted.
    B1,
    /// From the power equation, both powers shifted.
    B2,
    /// `a*A(l) - B1`: the unknown logarithm eliminated.
    AStar(u32),
    /// `a*A(l) - B2`.
    BStar(u32),
}

impl fmt::Display for FormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormTag::A(l) => write!(f, "A{l}"),
            FormTag::B1 => write!(f, "B1"),
            FormTag::B2 => write!(f, "B2"),
            FormTag::AStar(l) => write!(f, "A*{l}"),
            FormTag::BStar(l) => write!(f, "B*{l}"),
        }
    }
}

/// Certification status of one form at one precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `|value| <= bound` certified.
    Certified,
    /// `|value| > bound` certified (would falsify the derivation).
    Violated,
    /// Enclosures did not separate at the working precision.
    Undecided,
    /// `X < 6`: the printed bound is not claimed for this form.
    NotApplicable,
}

/// An evaluated linear form with its printed bound.
#[derive(Clone, Debug)]
pub struct LinearFormValue {
    pub tag: FormTag,
    /// Certified enclosure of the signed form value.
    pub value: Real,
    /// Enclosure of the bound `12 phi^-X` (basic) or `18 a phi^-X`
    /// (eliminated).
    pub claimed_bound: Real,
    /// The decay exponent `X`.
    pub exponent: u64,
    /// `X >= 6`: the derivation claims the bound only in this range.
    pub applicable: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormsError {
    /// The instance has no power claim but the requested forms need one.
    MissingPowerClaim,
    /// The tag does not exist for this instance (index out of range, or a
    /// basic tag passed to the nonvanishing check).
    InvalidTag,
}

impl fmt::Display for FormsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormsError::MissingPowerClaim => write!(f, "instance carries no power equation"),
            FormsError::InvalidTag => write!(f, "no such form for this instance"),
        }
    }
}

/// Shared logarithms for one instance at one precision.
struct LogContext {
    p: u32,
    log_alpha: Real,
    log_sqrt5: Real,
    log_y: Real,
}

impl LogContext {
    fn new(inst: &InstanceAB, p: u32) -> Self {
        LogContext {
            p,
            log_alpha: quad::log_alpha(p),
            log_sqrt5: quad::log_sqrt5(p),
            log_y: crate::real::log_int(inst.y(), p).expect("y >= 1"),
        }
    }

    /// `1 + phi^(n_2-n_1) + ... + phi^(n_l-n_1)` as an exact ring element.
    fn eta3(&self, rep: &ZeckendorfRep, ell: u32) -> QuadInt {
        let idx = rep.indices();
        let n1 = idx[0] as i64;
        let mut acc = QuadInt::one();
        for &ni in idx.iter().take(ell as usize).skip(1) {
            acc = &acc + &alpha_pow_signed(ni as i64 - n1);
        }
        acc
    }

    fn log_eta3(&self, rep: &ZeckendorfRep, ell: u32) -> Real {
        if ell <= 1 {
            return Real::zero();
        }
        self.eta3(rep, ell)
            .log(self.p)
            .expect("eta3 >= 1 under the real embedding")
    }

    /// `log(phi^(n-m) + 1)`.
    fn log_eta4(&self, claim: &PowerClaim) -> Real {
        let z = &quad::alpha_pow(claim.n - claim.m) + &QuadInt::one();
        z.log(self.p).expect("eta4 > 1")
    }

    /// `scale * phi^-x`.
    fn decay_bound(&self, scale: i64, x: u64) -> Real {
        let pow = quad::alpha_real(self.p)
            .powi(-(x as i64), self.p)
            .expect("phi > 0");
        pow.mul(&Real::from_i64(scale), self.p)
    }
}

fn judge(value: &Real, bound: &Real, applicable: bool) -> Verdict {
    if !applicable {
        return Verdict::NotApplicable;
    }
    let mag = value.abs();
    if mag.le_certain(bound) {
        Verdict::Certified
    } else if bound.lt_certain(&mag) {
        Verdict::Violated
    } else {
        Verdict::Undecided
    }
}

/// Decay exponent of the basic form `A(l)`: `n_1 - n_{l+1}` for `l < k`,
/// `n_1` for `l = k`.
fn basic_a_exponent(rep: &ZeckendorfRep, ell: u32) -> u64 {
    let idx = rep.indices();
    let k = idx.len();
    if (ell as usize) < k {
        idx[0] - idx[ell as usize]
    } else {
        idx[0]
    }
}

/// The basic forms `A1..Ak` (and `B1`, `B2` when the power side is present),
/// each with its decay bound, evaluated at precision `p`.
pub fn basic_forms(inst: &InstanceAB, p: u32) -> Vec<LinearFormValue> {
    let ctx = LogContext::new(inst, p);
    let rep = inst.rep();
    let idx = rep.indices();
    let k = idx.len() as u32;
    let n1 = BigInt::from(idx[0]);
    let mut out = Vec::new();
    for ell in 1..=k {
        // log y + log sqrt5 - n_1 log phi - log eta3(l)
        let mut v = ctx
            .log_y
            .add(&ctx.log_sqrt5, p)
            .sub(&ctx.log_alpha.mul_int(&n1, p), p);
        if ell >= 2 {
            v = v.sub(&ctx.log_eta3(rep, ell), p);
        }
        let x = basic_a_exponent(rep, ell);
        let applicable = x >= 6;
        let bound = ctx.decay_bound(12, x);
        let verdict = judge(&v, &bound, applicable);
        out.push(LinearFormValue {
            tag: FormTag::A(ell),
            value: v,
            claimed_bound: bound,
            exponent: x,
            applicable,
            verdict,
        });
    }
    if let Some(claim) = inst.power() {
        let a_big = BigInt::from(claim.a);
        // B1: a log y + log sqrt5 - n log phi
        let v1 = ctx
            .log_y
            .mul_int(&a_big, p)
            .add(&ctx.log_sqrt5, p)
            .sub(&ctx.log_alpha.mul_int(&BigInt::from(claim.n), p), p);
        let x1 = claim.n - claim.m;
        let b1 = ctx.decay_bound(12, x1);
        out.push(LinearFormValue {
            tag: FormTag::B1,
            verdict: judge(&v1, &b1, x1 >= 6),
            value: v1,
            claimed_bound: b1,
            exponent: x1,
            applicable: x1 >= 6,
        });
        // B2: a log y + log sqrt5 - m log phi - log(phi^(n-m) + 1)
        let v2 = ctx
            .log_y
            .mul_int(&a_big, p)
            .add(&ctx.log_sqrt5, p)
            .sub(&ctx.log_alpha.mul_int(&BigInt::from(claim.m), p), p)
            .sub(&ctx.log_eta4(claim), p);
        let x2 = claim.n;
        let b2 = ctx.decay_bound(12, x2);
        out.push(LinearFormValue {
            tag: FormTag::B2,
            verdict: judge(&v2, &b2, x2 >= 6),
            value: v2,
            claimed_bound: b2,
            exponent: x2,
            applicable: x2 >= 6,
        });
    }
    out
}

/// Integer coefficients of an eliminated form on the logarithm basis
/// `(log sqrt5, log phi, log eta3, log eta4)`.
pub fn star_coefficients(
    inst: &InstanceAB,
    tag: FormTag,
) -> Result<(BigInt, BigInt, BigInt, BigInt), FormsError> {
    let claim = inst.power().ok_or(FormsError::MissingPowerClaim)?;
    let k = inst.k() as u32;
    let n1 = BigInt::from(inst.rep().largest());
    let a = BigInt::from(claim.a);
    let a_minus_1 = &a - BigInt::one();
    match tag {
        FormTag::AStar(l) if 1 <= l && l <= k => Ok((
            a_minus_1,
            BigInt::from(claim.n) - &a * &n1,
            if l >= 2 { -&a } else { BigInt::from(0) },
            BigInt::from(0),
        )),
        FormTag::BStar(l) if 1 <= l && l <= k => Ok((
            a_minus_1,
            BigInt::from(claim.m) - &a * &n1,
            if l >= 2 { -&a } else { BigInt::from(0) },
            BigInt::one(),
        )),
        _ => Err(FormsError::InvalidTag),
    }
}

/// Decay exponent of an eliminated form.
fn star_exponent(inst: &InstanceAB, tag: FormTag) -> Option<u64> {
    let claim = inst.power()?;
    let rep = inst.rep();
    let k = inst.k() as u32;
    match tag {
        FormTag::AStar(l) if 1 <= l && l <= k => {
            Some(basic_a_exponent(rep, l).min(claim.n - claim.m))
        }
        FormTag::BStar(l) if 1 <= l && l <= k => Some(basic_a_exponent(rep, l)),
        _ => None,
    }
}

/// The eliminated forms `A*1..A*k, B*1..B*k` with bounds `18 a phi^-X`.
pub fn eliminated_forms(inst: &InstanceAB, p: u32) -> Result<Vec<LinearFormValue>, FormsError> {
    let claim = inst.power().ok_or(FormsError::MissingPowerClaim)?.clone();
    let ctx = LogContext::new(inst, p);
    let rep = inst.rep();
    let k = inst.k() as u32;
    let scale = 18 * claim.a as i64;
    let log_eta4 = ctx.log_eta4(&claim);
    let mut out = Vec::new();
    for star in [false, true] {
        for ell in 1..=k {
            let tag = if star {
                FormTag::BStar(ell)
            } else {
                FormTag::AStar(ell)
            };
            let (c5, ca, c3, c4) = star_coefficients(inst, tag).expect("valid tag");
            let mut v = ctx
                .log_sqrt5
                .mul_int(&c5, p)
                .add(&ctx.log_alpha.mul_int(&ca, p), p);
            if !c3.is_zero() {
                v = v.add(&ctx.log_eta3(rep, ell).mul_int(&c3, p), p);
            }
            if !c4.is_zero() {
                v = v.add(&log_eta4.mul_int(&c4, p), p);
            }
            let x = star_exponent(inst, tag).expect("valid tag");
            let applicable = x >= 6;
            let bound = ctx.decay_bound(scale, x);
            let verdict = judge(&v, &bound, applicable);
            out.push(LinearFormValue {
                tag,
                value: v,
                claimed_bound: bound,
                exponent: x,
                applicable,
                verdict,
            });
        }
    }
    Ok(out)
}

/// All forms of the instance, with undecided verdicts retried at doubled
/// precision up to `p_cap`.
pub fn certified_forms(inst: &InstanceAB, p_start: u32, p_cap: u32) -> Vec<LinearFormValue> {
    let mut p = p_start;
    loop {
        let mut forms = basic_forms(inst, p);
        if inst.power().is_some() {
            forms.extend(eliminated_forms(inst, p).expect("power claim present"));
        }
        let undecided = forms.iter().any(|f| f.verdict == Verdict::Undecided);
        if !undecided || p >= p_cap {
            return forms;
        }
        p = p.saturating_mul(2).min(p_cap);
    }
}

/// Evidence that an eliminated form is nonzero.
#[derive(Clone, Debug)]
pub struct NonzeroEvidence {
    /// The algebraic outcome: a valuation certificate, or the parity
    /// exception that routes the instance to the `n <= 36` theorem.
    pub outcome: NonvanishingOutcome,
    /// An enclosure of the form value excluding zero, when the working
    /// precision suffices.
    pub numeric_witness: Option<Real>,
}

/// Nonvanishing check for an eliminated form (`A*` / `B*` tags only).
pub fn verify_nonzero(
    inst: &InstanceAB,
    tag: FormTag,
    p: u32,
) -> Result<NonzeroEvidence, FormsError> {
    let claim = inst.power().ok_or(FormsError::MissingPowerClaim)?.clone();
    let k = inst.k() as u32;
    let (ell, has_eta4) = match tag {
        FormTag::AStar(l) if 1 <= l && l <= k => (l, false),
        FormTag::BStar(l) if 1 <= l && l <= k => (l, true),
        _ => return Err(FormsError::InvalidTag),
    };
    let parity = if has_eta4 {
        Some(Parity::of(claim.n - claim.m))
    } else {
        None
    };
    let outcome = quad::nonvanishing_certificate(ell as u64, claim.a, parity);
    let numeric_witness = eliminated_forms(inst, p)?
        .into_iter()
        .find(|f| f.tag == tag)
        .and_then(|f| {
            if f.value.contains_zero() {
                None
            } else {
                Some(f.value)
            }
        });
    Ok(NonzeroEvidence {
        outcome,
        numeric_witness,
    })
}

/// Largest coefficient magnitude appearing in any eliminated form of the
/// instance; justifies taking `B = n^2` in Matveev's theorem.
pub fn max_star_coefficient(inst: &InstanceAB) -> Result<BigInt, FormsError> {
    let k = inst.k() as u32;
    let mut best = BigInt::one();
    for ell in 1..=k {
        for tag in [FormTag::AStar(ell), FormTag::BStar(ell)] {
            let (c5, ca, c3, c4) = star_coefficients(inst, tag)?;
            for c in [c5, ca, c3, c4] {
                let mag = c.abs();
                if mag > best {
                    best = mag;
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn known_solution() -> InstanceAB {
        let y = BigInt::from(3864);
        let rep = zeckendorf(&y).unwrap();
        InstanceAB::new(y, rep, Some(PowerClaim { a: 2, n: 36, m: 12 })).unwrap()
    }

    #[test]
    fn instance_validation() {
        let inst = known_solution();
        assert_eq!(inst.k(), 5);
        assert_eq!(inst.rep().indices(), &[18, 16, 13, 10, 5]);
        // wrong power
        let y = BigInt::from(3864);
        let rep = zeckendorf(&y).unwrap();
        assert_eq!(
            InstanceAB::new(
                y.clone(),
                rep.clone(),
                Some(PowerClaim { a: 2, n: 36, m: 13 })
            )
            .unwrap_err(),
            InstanceError::PowerMismatch
        );
        assert_eq!(
            InstanceAB::new(
                y.clone(),
                rep.clone(),
                Some(PowerClaim { a: 1, n: 36, m: 12 })
            )
            .unwrap_err(),
            InstanceError::BadExponent
        );
        assert_eq!(
            InstanceAB::new(y, rep, Some(PowerClaim { a: 2, n: 36, m: 35 })).unwrap_err(),
            InstanceError::BadShape
        );
    }

    #[test]
    fn known_solution_basic_forms() {
        let inst = known_solution();
        let forms = basic_forms(&inst, 160);
        // A1 has X = n_1 - n_2 = 2 < 6: no claim
        let a1 = forms.iter().find(|f| f.tag == FormTag::A(1)).unwrap();
        assert_eq!(a1.exponent, 2);
        assert!(!a1.applicable);
        assert_eq!(a1.verdict, Verdict::NotApplicable);
        // A5 (= Ak) has X = n_1 = 18 and certifies
        let a5 = forms.iter().find(|f| f.tag == FormTag::A(5)).unwrap();
        assert_eq!(a5.exponent, 18);
        assert_eq!(a5.verdict, Verdict::Certified);
        // B1 has X = n - m = 24 and certifies
        let b1 = forms.iter().find(|f| f.tag == FormTag::B1).unwrap();
        assert_eq!(b1.exponent, 24);
        assert_eq!(b1.verdict, Verdict::Certified);
        // B2 has X = n = 36 and certifies
        let b2 = forms.iter().find(|f| f.tag == FormTag::B2).unwrap();
        assert_eq!(b2.exponent, 36);
        assert_eq!(b2.verdict, Verdict::Certified);
    }

    #[test]
    fn known_solution_eliminated_forms() {
        let inst = known_solution();
        let forms = eliminated_forms(&inst, 160).unwrap();
        assert_eq!(forms.len(), 10);
        for f in &forms {
            assert!(
                f.verdict == Verdict::Certified || f.verdict == Verdict::NotApplicable,
                "form {} unexpected verdict {:?}",
                f.tag,
                f.verdict
            );
        }
        // A*1: X = min(2, 24) = 2, not applicable
        let a1 = forms.iter().find(|f| f.tag == FormTag::AStar(1)).unwrap();
        assert_eq!(a1.exponent, 2);
        assert!(!a1.applicable);
        // B*5: X = n_1 = 18, applicable and certified
        let b5 = forms.iter().find(|f| f.tag == FormTag::BStar(5)).unwrap();
        assert_eq!(b5.exponent, 18);
        assert_eq!(b5.verdict, Verdict::Certified);
    }

    #[test]
    fn star_coefficient_audit() {
        let inst = known_solution();
        // A*1: (a-1) log sqrt5 + (n - a n_1) log phi; n - a n_1 = 36 - 36 = 0
        let (c5, ca, c3, c4) = star_coefficients(&inst, FormTag::AStar(1)).unwrap();
        assert_eq!(c5, BigInt::from(1));
        assert_eq!(ca, BigInt::from(0));
        assert_eq!(c3, BigInt::from(0));
        assert_eq!(c4, BigInt::from(0));
        // B*3 carries the eta3 coefficient -a and the eta4 coefficient 1
        let (c5, ca, c3, c4) = star_coefficients(&inst, FormTag::BStar(3)).unwrap();
        assert_eq!(c5, BigInt::from(1));
        assert_eq!(ca, BigInt::from(12 - 36));
        assert_eq!(c3, BigInt::from(-2));
        assert_eq!(c4, BigInt::from(1));
        // coefficient bound B = n^2
        let max = max_star_coefficient(&inst).unwrap();
        assert!(max <= BigInt::from(36u64 * 36));
    }

    #[test]
    fn representation_only_instance() {
        // y = F_10 = 55, k = 1: single form with X = n_1 = 10
        let inst = InstanceAB::from_y(BigInt::from(55)).unwrap();
        assert_eq!(inst.k(), 1);
        let forms = basic_forms(&inst, 128);
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].tag, FormTag::A(1));
        assert_eq!(forms[0].exponent, 10);
        assert_eq!(forms[0].verdict, Verdict::Certified);
        assert!(eliminated_forms(&inst, 128).is_err());
    }

    #[test]
    fn nonzero_evidence() {
        let inst = known_solution();
        // n - m = 24 is even: B* forms fall to the parity exception
        let ev = verify_nonzero(&inst, FormTag::BStar(1), 160).unwrap();
        assert_eq!(ev.outcome, NonvanishingOutcome::ParityException);
        // and still carry a numeric witness (the value is ~0.8047)
        assert!(ev.numeric_witness.is_some());
        // A* forms have no eta4: certificate regardless of parity
        let ev = verify_nonzero(&inst, FormTag::AStar(3), 160).unwrap();
        assert!(matches!(ev.outcome, NonvanishingOutcome::Certificate(_)));
        assert!(verify_nonzero(&inst, FormTag::B1, 64).is_err());
    }

    #[test]
    fn elimination_identity() {
        // a*A(l) - B1 must overlap A*(l) as enclosures
        let inst = known_solution();
        let p = 192;
        let basic = basic_forms(&inst, p);
        let star = eliminated_forms(&inst, p).unwrap();
        let b1 = basic.iter().find(|f| f.tag == FormTag::B1).unwrap();
        let a = BigInt::from(inst.power().unwrap().a);
        for ell in 1..=5u32 {
            let al = basic.iter().find(|f| f.tag == FormTag::A(ell)).unwrap();
            let expect = al.value.mul_int(&a, p).sub(&b1.value, p);
            let got = star.iter().find(|f| f.tag == FormTag::AStar(ell)).unwrap();
            assert!(
                expect.overlaps(&got.value),
                "elimination identity fails at l={ell}"
            );
        }
    }
}
