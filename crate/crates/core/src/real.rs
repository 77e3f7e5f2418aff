//! Rigorous real arithmetic on midpoint–radius balls over dyadic rationals.
//!
//! A [`Real`] is a pair `(mid, rad)` of dyadic rationals representing the
//! interval `[mid - rad, mid + rad]`. Every operation returns an enclosure of
//! the exact mathematical result; inequalities decided through
//! [`decide_leq`] therefore never depend on rounding luck.
//!
//! Elementary functions (`ln`, `exp`, `sqrt`) are evaluated at interval
//! endpoints with fixed-point integer series whose truncation and rounding
//! errors are tracked outward, so the returned balls are certified.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Mantissa bits kept for radius values (always rounded up).
const RAD_BITS: u32 = 32;

/// Errors from partial operations on [`Real`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealError {
    /// `ln` of an enclosure whose lower endpoint is not certainly positive.
    NonPositiveLog,
    /// Division by an enclosure containing zero.
    DivisorContainsZero,
    /// `sqrt` of an enclosure containing negative numbers.
    NegativeSqrt,
    /// The result's binary exponent does not fit the representation.
    ExponentOverflow,
    /// A fractional power of an enclosure containing negative numbers.
    NegativeBase,
}

impl fmt::Display for RealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealError::NonPositiveLog => write!(f, "log argument is not certainly positive"),
            RealError::DivisorContainsZero => write!(f, "divisor encloses zero"),
            RealError::NegativeSqrt => write!(f, "sqrt argument encloses negative numbers"),
            RealError::ExponentOverflow => write!(f, "binary exponent out of range"),
            RealError::NegativeBase => write!(f, "fractional power of a negative base"),
        }
    }
}

/// Rounding directions for [`Dyadic::round`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Round to nearest, ties away from zero.
    Nearest,
    /// Round toward minus infinity.
    Down,
    /// Round toward plus infinity.
    Up,
}

/// An exact dyadic rational `man * 2^exp` with `man` odd or zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Dyadic {
                man,
                exp: 0,
            };
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { man, exp }
        } else {
            Dyadic {
                man: man >> tz,
                exp: exp
                    .checked_add(tz as i64)
                    .expect("dyadic exponent overflow"),
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            man: BigInt::one(),
            exp: 0,
        }
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            man: BigInt::one(),
            exp: e,
        }
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Dyadic::new(v.clone(), 0)
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    /// Bit length of the mantissa magnitude.
    pub fn bits(&self) -> u64 {
        self.man.magnitude().bits()
    }

    /// Smallest `u` with `|self| <= 2^u` (mantissa nonzero).
    fn log2_ub(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.bits() as i64
    }

    /// Largest `l` with `|self| >= 2^l` (mantissa nonzero).
    fn log2_lb(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.bits() as i64 - 1
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    /// Multiply by `2^k` (exact).
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp.checked_add(k).expect("dyadic exponent overflow"),
        }
    }

    /// Exact product.
    pub fn mul(&self, other: &Dyadic) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: &self.man * &other.man,
            exp: self
                .exp
                .checked_add(other.exp)
                .expect("dyadic exponent overflow"),
        }
    }

    /// Exact sum. Aligns mantissas; callers are responsible for keeping the
    /// exponent gap reasonable; ball operations use a windowed variant instead.
    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        let man = (&hi.man << shift) + &lo.man;
        Dyadic::new(man, lo.exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    /// Total order on the represented values.
    pub fn cmp_val(&self, other: &Dyadic) -> Ordering {
        let sa = self.man.sign();
        let sb = other.man.sign();
        let sign_rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        if sign_rank(sa) != sign_rank(sb) {
            return sign_rank(sa).cmp(&sign_rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitudes through their bit windows
        // first to avoid aligning wildly different exponents. log2_ub is a
        // strict bound (the mantissa is below 2^bits), so touching windows
        // already decide the order.
        let (la, ua) = (self.log2_lb(), self.log2_ub());
        let (lb, ub) = (other.log2_lb(), other.log2_ub());
        let mag = if la >= ub {
            Ordering::Greater
        } else if lb >= ua {
            Ordering::Less
        } else {
            self.sub_mag_cmp(other)
        };
        if sa == Sign::Plus {
            mag
        } else {
            mag.reverse()
        }
    }

    /// Exact magnitude comparison (windows overlap, alignment is bounded).
    fn sub_mag_cmp(&self, other: &Dyadic) -> Ordering {
        let (ea, eb) = (self.exp, other.exp);
        let ma = self.man.magnitude();
        let mb = other.man.magnitude();
        if ea == eb {
            ma.cmp(mb)
        } else if ea > eb {
            let shifted = ma << ((ea - eb) as u64);
            shifted.cmp(mb)
        } else {
            let shifted = mb << ((eb - ea) as u64);
            ma.cmp(&shifted)
        }
    }

    /// Round to `p` significant bits. Returns the rounded value and an upper
    /// bound for the absolute rounding error.
    pub fn round(&self, p: u32, mode: Round) -> (Dyadic, Dyadic) {
        let b = self.bits();
        if b <= p as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let drop = b - p as u64;
        let mag = self.man.magnitude();
        let q = mag >> drop;
        let rem_nonzero = {
            let back = &q << drop;
            back != *mag
        };
        if !rem_nonzero {
            return (
                Dyadic::new(
                    BigInt::from_biguint(self.man.sign(), q),
                    self.exp + drop as i64,
                ),
                Dyadic::zero(),
            );
        }
        let negative = self.man.is_negative();
        let (mag_out, err_exp) = match mode {
            Round::Nearest => {
                // ties away from zero
                let half_bit = (mag >> (drop - 1)) & BigUint::one();
                let m = if half_bit.is_one() {
                    &q + 1u32
                } else {
                    q
                };
                (m, self.exp + drop as i64 - 1)
            }
            Round::Down => {
                // toward -inf: truncate magnitude if positive, bump if negative
                let m = if negative {
                    &q + 1u32
                } else {
                    q
                };
                (m, self.exp + drop as i64)
            }
            Round::Up => {
                let m = if negative {
                    q
                } else {
                    &q + 1u32
                };
                (m, self.exp + drop as i64)
            }
        };
        (
            Dyadic::new(
                BigInt::from_biguint(self.man.sign(), mag_out),
                self.exp + drop as i64,
            ),
            Dyadic::pow2(err_exp),
        )
    }

    /// `exp + bits`: the smallest `u` with `|self| <= 2^u`, if nonzero.
    pub fn log2_magnitude_upper(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.log2_ub())
        }
    }

    /// Exact conversion to a rational number.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << (self.exp as u64))
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// Best-effort `f64` conversion (display purposes).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // keep at most 64 mantissa bits to stay in f64 range arithmetic
        let (r, _) = self.round(64, Round::Nearest);
        let m = r.man.to_f64().unwrap_or(f64::NAN);
        let e = r.exp;
        if e == 0 {
            return m;
        }
        if !(-1022..=1023).contains(&e) {
            // split the scaling to reach subnormal/huge ranges, saturating
            let half = e / 2;
            return m * pow2_f64(half) * pow2_f64(e - half);
        }
        m * pow2_f64(e)
    }

    /// Decimal scientific-notation rendering with `sig` significant digits
    /// (deterministic, display only).
    pub fn to_decimal(&self, sig: usize) -> String {
        use alloc::format;
        if self.is_zero() {
            return String::from("0");
        }
        let sig = sig.max(1);
        // 10^e10_est <= |v| (roughly); log10(2) ~= 0.30102999566398
        let approx = (self.exp + self.bits() as i64 - 1) as i128;
        let mut e10 = (approx * 30102999566398i128).div_euclid(100000000000000i128) as i64;
        // We want an integer d with  d = round(|v| * 10^(sig-1-e10))  having
        // exactly `sig` digits; correct e10 by trial.
        loop {
            let digits = self.scaled_decimal_digits(sig as i64 - 1 - e10);
            let n = decimal_len(&digits);
            if n < sig as u64 {
                e10 -= 1;
            } else if n > sig as u64 {
                e10 += 1;
            } else {
                let s = digits.to_string();
                let (head, tail) = s.split_at(1);
                let sign = if self.man.is_negative() { "-" } else { "" };
                let tail = tail.trim_end_matches('0');
                return if tail.is_empty() {
                    format!("{sign}{head}e{e10}")
                } else {
                    format!("{sign}{head}.{tail}e{e10}")
                };
            }
        }
    }

    /// `round(|v| * 10^scale)` as an integer (display helper).
    fn scaled_decimal_digits(&self, scale: i64) -> BigUint {
        let mag = self.man.magnitude().clone();
        // |v| * 10^scale = mag * 2^exp * 10^scale
        let mut num = mag;
        let mut den = BigUint::one();
        if scale >= 0 {
            num *= BigUint::from(10u32).pow(scale as u32);
        } else {
            den *= BigUint::from(10u32).pow((-scale) as u32);
        }
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        // rounded division
        (&num + (&den >> 1u32)) / den
    }
}

fn decimal_len(v: &BigUint) -> u64 {
    if v.is_zero() {
        return 1;
    }
    v.to_string().len() as u64
}

fn pow2_f64(e: i64) -> f64 {
    if e >= 1024 {
        return f64::INFINITY;
    }
    if e < -1074 {
        return 0.0;
    }
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        // subnormal
        f64::from_bits(1u64 << (e + 1074) as u64)
    }
}

/// Windowed exact addition: if the operands' magnitudes are separated by more
/// than `p + 8` bits, the smaller one is returned as an error bound instead of
/// being aligned. Returns `(sum_approx, err_bound)` with
/// `|self + other - sum_approx| <= err_bound`.
fn add_windowed(a: &Dyadic, b: &Dyadic, p: u32) -> (Dyadic, Dyadic) {
    if a.is_zero() {
        return (b.clone(), Dyadic::zero());
    }
    if b.is_zero() {
        return (a.clone(), Dyadic::zero());
    }
    let window = p as i64 + 8;
    if a.log2_ub() < b.log2_lb() - window {
        return (b.clone(), Dyadic::pow2(a.log2_ub()));
    }
    if b.log2_ub() < a.log2_lb() - window {
        return (a.clone(), Dyadic::pow2(b.log2_ub()));
    }
    (a.add(b), Dyadic::zero())
}

/// Round a nonnegative radius value up to `RAD_BITS` bits.
fn rad_compress(r: Dyadic) -> Dyadic {
    debug_assert!(!r.is_negative());
    r.round(RAD_BITS, Round::Up).0
}

/// `a + b` for radius values (nonnegative, rounded up, windowed).
fn rad_add(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let window = RAD_BITS as i64 + 4;
    if a.log2_ub() < b.log2_lb() - window {
        // |a| <= ulp of b: absorb into one rounding step
        return rad_compress(b.add(&Dyadic::pow2(a.log2_ub())));
    }
    if b.log2_ub() < a.log2_lb() - window {
        return rad_compress(a.add(&Dyadic::pow2(b.log2_ub())));
    }
    rad_compress(a.add(b))
}

/// Upper bound of `|d|` rounded up to `RAD_BITS` bits.
fn mag_ub(d: &Dyadic) -> Dyadic {
    d.abs().round(RAD_BITS, Round::Up).0
}

/// A certified enclosure `[mid - rad, mid + rad]` of a real number.
#[derive(Clone)]
pub struct Real {
    mid: Dyadic,
    rad: Dyadic,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ± {}",
            self.mid.to_decimal(20),
            self.rad.to_decimal(3)
        )
    }
}

impl Real {
    pub fn exact(mid: Dyadic) -> Self {
        Real {
            mid,
            rad: Dyadic::zero(),
        }
    }

    pub fn zero() -> Self {
        Real::exact(Dyadic::zero())
    }

    pub fn one() -> Self {
        Real::exact(Dyadic::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Real::exact(Dyadic::from_i64(v))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Real::exact(Dyadic::from_bigint(v))
    }

    pub fn from_interval(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp_val(&hi) != Ordering::Greater);
        let mid = lo.add(&hi).shl(-1);
        let rad = hi.sub(&lo).shl(-1);
        Real {
            mid,
            rad: rad_compress(rad),
        }
    }

    /// Enclosure of a rational number at `p` bits.
    pub fn from_ratio(v: &BigRational, p: u32) -> Self {
        if v.is_zero() {
            return Real::zero();
        }
        let (lo, hi) = div_point(&Dyadic::from_bigint(v.numer()), &Dyadic::from_bigint(v.denom()), p + 2);
        Real::from_interval(lo, hi)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Total interval width `2 * rad`.
    pub fn width(&self) -> Dyadic {
        self.rad.shl(1)
    }

    /// Re-round the ball to `p` significant midpoint bits.
    pub fn round_to(&self, p: u32) -> Real {
        self.clone().round_ball(p)
    }

    fn round_ball(self, p: u32) -> Real {
        let (mid, err) = self.mid.round(p, Round::Nearest);
        let rad = rad_add(&self.rad, &err);
        Real { mid, rad }
    }

    /// Directed outward endpoint at `p` bits: a dyadic `l <= inf(self)` or
    /// `u >= sup(self)`.
    pub fn endpoint(&self, upper: bool, p: u32) -> Dyadic {
        let signed_rad = if upper {
            self.rad.clone()
        } else {
            self.rad.neg()
        };
        let (v, e) = add_windowed(&self.mid, &signed_rad, p + RAD_BITS);
        let adjusted = if upper {
            v.add(&e)
        } else {
            v.sub(&e)
        };
        adjusted
            .round(p, if upper { Round::Up } else { Round::Down })
            .0
    }

    pub fn lower(&self, p: u32) -> Dyadic {
        self.endpoint(false, p)
    }

    pub fn upper(&self, p: u32) -> Dyadic {
        self.endpoint(true, p)
    }

    pub fn neg(&self) -> Real {
        Real {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
        }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Real {
        Real {
            mid: self.mid.shl(k),
            rad: self.rad.shl(k),
        }
    }

    /// Exact halving (used for `log sqrt(5) = (log 5)/2`).
    pub fn half(&self) -> Real {
        self.mul_pow2(-1)
    }

    pub fn add(&self, other: &Real, p: u32) -> Real {
        let (mid, err) = add_windowed(&self.mid, &other.mid, p);
        let rad = rad_add(&rad_add(&self.rad, &other.rad), &err);
        Real { mid, rad }.round_ball(p)
    }

    pub fn sub(&self, other: &Real, p: u32) -> Real {
        self.add(&other.neg(), p)
    }

    pub fn mul(&self, other: &Real, p: u32) -> Real {
        let mid = self.mid.mul(&other.mid);
        let mut rad = Dyadic::zero();
        if !self.rad.is_zero() {
            rad = rad_add(&rad, &self.rad.mul(&mag_ub(&other.mid)));
        }
        if !other.rad.is_zero() {
            rad = rad_add(&rad, &other.rad.mul(&mag_ub(&self.mid)));
        }
        if !self.rad.is_zero() && !other.rad.is_zero() {
            rad = rad_add(&rad, &self.rad.mul(&other.rad));
        }
        Real { mid, rad }.round_ball(p)
    }

    pub fn mul_int(&self, k: &BigInt, p: u32) -> Real {
        self.mul(&Real::from_bigint(k), p)
    }

    /// True if the enclosure certainly excludes zero on the positive side.
    pub fn is_positive_certain(&self) -> bool {
        self.mid.is_positive() && self.rad.cmp_val(&self.mid) == Ordering::Less
    }

    pub fn is_negative_certain(&self) -> bool {
        self.neg().is_positive_certain()
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs().cmp_val(&self.rad) != Ordering::Greater
    }

    /// Certifies `sup(self) <= inf(other)`; implies `self <= other`.
    pub fn le_certain(&self, other: &Real) -> bool {
        let p = 16 + RAD_BITS + self.mid.bits().max(other.mid.bits()) as u32;
        let u = self.upper(p);
        let l = other.lower(p);
        u.cmp_val(&l) != Ordering::Greater
    }

    /// Certifies `sup(self) < inf(other)`; implies `self < other`.
    pub fn lt_certain(&self, other: &Real) -> bool {
        let p = 16 + RAD_BITS + self.mid.bits().max(other.mid.bits()) as u32;
        let u = self.upper(p);
        let l = other.lower(p);
        u.cmp_val(&l) == Ordering::Less
    }

    /// True if the two enclosures intersect.
    pub fn overlaps(&self, other: &Real) -> bool {
        let p = 16 + RAD_BITS + self.mid.bits().max(other.mid.bits()) as u32;
        !(self.upper(p).cmp_val(&other.lower(p)) == Ordering::Less
            || other.upper(p).cmp_val(&self.lower(p)) == Ordering::Less)
    }

    pub fn contains_bigint(&self, v: &BigInt) -> bool {
        let d = Dyadic::from_bigint(v);
        let p = 16 + RAD_BITS + self.mid.bits().max(d.bits()) as u32;
        self.lower(p).cmp_val(&d) != Ordering::Greater
            && d.cmp_val(&self.upper(p)) != Ordering::Greater
    }

    /// Enclosure of `|self|`.
    pub fn abs(&self) -> Real {
        if !self.contains_zero() {
            if self.mid.is_negative() {
                self.neg()
            } else {
                self.clone()
            }
        } else {
            // straddles zero: [0, max(|lo|, |hi|)]
            let hi = {
                let a = self.endpoint(true, RAD_BITS + self.mid.bits() as u32 + 8);
                let b = self
                    .endpoint(false, RAD_BITS + self.mid.bits() as u32 + 8)
                    .abs();
                if a.cmp_val(&b) == Ordering::Less {
                    b
                } else {
                    a
                }
            };
            Real::from_interval(Dyadic::zero(), hi)
        }
    }

    pub fn div(&self, other: &Real, p: u32) -> Result<Real, RealError> {
        if other.contains_zero() {
            return Err(RealError::DivisorContainsZero);
        }
        let pe = p + 4;
        let (al, ah) = (self.lower(pe), self.upper(pe));
        let (bl, bh) = (other.lower(pe), other.upper(pe));
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&al, &ah] {
            for b in [&bl, &bh] {
                let (ql, qh) = div_point(a, b, pe);
                lo = Some(match lo {
                    None => ql.clone(),
                    Some(c) => {
                        if ql.cmp_val(&c) == Ordering::Less {
                            ql.clone()
                        } else {
                            c
                        }
                    }
                });
                hi = Some(match hi {
                    None => qh.clone(),
                    Some(c) => {
                        if qh.cmp_val(&c) == Ordering::Greater {
                            qh.clone()
                        } else {
                            c
                        }
                    }
                });
            }
        }
        Ok(Real::from_interval(lo.unwrap(), hi.unwrap()).round_ball(p))
    }

    pub fn inv(&self, p: u32) -> Result<Real, RealError> {
        Real::one().div(self, p)
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, e: i64, p: u32) -> Result<Real, RealError> {
        if e == 0 {
            return Ok(Real::one());
        }
        let pw = p + 8;
        let mut base = self.clone();
        let mut acc: Option<Real> = None;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base, pw),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, pw);
            }
        }
        let v = acc.unwrap();
        if e < 0 {
            v.inv(p)
        } else {
            Ok(v.round_ball(p))
        }
    }

    pub fn sqrt(&self, p: u32) -> Result<Real, RealError> {
        let pe = p + 4;
        let lo = self.lower(pe);
        let hi = self.upper(pe);
        if lo.is_negative() {
            return Err(RealError::NegativeSqrt);
        }
        let l = sqrt_point(&lo, pe).0;
        let h = sqrt_point(&hi, pe).1;
        Ok(Real::from_interval(l, h).round_ball(p))
    }

    /// Natural logarithm. The enclosure width is at most `2^(4-p)` for exact
    /// arguments; the mantissa keeps enough bits beyond `p` to absorb the
    /// magnitude of the result.
    pub fn ln(&self, p: u32) -> Result<Real, RealError> {
        let pe = p + 8;
        let lo = self.lower(pe);
        if !lo.is_positive() {
            return Err(RealError::NonPositiveLog);
        }
        let hi = self.upper(pe);
        let l = ln_point(&lo, pe).0;
        let h = ln_point(&hi, pe).1;
        let keep = if l.is_zero() {
            p + 6
        } else {
            p + 6 + l.log2_ub().max(0) as u32
        };
        Ok(Real::from_interval(l, h).round_ball(keep))
    }

    /// Exponential function.
    pub fn exp(&self, p: u32) -> Result<Real, RealError> {
        let pe = p + 8;
        let lo = self.lower(pe);
        let hi = self.upper(pe);
        let l = exp_point(&lo, pe)?.0;
        let h = exp_point(&hi, pe)?.1;
        Ok(Real::from_interval(l, h).round_ball(p))
    }

    /// Real power with an exact rational exponent. Integer exponents reduce
    /// to [`Real::powi`]; otherwise the base must be nonnegative.
    pub fn pow_ratio(&self, e: &BigRational, p: u32) -> Result<Real, RealError> {
        if e.is_integer() {
            let ei = e
                .to_integer()
                .to_i64()
                .ok_or(RealError::ExponentOverflow)?;
            return self.powi(ei, p);
        }
        let pe = p + 8;
        let lo = self.lower(pe);
        if lo.is_negative() {
            return Err(RealError::NegativeBase);
        }
        if !e.is_positive() {
            // x^e = exp(e ln x); requires a certainly positive base
            if !self.is_positive_certain() {
                return Err(RealError::NonPositiveLog);
            }
            let ln = self.ln(pe)?;
            let er = Real::from_ratio(e, pe);
            return ln.mul(&er, pe).exp(p);
        }
        if !self.is_positive_certain() {
            // base encloses 0 with nonnegative lower bound: x^e is monotone,
            // enclosure is [0, sup^e]
            let hi = Real::exact(self.upper(pe));
            if hi.mid().is_zero() {
                return Ok(Real::zero());
            }
            let upper_pow = hi.ln(pe)?.mul(&Real::from_ratio(e, pe), pe).exp(pe)?;
            return Ok(Real::from_interval(Dyadic::zero(), upper_pow.upper(pe)).round_ball(p));
        }
        let ln = self.ln(pe)?;
        let er = Real::from_ratio(e, pe);
        ln.mul(&er, pe).exp(p)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Deterministic decimal rendering of the midpoint.
    pub fn to_decimal(&self, sig: usize) -> String {
        self.mid.to_decimal(sig)
    }
}

/// Enclosure `[lo, hi]` of `a / b` at `p` significant bits (`b` nonzero).
fn div_point(a: &Dyadic, b: &Dyadic, p: u32) -> (Dyadic, Dyadic) {
    debug_assert!(!b.is_zero());
    if a.is_zero() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    let amag = a.man.magnitude();
    let bmag = b.man.magnitude();
    let abits = amag.bits() as i64;
    let bbits = bmag.bits() as i64;
    // want quotient with about p+2 significant bits
    let t = (p as i64 + 2 + bbits - abits).max(0) as u64;
    let num = amag << t;
    let (q, r) = num.div_rem(bmag);
    let exp = a.exp - b.exp - t as i64;
    let negative = a.man.sign() != b.man.sign();
    let exact = r.is_zero();
    let lo_mag;
    let hi_mag;
    if exact {
        lo_mag = q.clone();
        hi_mag = q;
    } else if negative {
        lo_mag = &q + 1u32;
        hi_mag = q;
    } else {
        lo_mag = q.clone();
        hi_mag = &q + 1u32;
    }
    let sign = if negative { Sign::Minus } else { Sign::Plus };
    (
        Dyadic::new(BigInt::from_biguint(sign, lo_mag), exp),
        Dyadic::new(BigInt::from_biguint(sign, hi_mag), exp),
    )
}

/// Enclosure `[lo, hi]` of `sqrt(d)` (`d >= 0`).
fn sqrt_point(d: &Dyadic, p: u32) -> (Dyadic, Dyadic) {
    debug_assert!(!d.is_negative());
    if d.is_zero() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    let mag = d.man.magnitude();
    let b = mag.bits() as i64;
    let mut t = (2 * (p as i64 + 2) - b).max(0);
    if (d.exp - t) % 2 != 0 {
        t += 1;
    }
    let m = mag << (t as u64);
    let r = m.sqrt();
    let exact = &r * &r == m;
    let half_exp = (d.exp - t) / 2;
    let lo = Dyadic::new(BigInt::from_biguint(Sign::Plus, r.clone()), half_exp);
    let hi = if exact {
        lo.clone()
    } else {
        Dyadic::new(BigInt::from_biguint(Sign::Plus, r + 1u32), half_exp)
    };
    (lo, hi)
}

/// Interval `atanh` for `z = [zl, zh] * 2^-q` with `0 <= z <= 0.35`.
/// Returns `[sl, sh] * 2^-q` enclosing `atanh` of any value in the input.
fn atanh_fixed(zl: &BigUint, zh: &BigUint, q: u32) -> (BigUint, BigUint) {
    if zh.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let one_q = BigUint::one() << q;
    debug_assert!(*zh <= (&one_q * 36u32) / 100u32, "atanh argument too large");
    let ceil_shift = |v: BigUint| -> BigUint { (&v + (&one_q - 1u32)) >> q };
    let zzl: BigUint = (zl * zl) >> q;
    let zzh: BigUint = ceil_shift(zh * zh);
    let mut tl = zl.clone();
    let mut th = zh.clone();
    let mut sl = BigUint::zero();
    let mut sh = BigUint::zero();
    let mut j: u64 = 0;
    loop {
        let d = 2 * j + 1;
        sl += &tl / d;
        sh += (&th + (d - 1)) / d;
        // Once the scaled term is tiny, the true tail of the series is below
        // th * z^2/(1-z^2) <= th * 0.15 < 2 ulps for th <= 4.
        if th <= BigUint::from(4u32) {
            sh += 2u32;
            break;
        }
        tl = (&tl * &zzl) >> q;
        th = ceil_shift(&th * &zzh);
        j += 1;
        assert!(j < 100_000_000, "atanh series failed to converge");
    }
    (sl, sh)
}

/// Interval `ln 2` at scale `2^-q`.
fn ln2_fixed(q: u32) -> (BigUint, BigUint) {
    // ln 2 = 2 atanh(1/3)
    let one_q = BigUint::one() << q;
    let zl = &one_q / 3u32;
    let zh = &zl + 1u32;
    let (al, ah) = atanh_fixed(&zl, &zh, q);
    (al << 1u32, ah << 1u32)
}

/// Enclosure `[lo, hi]` of `ln d` for an exact positive dyadic `d`.
fn ln_point(d: &Dyadic, p: u32) -> (Dyadic, Dyadic) {
    debug_assert!(d.is_positive());
    let mag = d.man.magnitude();
    let b = mag.bits() as i64;
    // write d = mhat * 2^s with mhat in [0.75, 1.5)
    let upper_branch = if b >= 2 {
        mag << 2u32 >= (BigUint::one() << (b as u64)) * 3u32
    } else {
        false
    };
    let (s, zn, zd, atanh_negative) = if upper_branch {
        // mhat in [1.5, 2): fold into [0.75, 1): ln mhat' = -2 atanh((1-mhat')/(1+mhat'))
        let h = BigUint::one() << (b as u64);
        (d.exp + b, &h - mag, &h + mag, true)
    } else {
        let h = BigUint::one() << ((b - 1) as u64);
        (d.exp + b - 1, mag - &h, mag + &h, false)
    };
    let s_bits = 64 - s.unsigned_abs().leading_zeros();
    let q = p + 24 + s_bits;
    // z = zn/zd in [0, 0.2]
    let (zl, zh) = {
        let num = zn << q;
        let (f, r) = num.div_rem(&zd);
        if r.is_zero() {
            (f.clone(), f)
        } else {
            let f1 = &f + 1u32;
            (f, f1)
        }
    };
    let (al, ah) = atanh_fixed(&zl, &zh, q);
    // ln d = s*ln2 + sign * 2*atanh(z), everything scaled by 2^-q
    let (mut lo, mut hi) = if atanh_negative {
        (
            -BigInt::from_biguint(Sign::Plus, ah << 1u32),
            -BigInt::from_biguint(Sign::Plus, al << 1u32),
        )
    } else {
        (
            BigInt::from_biguint(Sign::Plus, al << 1u32),
            BigInt::from_biguint(Sign::Plus, ah << 1u32),
        )
    };
    if s != 0 {
        let (l2l, l2h) = ln2_fixed(q);
        let (l2l, l2h) = (
            BigInt::from_biguint(Sign::Plus, l2l),
            BigInt::from_biguint(Sign::Plus, l2h),
        );
        let sb = BigInt::from(s);
        if s > 0 {
            lo += &sb * l2l;
            hi += &sb * l2h;
        } else {
            lo += &sb * l2h;
            hi += &sb * l2l;
        }
    }
    (
        Dyadic::new(lo, -(q as i64)),
        Dyadic::new(hi, -(q as i64)),
    )
}

/// Enclosure `[lo, hi]` of `exp d` for an exact dyadic `d`.
fn exp_point(d: &Dyadic, p: u32) -> Result<(Dyadic, Dyadic), RealError> {
    if d.is_zero() {
        return Ok((Dyadic::one(), Dyadic::one()));
    }
    if d.log2_ub() >= 62 {
        return Err(RealError::ExponentOverflow);
    }
    // initial estimate k ~ floor(d / ln2); 0x171547652B82FE = floor(2^52/ln2)
    let mut k: BigInt = {
        let il2: BigInt = BigInt::from(0x1_71547652B82FEu64) << 24u32; // ~ 2^76/ln2
        let prod = &d.man * il2;
        let shift = 76i64 - d.exp;
        if shift >= 0 {
            prod >> (shift as u64)
        } else {
            prod << ((-shift) as u64)
        }
    };
    let q = {
        let k_bits = k.magnitude().bits().max(1) as u32;
        p + 24 + k_bits
    };
    let one_q = BigUint::one() << q;
    let (l2l, l2h) = ln2_fixed(q);
    // refine k until r = d - k*ln2 lies in [0, 0.75]
    let mut adjust_guard = 0u32;
    let (rl, rh) = loop {
        adjust_guard += 1;
        assert!(adjust_guard < 128, "exp argument reduction failed to settle");
        // r = d - k*ln2 as an interval at scale 2^-q
        let dq: BigInt = {
            let shift = q as i64 + d.exp;
            if shift >= 0 {
                &d.man << (shift as u64)
            } else {
                &d.man >> ((-shift) as u64)
            }
        };
        let (kl2_lo, kl2_hi) = {
            let a = &k * BigInt::from_biguint(Sign::Plus, l2l.clone());
            let b = &k * BigInt::from_biguint(Sign::Plus, l2h.clone());
            if k.is_negative() {
                (b, a)
            } else {
                (a, b)
            }
        };
        // outward 1 ulp for the dq truncation
        let rl: BigInt = &dq - BigInt::one() - &kl2_hi;
        let rh: BigInt = &dq + BigInt::one() - &kl2_lo;
        if rl.is_negative() {
            k -= 1;
            continue;
        }
        let limit = BigInt::from_biguint(Sign::Plus, (&one_q * 3u32) >> 2u32);
        if rh > limit {
            k += 1;
            continue;
        }
        break (
            rl.magnitude().clone(),
            rh.magnitude().clone(),
        );
    };
    let ki = k.to_i64().ok_or(RealError::ExponentOverflow)?;
    // exp(r) = sum r^j / j!, r in [0, 0.75]
    let ceil_shift = |v: BigUint| -> BigUint { (&v + (&one_q - 1u32)) >> q };
    let mut tl = one_q.clone();
    let mut th = one_q.clone();
    let mut sl = BigUint::zero();
    let mut sh = BigUint::zero();
    let mut j: u64 = 0;
    loop {
        sl += &tl;
        sh += &th;
        j += 1;
        tl = ((&tl * &rl) >> q) / j;
        th = (ceil_shift(&th * &rh) + (j - 1)) / j;
        if j >= 2 && th <= BigUint::from(4u32) {
            // tail = sum_{i>=j} t_i <= t_j/(1-rho) with rho = r/(j+1) <= 1/3
            sh += &th << 1u32;
            break;
        }
        assert!(j < 100_000_000, "exp series failed to converge");
    }
    let lo = Dyadic::new(
        BigInt::from_biguint(Sign::Plus, sl),
        ki.checked_sub(q as i64)
            .ok_or(RealError::ExponentOverflow)?,
    );
    let hi = Dyadic::new(
        BigInt::from_biguint(Sign::Plus, sh),
        ki - q as i64,
    );
    Ok((lo, hi))
}

/// Enclosure of `ln 2` as a ball.
pub fn ln2(p: u32) -> Real {
    let q = p + 16;
    let (l, h) = ln2_fixed(q);
    Real::from_interval(
        Dyadic::new(BigInt::from_biguint(Sign::Plus, l), -(q as i64)),
        Dyadic::new(BigInt::from_biguint(Sign::Plus, h), -(q as i64)),
    )
    .round_ball(p)
}

/// Enclosure of `log x` for a positive big integer.
pub fn log_int(x: &BigInt, p: u32) -> Result<Real, RealError> {
    Real::from_bigint(x).ln(p)
}

/// Enclosure of `log x` for a positive rational.
pub fn log_ratio(x: &BigRational, p: u32) -> Result<Real, RealError> {
    Real::from_ratio(x, p + 8).ln(p)
}

/// Outcome of a certified inequality decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    True,
    False,
    Undecided,
}

/// Decide `a <= b` by evaluating both expressions at escalating precision
/// starting from `p_start` (at least 64), doubling until the enclosures
/// separate or `p_cap` is reached.
pub fn decide_leq<F, G>(a: F, b: G, p_start: u32, p_cap: u32) -> Decision
where
    F: Fn(u32) -> Real,
    G: Fn(u32) -> Real,
{
    let mut p = p_start.max(2);
    loop {
        let va = a(p);
        let vb = b(p);
        if va.le_certain(&vb) {
            return Decision::True;
        }
        if vb.lt_certain(&va) {
            return Decision::False;
        }
        if p >= p_cap {
            return Decision::Undecided;
        }
        p = p.saturating_mul(2).min(p_cap);
    }
}

/// Result of a certified `|log x| <= 2|x - 1|` check.
#[derive(Clone, Debug)]
pub struct LogDeviationCheck {
    /// Enclosure of `|log x|`.
    pub log_abs: Real,
    /// Enclosure of `2 |x - 1|`.
    pub double_dev: Real,
    /// Whether `sup |log x| <= inf 2|x-1|` was certified.
    pub certified: bool,
}

/// Precondition failures of [`log_deviation_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeviationError {
    /// Could not certify `|x - 1| <= 1/2`.
    DeviationTooLarge,
    /// The argument encloses nonpositive numbers.
    NonPositive,
}

/// Certify the small-deviation logarithm bound: for `|x - 1| <= 1/2`,
/// `|log x| <= 2 |x - 1|`. Returns both enclosures and the verdict.
pub fn log_deviation_check(x: &Real, p: u32) -> Result<LogDeviationCheck, DeviationError> {
    let dev = x.sub(&Real::one(), p + 8).abs();
    let half = Real::exact(Dyadic::pow2(-1));
    if !dev.le_certain(&half) {
        return Err(DeviationError::DeviationTooLarge);
    }
    if !x.is_positive_certain() {
        return Err(DeviationError::NonPositive);
    }
    let log_abs = x.ln(p).map_err(|_| DeviationError::NonPositive)?.abs();
    let double_dev = dev.mul_pow2(1);
    let certified = log_abs.le_certain(&double_dev);
    Ok(LogDeviationCheck {
        log_abs,
        double_dev,
        certified,
    })
}
