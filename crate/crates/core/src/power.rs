//! Perfect-power detection with canonical maximal exponent.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// Primes up to `n` by trial sieve (exponent candidates are tiny).
fn primes_up_to(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    'outer: for c in 2..=n {
        for p in &out {
            if p * p > c {
                break;
            }
            if c % p == 0 {
                continue 'outer;
            }
        }
        out.push(c);
    }
    out
}

/// If `s = y^a` for some `y >= 0`, `a >= 2`, returns such a pair with `a`
/// maximal (so 16 is reported as `(2, 4)`, not `(4, 2)`).
///
/// Degenerate values use the fixed conventions `0 = 0^2` and `1 = 1^2`.
/// Panics on negative input.
pub fn perfect_power(s: &BigInt) -> Option<(BigInt, u32)> {
    assert!(!s.is_negative(), "perfect_power requires s >= 0");
    let mag = s.magnitude();
    if mag.is_zero() {
        return Some((BigInt::zero(), 2));
    }
    if mag.is_one() {
        return Some((BigInt::one(), 2));
    }
    let mut cur: BigUint = mag.clone();
    let mut a: u32 = 1;
    'outer: loop {
        // a prime exponent p can only work when 2^p <= cur
        let max_p = (cur.bits() as u32).saturating_sub(1).max(1);
        for p in primes_up_to(max_p) {
            let r = cur.nth_root(p);
            if r.pow(p) == cur {
                cur = r;
                a *= p;
                continue 'outer;
            }
        }
        break;
    }
    if a >= 2 {
        Some((BigInt::from(cur), a))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_powers() {
        assert_eq!(
            perfect_power(&BigInt::from(14930496u64)),
            Some((BigInt::from(3864), 2))
        );
        assert_eq!(perfect_power(&BigInt::from(1)), Some((BigInt::from(1), 2)));
        assert_eq!(perfect_power(&BigInt::from(0)), Some((BigInt::from(0), 2)));
        assert_eq!(perfect_power(&BigInt::from(16)), Some((BigInt::from(2), 4)));
        assert_eq!(perfect_power(&BigInt::from(4096)), Some((BigInt::from(2), 12)));
        assert_eq!(
            perfect_power(&BigInt::from(1000)),
            Some((BigInt::from(10), 3))
        );
    }

    #[test]
    fn non_powers() {
        for v in [2i64, 3, 5, 6, 7, 10, 12, 24, 99, 3864] {
            assert_eq!(perfect_power(&BigInt::from(v)), None, "{v}");
        }
    }

    #[test]
    fn exhaustive_small() {
        // compare against direct exhaustion for s <= 2000
        for s in 2i64..=2000 {
            let mut best: Option<(i64, u32)> = None;
            for a in 2u32..=11 {
                let mut y = 2i64;
                while y.pow(a) <= s {
                    if y.pow(a) == s {
                        best = match best {
                            Some((_, ba)) if ba >= a => best,
                            _ => Some((y, a)),
                        };
                    }
                    y += 1;
                }
            }
            let got = perfect_power(&BigInt::from(s));
            assert_eq!(
                got,
                best.map(|(y, a)| (BigInt::from(y), a)),
                "mismatch at {s}"
            );
        }
    }
}
