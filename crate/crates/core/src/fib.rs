//! Exact Fibonacci and Lucas numbers on big integers.
//!
//! Computed by fast doubling: `F_{2k} = F_k (2 F_{k+1} - F_k)` and
//! `F_{2k+1} = F_k^2 + F_{k+1}^2`, which needs `O(log n)` big-integer
//! multiplications.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// `(F_n, F_{n+1})` by fast doubling.
pub fn fib_pair(n: u64) -> (BigUint, BigUint) {
    if n == 0 {
        return (BigUint::zero(), BigUint::one());
    }
    let (a, b) = fib_pair(n >> 1);
    // 2 F_{k+1} - F_k >= 0 since F_{k+1} >= F_k
    let c = &a * ((&b << 1u32) - &a);
    let d = &a * &a + &b * &b;
    if n & 1 == 0 {
        (c, d)
    } else {
        let next = &c + &d;
        (d, next)
    }
}

/// `F_n` with `F_0 = 0`, `F_1 = 1`.
pub fn fib(n: u64) -> BigInt {
    BigInt::from(fib_pair(n).0)
}

/// `L_n` with `L_0 = 2`, `L_1 = 1`; uses `L_n = 2 F_{n+1} - F_n`.
pub fn lucas(n: u64) -> BigInt {
    let (f_n, f_n1) = fib_pair(n);
    BigInt::from((f_n1 << 1u32) - f_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib_iterative(n: u64) -> BigUint {
        let mut a = BigUint::zero();
        let mut b = BigUint::one();
        for _ in 0..n {
            let c = &a + &b;
            a = b;
            b = c;
        }
        a
    }

    #[test]
    fn base_values() {
        assert_eq!(fib(0), BigInt::from(0));
        assert_eq!(fib(1), BigInt::from(1));
        assert_eq!(fib(12), BigInt::from(144));
        assert_eq!(fib(36), BigInt::from(14930352u64));
        assert_eq!(lucas(0), BigInt::from(2));
        assert_eq!(lucas(1), BigInt::from(1));
        assert_eq!(lucas(10), BigInt::from(123));
    }

    #[test]
    fn doubling_matches_iteration() {
        for n in 0..=300u64 {
            assert_eq!(fib(n), BigInt::from(fib_iterative(n)), "F_{n}");
        }
    }

    #[test]
    fn lucas_from_neighbors() {
        for n in 1..=300u64 {
            assert_eq!(lucas(n), fib(n - 1) + fib(n + 1));
        }
    }
}
