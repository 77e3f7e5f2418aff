//! Zeckendorf representations: every positive integer is a unique sum of
//! non-consecutive Fibonacci numbers `F_i` with `i >= 2`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::fib::fib;

/// Strictly decreasing Fibonacci indices with gap at least 2 and minimum
/// index 2, representing the positive integer `sum F_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeckendorfRep {
    indices: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeckError {
    /// The encoded integer must be at least 1.
    NonPositive,
    /// Indices violate the decreasing/gap/minimum constraints.
    InvalidIndices,
}

impl fmt::Display for ZeckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeckError::NonPositive => write!(f, "value must be positive"),
            ZeckError::InvalidIndices => write!(f, "indices must be decreasing with gap >= 2 and minimum >= 2"),
        }
    }
}

impl ZeckendorfRep {
    /// Validates the invariants: nonempty, strictly decreasing with gaps of
    /// at least 2, smallest index at least 2.
    pub fn new(indices: Vec<u64>) -> Result<Self, ZeckError> {
        if indices.is_empty() {
            return Err(ZeckError::NonPositive);
        }
        for w in indices.windows(2) {
            if w[0] < w[1] + 2 {
                return Err(ZeckError::InvalidIndices);
            }
        }
        if *indices.last().unwrap() < 2 {
            return Err(ZeckError::InvalidIndices);
        }
        Ok(ZeckendorfRep { indices })
    }

    /// Indices in decreasing order (`n_1 > n_2 > ... > n_k`).
    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    /// Hamming weight `k`.
    pub fn weight(&self) -> usize {
        self.indices.len()
    }

    /// Largest index `n_1`.
    pub fn largest(&self) -> u64 {
        self.indices[0]
    }

    /// Smallest index `n_k`.
    pub fn smallest(&self) -> u64 {
        *self.indices.last().unwrap()
    }

    /// The represented integer.
    pub fn decode(&self) -> BigInt {
        let mut sum = BigInt::zero();
        for &i in &self.indices {
            sum += fib(i);
        }
        sum
    }
}

/// Greedy Zeckendorf encoding of a positive integer.
pub fn zeckendorf(y: &BigInt) -> Result<ZeckendorfRep, ZeckError> {
    if !y.is_positive() {
        return Err(ZeckError::NonPositive);
    }
    let target = y.magnitude().clone();
    // Fibonacci ladder F_2, F_3, ... up to the first value > target.
    let mut ladder: Vec<BigUint> = Vec::new();
    {
        let mut a = BigUint::from(1u32); // F_2
        let mut b = BigUint::from(2u32); // F_3
        while a <= target {
            ladder.push(a.clone());
            let c = &a + &b;
            a = b;
            b = c;
        }
    }
    let mut rest = target;
    let mut indices = Vec::new();
    let mut i = ladder.len(); // ladder[j] = F_{j+2}
    while !rest.is_zero() {
        while ladder[i - 1] > rest {
            i -= 1;
        }
        indices.push((i + 1) as u64);
        rest -= &ladder[i - 1];
        // the remainder is below F_{i} so the next pick skips an index anyway
        i = i.saturating_sub(2).max(1);
    }
    ZeckendorfRep::new(indices)
}

/// Zeckendorf Hamming weight of a positive integer.
pub fn hamming_weight(y: &BigInt) -> Result<usize, ZeckError> {
    Ok(zeckendorf(y)?.weight())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_encodings() {
        let r = zeckendorf(&BigInt::from(100)).unwrap();
        assert_eq!(r.indices(), &[11, 6, 4]);
        let r = zeckendorf(&BigInt::from(1)).unwrap();
        assert_eq!(r.indices(), &[2]);
        let r = zeckendorf(&BigInt::from(3864)).unwrap();
        assert_eq!(r.indices(), &[18, 16, 13, 10, 5]);
        assert_eq!(r.weight(), 5);
        assert_eq!(hamming_weight(&BigInt::from(3864)).unwrap(), 5);
        assert_eq!(hamming_weight(&BigInt::from(144)).unwrap(), 1);
    }

    #[test]
    fn rejects_nonpositive() {
        assert_eq!(zeckendorf(&BigInt::from(0)), Err(ZeckError::NonPositive));
        assert_eq!(zeckendorf(&BigInt::from(-7)), Err(ZeckError::NonPositive));
    }

    #[test]
    fn invariant_validation() {
        assert!(ZeckendorfRep::new(vec![5, 4]).is_err()); // gap 1
        assert!(ZeckendorfRep::new(vec![5, 1]).is_err()); // min index
        assert!(ZeckendorfRep::new(vec![]).is_err());
        assert!(ZeckendorfRep::new(vec![7, 5, 2]).is_ok());
    }

    #[test]
    fn round_trip_small() {
        for y in 1..=5000i64 {
            let v = BigInt::from(y);
            let rep = zeckendorf(&v).unwrap();
            assert_eq!(rep.decode(), v, "round trip failed at {y}");
        }
    }
}
