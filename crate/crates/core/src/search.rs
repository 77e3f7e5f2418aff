//! Brute-force enumeration of `F_n + F_m = y^a` at desk scale, the solution
//! census under explicit counting conventions, and slices checking the
//! parity theorem (Luca–Patel) and the fixed-`y` size bound
//! (Kebli–Kihel–Larone–Luca) on everything found.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linform::{InstanceAB, InstanceError, PowerClaim};
use crate::power::perfect_power;
use crate::real::Real;
use crate::zeck::zeckendorf;

/// One solution of `F_n + F_m = y^a` with `n >= m >= 0` and canonical
/// maximal exponent `a >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub n: u64,
    pub m: u64,
    pub y: BigInt,
    pub a: u32,
    /// `F_n + F_m = y^a`.
    pub value: BigInt,
}

impl Solution {
    /// Zeckendorf weight of `y`, when defined (`y >= 1`).
    pub fn weight(&self) -> Option<usize> {
        crate::zeck::hamming_weight(&self.y).ok()
    }

    pub fn even_parity(&self) -> bool {
        (self.n - self.m).is_multiple_of(2)
    }
}

/// Fibonacci ladder `F_0 ... F_max_n` for sharded enumeration.
pub fn fib_ladder(max_n: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max_n as usize + 1);
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for _ in 0..=max_n {
        out.push(a.clone());
        let c = &a + &b;
        a = b;
        b = c;
    }
    out
}

/// All solutions with this exact `n` (one shard of the search).
/// `ladder` must contain `F_0 ..= F_n`.
pub fn enumerate_shard(n: u64, ladder: &[BigInt]) -> Vec<Solution> {
    let mut out = Vec::new();
    let fn_ = &ladder[n as usize];
    for m in 0..=n {
        let value = fn_ + &ladder[m as usize];
        if let Some((y, a)) = perfect_power(&value) {
            out.push(Solution {
                n,
                m,
                y,
                a,
                value,
            });
        }
    }
    out
}

/// All solutions with `n <= max_n`, sorted by `(n, m)`.
pub fn enumerate(max_n: u64) -> Vec<Solution> {
    let ladder = fib_ladder(max_n);
    let mut out = Vec::new();
    for n in 0..=max_n {
        out.extend(enumerate_shard(n, &ladder));
    }
    out
}

/// Independent second oracle: for every `s = F_n + F_m`, try all `y` up to
/// `sqrt(s)` and all exponents up to `log2 s` by plain exhaustion, with no
/// integer-root machinery. Slow; meant for small `max_n`.
pub fn enumerate_exhaustive(max_n: u64) -> Vec<Solution> {
    let ladder = fib_ladder(max_n);
    let mut out = Vec::new();
    for n in 0..=max_n {
        for m in 0..=n {
            let s = &ladder[n as usize] + &ladder[m as usize];
            if s.is_zero() {
                out.push(Solution {
                    n,
                    m,
                    y: BigInt::zero(),
                    a: 2,
                    value: s,
                });
                continue;
            }
            if s.is_one() {
                out.push(Solution {
                    n,
                    m,
                    y: BigInt::one(),
                    a: 2,
                    value: s,
                });
                continue;
            }
            // collect every (y, a) with y^a = s; keep the maximal exponent
            let mut best: Option<(BigInt, u32)> = None;
            let max_a = s.bits() as u32;
            for a in 2..=max_a {
                let mut y = BigInt::from(2);
                loop {
                    let pow = y.pow(a);
                    if pow > s {
                        break;
                    }
                    if pow == s {
                        best = match best {
                            Some((_, ba)) if ba >= a => best,
                            _ => Some((y.clone(), a)),
                        };
                        break;
                    }
                    y += BigInt::one();
                }
            }
            if let Some((y, a)) = best {
                out.push(Solution {
                    n,
                    m,
                    y,
                    a,
                    value: s,
                });
            }
        }
    }
    out
}

/// A counting convention for the census: whether the degenerate bases
/// `y \in {0, 1}` count, and whether `n = m` counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Convention {
    pub include_unit_y: bool,
    pub include_equal_indices: bool,
}

impl Convention {
    pub fn all() -> [Convention; 4] {
        [
            Convention {
                include_unit_y: true,
                include_equal_indices: true,
            },
            Convention {
                include_unit_y: true,
                include_equal_indices: false,
            },
            Convention {
                include_unit_y: false,
                include_equal_indices: true,
            },
            Convention {
                include_unit_y: false,
                include_equal_indices: false,
            },
        ]
    }

    pub fn admits(&self, s: &Solution) -> bool {
        (self.include_unit_y || s.y > BigInt::one())
            && (self.include_equal_indices || s.n != s.m)
    }
}

/// The census report: the full solution list, per-convention counts, and the
/// parity/size slices.
#[derive(Clone, Debug)]
pub struct CensusReport {
    pub max_n: u64,
    pub solutions: Vec<Solution>,
    pub counts: Vec<(Convention, usize)>,
    /// The count the literature reports for the known solutions.
    pub expected: usize,
    /// Conventions whose count equals `expected`.
    pub matching: Vec<Convention>,
    /// Solutions with `n ≡ m (mod 2)` and `n > 36` (must be empty).
    pub parity_violations: Vec<Solution>,
    /// Solutions with `y >= 2` failing `a < n < 6e29 (log y)^4` (must be
    /// empty; the bound side is certified with ball arithmetic).
    pub size_violations: Vec<Solution>,
}

/// Run the census to `max_n >= 36` and evaluate every slice.
pub fn census_check(max_n: u64, p: u32) -> CensusReport {
    assert!(max_n >= 36, "the census needs to reach the largest known solution");
    let solutions = enumerate(max_n);
    let expected = 18;
    let mut counts = Vec::new();
    let mut matching = Vec::new();
    for conv in Convention::all() {
        let c = solutions.iter().filter(|s| conv.admits(s)).count();
        counts.push((conv, c));
        if c == expected {
            matching.push(conv);
        }
    }
    let parity_violations = solutions
        .iter()
        .filter(|s| s.even_parity() && s.n > 36)
        .cloned()
        .collect();
    let coeff = crate::pipeline::fixed_y_bound_coefficient();
    let size_violations = solutions
        .iter()
        .filter(|s| s.y >= BigInt::from(2))
        .filter(|s| {
            // violation unless a < n and n < 6e29 (log y)^4 certified
            if s.a as u64 >= s.n {
                return true;
            }
            let log_y = crate::real::log_int(&s.y, p).expect("y >= 2");
            let rhs = log_y
                .powi(4, p)
                .expect("integer power")
                .mul_int(&coeff, p);
            !Real::from_bigint(&BigInt::from(s.n)).lt_certain(&rhs)
        })
        .cloned()
        .collect();
    CensusReport {
        max_n,
        solutions,
        counts,
        expected,
        matching,
        parity_violations,
        size_violations,
    }
}

/// Bridge a found solution to a linear-form instance: attaches the
/// Zeckendorf representation of `y` (requires `y >= 2`), and the power claim
/// whenever the solution is in reduced shape (`n - 2 >= m >= 2`); the
/// remaining cases are closed by elementary reductions, not by linear forms.
pub fn instance_of(sol: &Solution) -> Result<InstanceAB, InstanceError> {
    if sol.y < BigInt::from(2) {
        return Err(InstanceError::NonPositive);
    }
    let rep = zeckendorf(&sol.y).map_err(|_| InstanceError::NonPositive)?;
    let claim = if sol.m >= 2 && sol.n >= sol.m + 2 {
        Some(PowerClaim {
            a: sol.a,
            n: sol.n,
            m: sol.m,
        })
    } else {
        None
    };
    InstanceAB::new(sol.y.clone(), rep, claim)
}
