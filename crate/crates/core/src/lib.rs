//! Exact and certified arithmetic for the equation `y^a = F_n + F_m` where
//! `y` has a short Zeckendorf representation.
//!
//! The crate provides:
//!
//! * exact Fibonacci/Lucas arithmetic, Zeckendorf encoding and perfect-power
//!   detection on big integers ([`fib`], [`zeck`], [`power`]),
//! * exact arithmetic in the ring `Z[phi]` of golden-ratio integers,
//!   including norms, `sqrt(5)`-adic valuations and height bounds ([`quad`]),
//! * rigorous midpoint–radius real arithmetic with automatic precision
//!   escalation for inequality decisions ([`real`]),
//! * construction and certification of the linear forms in logarithms that
//!   control the equation ([`linform`]),
//! * Matveev's explicit lower bound for linear forms in logarithms and the
//!   step constant derived from it ([`matveev`]),
//! * the step-walking machinery that turns the per-step bounds into an
//!   explicit upper bound for `n` for every Hamming weight `k` ([`pipeline`]),
//! * a brute-force solution search at desk scale ([`search`]).
//!
//! Everything is `no_std` + `alloc`; all values are immutable and all
//! operations are pure, so the whole crate is safe to use from many threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod fib;
pub mod linform;
pub mod matveev;
pub mod pipeline;
pub mod power;
pub mod quad;
pub mod real;
pub mod search;
pub mod zeck;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
