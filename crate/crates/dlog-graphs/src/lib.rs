//! Exhaustive structural analysis of the functional graphs of `x -> g^x mod p`.
//!
//! For a prime modulus `p`, every base `g` in `1..p` turns modular
//! exponentiation into a self-map of `{1, ..., p-1}`, and hence into a
//! functional graph. The divisor `m = (p-1) / ord(g)` fixes the in-degree
//! profile of that graph: every node has in-degree 0 or `m`. This crate
//! provides the machinery to sweep all `p-1` bases for a prime, classify
//! each graph by `m`, measure its cycle and tail structure in linear time,
//! and compare the per-class averages against theoretical models:
//!
//! * [`numtheory`] — factorization, multiplicative orders, `m`-class
//!   classification, and construction of the transition table.
//! * [`graph`] — linear-time measurement of one functional graph, plus a
//!   quadratic reference implementation used as a testing oracle.
//! * [`asymptotics`] — predicted statistics for random mappings, random
//!   permutations, and random binary functional graphs, including numeric
//!   evaluation of the longest-cycle integral constant.
//! * [`series`] / [`enumerate`] — exact finite-`n` ground truth from
//!   truncated exponential generating functions with rational coefficients,
//!   cross-checked by brute-force enumeration of tiny graphs.
//! * [`sweep`], [`report`], [`output`], [`selftest`] — the parallel
//!   experiment driver with checkpoint/resume, table rendering, CSV/JSON
//!   emission, and built-in consistency checks.

pub mod asymptotics;
pub mod enumerate;
mod error;
pub mod graph;
pub mod numtheory;
pub mod output;
pub mod report;
pub mod selftest;
pub mod series;
pub mod sweep;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
