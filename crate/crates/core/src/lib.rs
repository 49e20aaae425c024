//! Exact solver for integer linear programs
//! `max { c^T x : A x = b, x in Z^n, x >= 0 }`
//! whose constraint matrix has a small, fixed number of rows.
//!
//! The solver runs a divide-and-conquer dynamic program over boxes of
//! right-hand sides: level `i` holds the best objective for every target
//! within a fixed radius of the scaled right-hand side `2^(i-K) * b`, and two
//! copies of level `i-1` merge into level `i` by pairwise addition. The box
//! radius is governed by a certified hereditary-discrepancy bound for the
//! columns of `A`, which is what keeps the tables small; merging is a
//! convolution and can run through an exact number-theoretic transform.
//!
//! Around that core live: an LP-vertex proximity reduction that shrinks large
//! right-hand sides before the dynamic program runs, structure-preserving
//! rewrites (single-row programs from knapsacks, digit-splitting one row into
//! several, bit-packing selection problems into one row), and applications
//! (unbounded knapsack, unbounded subset-sum, and a polynomial-approximation
//! scheme for makespan scheduling via configuration programs).

pub mod convolution;
pub mod discrepancy;
pub mod dp;
pub mod error;
pub mod instance;
pub mod proximity;
pub mod reductions;
pub mod applications;

mod util;

pub use error::{Error, Result};
pub use instance::{
    format_instance, max_abs_entry, normalize, parse_instance, IlpInstance, NormalizedInstance,
    Solution, SolveStatus,
};
