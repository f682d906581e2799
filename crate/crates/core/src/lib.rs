//! Rational distance sets on the parabola `y = x²`.
//!
//! Two points `(a, a²)` and `(b, b²)` are at rational distance exactly when
//! `a + b` is a Pythagorean ratio, a rational `q` with `1 + q²` a rational
//! square. This crate enumerates such ratios, solves the pair-sum system for
//! point sets, checks them against a direct distance oracle and searches
//! bounded ratio pools exhaustively.

#[cfg(feature = "cli")]
pub mod cli;
pub mod linalg;
pub mod number;
pub mod pythagorean;
pub mod search;
pub mod solver;
pub mod store;
pub mod tables;

pub use number::{NumberError, Rat};
pub use pythagorean::{build_pool, primitive_triplets, RatioPool, Triplet};
pub use search::{count_solutions, search, CountReport, EnumerationMode, GpFilter, SearchConfig, SearchError};
pub use solver::{solve, solve_x, verify_rds, Solution, SolutionKey, SolverError};
