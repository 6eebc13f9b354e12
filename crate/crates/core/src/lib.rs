//! Exact symbolic engine for a three-parameter deformation of the oscillator
//! algebra: the defining R-matrix, the differential calculi it generates, and
//! the quantum group acting on everything. All arithmetic is exact over
//! Q(q, u, s); every claim checked by the verification suites reduces to a
//! symbolic zero.

pub mod calculus;
pub mod error;
pub mod fixtures;
pub mod freealg;
pub mod latex;
pub mod parser;
pub mod quantumgroup;
pub mod report;
pub mod rewrite;
pub mod rmatrix;
pub mod scalar;
pub mod suites;

pub use error::{CoreError, Result};
