//! Exact symbolic engine for motivic multiple zeta values relative to `N`-th
//! roots of unity, `N ∈ {1, 2, 3, 4, 6, 8}`.
//!
//! The modules build on each other in order: exact rationals, words and
//! symbols, the coaction and its derivations, depth-1 reductions, the Galois
//! descent machinery, dimension counts, and a floating-point oracle.

pub mod coaction;
pub mod depth1;
pub mod descent;
pub mod dims;
pub mod error;
pub mod exactnum;
pub mod oracle;
pub mod words;

pub use error::{MzvError, Result};
