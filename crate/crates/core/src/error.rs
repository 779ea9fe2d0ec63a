//! Error type shared by every module of the engine.

use thiserror::Error;

/// Failures surfaced by the engine.
///
/// The variants map onto the CLI exit codes: domain problems (malformed
/// input, unsupported configurations) exit with 2, certificate failures
/// exit with 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MzvError {
    /// A symbol, word or rational failed to parse or violates its invariants.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// A modulus, descent or table that the engine does not provide.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An argument outside the operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A linear system that should be invertible turned out singular.
    #[error("singular system at weight {n}, depth {p}, level {level}")]
    Singular { n: u32, p: u32, level: u32 },
    /// A matrix entry with negative P-adic valuation, or a failed triangularity check.
    #[error("certificate failure: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, MzvError>;
