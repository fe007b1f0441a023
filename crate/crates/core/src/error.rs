//! Error type shared by every module of the toolkit.

use thiserror::Error;

/// Failure modes of the census, weight-table, and rank-bound computations.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested prime is outside the supported range (p >= 5).
    #[error("prime {0} is not supported; local computations require p >= 5")]
    UnsupportedPrime(u64),

    /// The prime collides with the torsion order (for example p = 5 for
    /// Z/5Z), where the parametrization degenerates.
    #[error("prime {p} is not admissible for torsion group {group}")]
    InadmissiblePrime { group: &'static str, p: u64 },

    /// The torsion group does not support the requested operation.
    #[error("torsion group {group} does not support {operation}")]
    UnsupportedGroup {
        group: &'static str,
        operation: &'static str,
    },

    /// A Tate-form parameter hit a pole of the coefficient map.
    #[error("parameter {t} is a pole of the Tate-form coefficient map for {group}")]
    TateformPole { group: &'static str, t: String },

    /// An enumeration region touched its scan box, so completeness of the
    /// census cannot be guaranteed.
    #[error("census scan box for {group} at X = {x} is too small; enlarge the region margins")]
    RegionNotExhausted { group: &'static str, x: f64 },

    /// Adaptive area refinement failed to converge to the requested
    /// tolerance.
    #[error("region area for {group} did not converge to tolerance {tol} after {iterations} refinements")]
    AreaNotConverged {
        group: &'static str,
        tol: f64,
        iterations: u32,
    },

    /// A rank threshold too small for the tail bound to say anything.
    #[error("rank threshold {threshold} is vacuous; the tail bound needs threshold > {minimum}")]
    VacuousThreshold { threshold: i64, minimum: String },

    /// An exponent pattern outside the scope of the trace formula.
    #[error("invalid trace-formula pattern: {0}")]
    InvalidPattern(String),

    /// Required local data is missing from a census or cache.
    #[error("missing data: {0}")]
    MissingData(String),

    /// A persisted file failed its integrity check.
    #[error("integrity failure in {file} at line {line}: {reason}")]
    Integrity {
        file: String,
        line: usize,
        reason: String,
    },

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
