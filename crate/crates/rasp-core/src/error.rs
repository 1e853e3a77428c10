//! Error type shared across the crate.
//!
//! Variants are grouped by how a caller should react:
//!
//! * [`Error::Invalid`] — malformed input (parameters, schedules, data files).
//!   Fix the input and retry.
//! * [`Error::Infeasible`] — the request is well-formed but has no solution
//!   (degenerate hypotheses, budget too small).
//! * [`Error::Numerical`] — the computation could not be carried out reliably
//!   (singular information matrix, survivor underflow, non-convergence).

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-domain input. The message lists every violation,
    /// one `path: problem` entry per line.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Well-formed request with no attainable solution.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A numerical procedure failed or would return garbage.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Build an [`Error::Invalid`] from a list of `path: problem` entries.
    pub fn invalid_report(violations: &[String]) -> Self {
        Error::Invalid(violations.join("\n"))
    }

    /// Process exit code conventionally associated with this error kind:
    /// `2` invalid input, `3` infeasibility, `4` numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) => 2,
            Error::Infeasible(_) => 3,
            Error::Numerical(_) => 4,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_convention() {
        assert_eq!(Error::Invalid("x".into()).exit_code(), 2);
        assert_eq!(Error::Infeasible("x".into()).exit_code(), 3);
        assert_eq!(Error::Numerical("x".into()).exit_code(), 4);
    }

    #[test]
    fn invalid_report_joins_violations() {
        let e = Error::invalid_report(&["a: bad".into(), "b: worse".into()]);
        assert_eq!(e.to_string(), "invalid input: a: bad\nb: worse");
    }
}
