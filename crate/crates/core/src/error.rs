//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Failure modes of the laboratory, split between input validation and
/// genuine numerical breakdown so callers can map them to exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A sample or parameter was NaN/∞; carries the first offending index.
    NonFinite { what: &'static str, index: usize },
    /// A precondition on arguments failed (grid mismatch, bad exponent, ...).
    Invalid(String),
    /// The shooting solver found no sign change in the scan window.
    NoGroundStateBracket { p: f64, a_max: f64 },
    /// A computed ground-state profile failed its Pohozaev gate.
    ProfileRejected {
        mass_residual: f64,
        grad_residual: f64,
    },
    /// The Gagliardo–Nirenberg attainment cross-check failed.
    GnAttainmentViolated { relative_error: f64 },
    /// Rescaling pushed more than half of the field support off the grid.
    ResampleUnderresolved { lambda: f64 },
    /// A table potential has a tail too fat for the global Kato integral.
    KatoNormDivergent,
    /// Threshold machinery was asked for a gap on the wrong side of 1.
    NotBelowThreshold { ratio: f64 },
    /// Root finding failed to bracket or converge.
    RootFindingFailed(&'static str),
    /// The time stepper produced non-finite values before any blow-up
    /// criterion fired.
    Underresolved { t: f64 },
    /// A diagnostic needs more stored snapshots than the trace holds.
    TooFewSnapshots { have: usize, need: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { what, index } => {
                write!(f, "non-finite {what} at index {index}")
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::NoGroundStateBracket { p, a_max } => write!(
                f,
                "no ground state bracket for p = {p} in a ∈ [1, {a_max}]"
            ),
            Error::ProfileRejected {
                mass_residual,
                grad_residual,
            } => write!(
                f,
                "profile rejected: Pohozaev residuals {mass_residual:.3e} (mass), {grad_residual:.3e} (gradient)"
            ),
            Error::GnAttainmentViolated { relative_error } => write!(
                f,
                "GN attainment violated: cross-check off by {relative_error:.3e}"
            ),
            Error::ResampleUnderresolved { lambda } => {
                write!(f, "resample underresolved at lambda = {lambda}")
            }
            Error::KatoNormDivergent => write!(f, "Kato norm divergent"),
            Error::NotBelowThreshold { ratio } => {
                write!(f, "not below threshold (ratio = {ratio})")
            }
            Error::RootFindingFailed(what) => write!(f, "root finding failed: {what}"),
            Error::Underresolved { t } => write!(f, "underresolved at t = {t}"),
            Error::TooFewSnapshots { have, need } => {
                write!(f, "inconclusive: {have} snapshots stored, need {need}")
            }
        }
    }
}

impl Error {
    /// True for errors that indicate bad input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Invalid(_) | Error::NonFinite { .. })
    }
}
