use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Every variant names the routine (or module) that rejected its input so
/// callers such as the CLI can attribute failures without extra context.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{routine}: argument out of domain: {detail}")]
    Domain { routine: &'static str, detail: String },

    #[error("alpha = {alpha} >= 2 has no discrete spectrum on (0, L); use the liouville module (half-line transform) instead")]
    UnsupportedRegime { alpha: f64 },

    #[error("{routine}: under-resolved input, {required} samples required but {available} given")]
    Resolution {
        routine: &'static str,
        required: usize,
        available: usize,
    },

    #[error("{routine}: degenerate input: {detail}")]
    DegenerateInput { routine: &'static str, detail: String },

    #[error("{routine}: exponent family is degenerate (duplicate exponents {first} and {second})")]
    DegenerateFamily {
        routine: &'static str,
        first: f64,
        second: f64,
    },

    #[error("fd_solver: invalid configuration: {0}")]
    Config(String),

    #[error("fd_solver: non-finite value detected at time step {step}")]
    Instability { step: usize },

    #[error("liouville: data support reaches X = {support_end} but truncation requires at most {limit} (Xmax too small for horizon)")]
    TruncationContamination { support_end: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(routine: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        routine,
        detail: detail.into(),
    }
}
