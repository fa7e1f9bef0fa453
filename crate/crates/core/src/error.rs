use thiserror::Error;

/// Errors raised by the numerical and inferential routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The root-finding target is not bracketed by the supplied interval.
    #[error("target {target} not bracketed by f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    Bracket {
        target: f64,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A computed probability fell outside [0, 1] by more than rounding allows.
    #[error("probability {value} out of range in {func}")]
    OutOfRange { func: &'static str, value: f64 },

    /// Iterative procedure failed to reach its tolerance.
    #[error("no convergence in {func}: {detail}")]
    Convergence { func: &'static str, detail: String },

    /// Malformed caller input (grids, counts, configuration).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
