use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A response model was evaluated outside its domain (e.g. plasma at ξ = 0).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Optical data file could not be ingested.
    #[error("{path}: line {line}: {message}")]
    Ingest {
        path: String,
        line: usize,
        message: String,
    },

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    /// Quadrature or Matsubara summation failed to reach the requested
    /// tolerance. `partial` is the best estimate available when it gave up.
    #[error("convergence failure: {message} (partial estimate {partial:e})")]
    Convergence { message: String, partial: f64 },

    #[error("no transition: {0}")]
    NoTransition(String),

    /// Root search over μ(0) found no sign change in the allowed range.
    #[error("no root for μ(0) in [{lo}, {hi}]: pressure is {sign_lo} at μ(0) = {lo} and {sign_hi} at μ(0) = {hi}")]
    NoLocusRoot {
        lo: f64,
        hi: f64,
        sign_lo: &'static str,
        sign_hi: &'static str,
    },

    #[error("singular relation: {0}")]
    Singular(String),
}

impl Error {
    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Domain(_) | Self::Config(_) | Self::Ingest { .. } | Self::UnsupportedModel(_) => 2,
            Self::Convergence { .. } | Self::Singular(_) => 3,
            Self::NoTransition(_) | Self::NoLocusRoot { .. } => 4,
        }
    }
}
