use thiserror::Error;

/// Errors produced by the series toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible exponent grid: {0}")]
    IncompatibleGrid(String),

    #[error("insufficient truncation: need exponent {needed}, series known below {available}")]
    InsufficientTruncation { needed: String, available: String },

    #[error("cannot invert a series with no known nonzero coefficient")]
    ZeroInversion,

    #[error("series is not normalized (q^-1 + zero constant term + integral exponents): {0}")]
    NotNormalized(String),

    #[error("non-integral coefficient {value} at {location}")]
    NonIntegral { location: String, value: String },

    #[error("cannot normalize so that c(1) = 1: c(1) = {0}")]
    CannotNormalize(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("replicate f^({0}) missing from family")]
    MissingReplicate(u64),

    #[error("Grunsky table too small: need grade {needed}, table has grade {available}")]
    TableTooSmall { needed: u64, available: u64 },

    #[error("no reducing pair at grade {0}, although the grade is not irreducible")]
    DescentFailure(u64),

    #[error("recurrence cannot determine a_{0}: {1}")]
    Underdetermined(u64, String),
}

pub type Result<T> = std::result::Result<T, Error>;
