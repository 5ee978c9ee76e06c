use thiserror::Error;

/// Errors raised by the numerical kernels and the sweep driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace is {trace:.15}, expected 1")]
    BadTrace { trace: f64 },

    #[error("state vector is not normalized (squared norm {norm_sqr:.15})")]
    NotNormalized { norm_sqr: f64 },

    #[error("{name} = {value} is outside its domain: {reason}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    #[error("invalid config field `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("numerical failure at length {length} km: {source}")]
    AtLength {
        length: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("column `{0}` was not computed for this sweep")]
    ColumnNotComputed(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::OutOfDomain {
            name,
            value,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
