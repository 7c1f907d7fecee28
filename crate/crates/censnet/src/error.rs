use thiserror::Error;

/// Errors produced by the library.
///
/// The variants map onto the CLI exit codes: `Config` → 2, `Data`/`Parse` → 3,
/// everything numeric or contract-related → 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes do not line up for the requested kernel.
    #[error("shape mismatch in {op}: {details}")]
    Shape { op: &'static str, details: String },

    /// Input violates a structural precondition (asymmetry, duplicate edge, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A documented API contract was broken by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Bad run configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Dataset file failed to parse; carries the offending location.
    #[error("parse error in {path} (record {record}): {msg}")]
    Parse {
        path: String,
        record: usize,
        msg: String,
    },

    /// Dataset is structurally unusable (missing files, checksum mismatch, ...).
    #[error("data error: {0}")]
    Data(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Non-finite values or other runtime numeric failure.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(op: &'static str, details: impl Into<String>) -> Self {
        Error::Shape {
            op,
            details: details.into(),
        }
    }
}
