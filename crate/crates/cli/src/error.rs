use std::fmt;
use std::process::ExitCode;

use hassecount::counting::CountError;
use hassecount::curve::CurveError;
use hassecount::exceptions::ExceptionError;
use hassecount::field::FieldError;
use hassecount::order::OrderError;

/// A failed command, classified by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-range input (exit 2).
    Usage(String),
    /// Valid input the library cannot handle (exit 3).
    Domain(String),
    /// An internal invariant did not hold (exit 4).
    Internal(String),
    /// A verification command ran and printed a report with failures.
    Failed { report: String, code: u8 },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Failed { code, .. } => *code,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Internal(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
            CliError::Failed { report, .. } => write!(f, "{report}"),
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        let msg = e.to_string();
        match e {
            FieldError::FieldTooLarge(_) => CliError::Domain(msg),
            FieldError::DivisionByZero | FieldError::NotASquare => CliError::Internal(msg),
            _ => CliError::Usage(msg),
        }
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::Field(f) => f.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<OrderError> for CliError {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::Curve(c) => c.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::ExcludedField(_) => CliError::Domain(e.to_string()),
            CountError::Curve(c) => c.into(),
            CountError::Order(o) => o.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<ExceptionError> for CliError {
    fn from(e: ExceptionError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
