use branchcurve_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Symmetry(String),
    #[error("{0}")]
    SingularTime(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Assertion(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Symmetry(_) => 3,
            CliError::SingularTime(_) => 4,
            CliError::Degenerate(_) => 5,
            CliError::Io(_) | CliError::Assertion(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Domain { .. } | CoreError::InfiniteSingularTime(_) => CliError::SingularTime(msg),
            CoreError::DegenerateInput(_) => CliError::Degenerate(msg),
            CoreError::TraceMismatch { .. } | CoreError::NotSymmetric { .. } => CliError::Symmetry(msg),
            CoreError::InvalidGeometry(_)
            | CoreError::InvalidArgument(_)
            | CoreError::DegenerateLine
            | CoreError::ZeroSpinor => CliError::Schema(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
