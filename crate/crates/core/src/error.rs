use thiserror::Error;

/// Errors raised by the library. Warnings that do not stop a computation
/// (under-determined systems, non-convergence) are carried in reports instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid coherence structure: {0}")]
    Structure(String),

    #[error("indeterminate phase reference: group {group} has zero anchor magnitude")]
    IndeterminateReference { group: usize },

    #[error("no usable anchor: all measured magnitudes are zero")]
    NoAnchor,

    #[error("field singularity: observation point coincides with source position")]
    Singularity,

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_)
            | Error::NonFinite(_)
            | Error::Singularity
            | Error::NoAnchor
            | Error::IndeterminateReference { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
