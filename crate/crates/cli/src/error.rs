use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] dfspec::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 bad input, 3 I/O, 4 missing fixture, 5 solver failure.
    pub fn exit_code(&self) -> u8 {
        use dfspec::Error as E;
        match self {
            CliError::BadInput(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                E::Domain(_)
                | E::NotBound { .. }
                | E::Parse { .. }
                | E::InvalidParameter { .. }
                | E::DuplicateName(_)
                | E::UnknownMolecule(_) => 2,
                E::Io(_) | E::Csv(_) => 3,
                E::MissingFixture { .. } => 4,
                E::NoClassicalRegion { .. } | E::StepTooLarge(_) | E::Solver(_) => 5,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
