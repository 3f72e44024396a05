use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("state n={n}, l={l} is not bound (n_max = {})", fmt_n_max(*.n_max))]
    NotBound { n: u32, l: u32, n_max: Option<u32> },

    #[error("no classically allowed region at E = {energy} eV")]
    NoClassicalRegion { energy: f64 },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("molecule {name}: {field} must be positive and finite, got {value}")]
    InvalidParameter {
        name: String,
        field: &'static str,
        value: f64,
    },

    #[error("duplicate molecule name {0:?}")]
    DuplicateName(String),

    #[error("unknown molecule {0:?}")]
    UnknownMolecule(String),

    #[error("finite-difference step leaves the bound window: {0}")]
    StepTooLarge(String),

    #[error("no fixture for {molecule} at {}", .path.display())]
    MissingFixture { molecule: String, path: std::path::PathBuf },

    #[error("eigensolver failure: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn fmt_n_max(n_max: Option<u32>) -> String {
    n_max.map_or_else(|| "-1".to_string(), |n| n.to_string())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
