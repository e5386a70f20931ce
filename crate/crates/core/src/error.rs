use std::path::PathBuf;

use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{column}: {reason}")]
    Lex {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("{file}:{line}:{column}: expected {expected}")]
    Parse {
        file: String,
        line: usize,
        column: usize,
        expected: String,
    },

    #[error("class `{0}` is declared more than once")]
    DuplicateClass(String),

    #[error("inheritance cycle through {}", .0.join(" -> "))]
    InheritanceCycle(Vec<String>),

    #[error("class `{0}` has no module assignment")]
    UnmappedClass(String),

    #[error("model violates {} invariant(s): {}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<Violation>),

    #[error("schema error at {location}: {reason}")]
    Schema { location: String, reason: String },

    #[error("module `{0}` contains no classes")]
    EmptyModule(String),

    #[error("no input values")]
    EmptyInput,

    #[error("design matrix is rank deficient: {0}")]
    SingularMatrix(String),

    #[error("need more than {needed} rows for the fit, got {rows}")]
    InsufficientRows { rows: usize, needed: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("module `{0}` has no defect record")]
    MissingDefects(String),

    #[error("module `{0}` has no metrics record")]
    MissingMetrics(String),

    #[error("every region ratio is undefined")]
    AllUndefined,

    #[error("coefficient labels do not match the metric set: {0}")]
    LabelMismatch(String),

    #[error("history contains no defects")]
    NoDefectsInHistory,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable, greppable identifier printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Lex { .. } => "E_LEX",
            Error::Parse { .. } => "E_PARSE",
            Error::DuplicateClass(_) => "E_DUPLICATE_CLASS",
            Error::InheritanceCycle(_) => "E_INHERITANCE_CYCLE",
            Error::UnmappedClass(_) => "E_UNMAPPED_CLASS",
            Error::InvalidModel(_) => "E_INVALID_MODEL",
            Error::Schema { .. } => "E_SCHEMA",
            Error::EmptyModule(_) => "E_EMPTY_MODULE",
            Error::EmptyInput => "E_EMPTY_INPUT",
            Error::SingularMatrix(_) => "E_SINGULAR_MATRIX",
            Error::InsufficientRows { .. } => "E_INSUFFICIENT_ROWS",
            Error::Domain(_) => "E_DOMAIN",
            Error::MissingDefects(_) => "E_MISSING_DEFECTS",
            Error::MissingMetrics(_) => "E_MISSING_METRICS",
            Error::AllUndefined => "E_ALL_UNDEFINED",
            Error::LabelMismatch(_) => "E_LABEL_MISMATCH",
            Error::NoDefectsInHistory => "E_NO_DEFECTS",
            Error::Io { .. } => "E_IO",
        }
    }

    /// 2 for input/validation problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SingularMatrix(_) | Error::InsufficientRows { .. } | Error::Domain(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(location: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            reason: reason.into(),
        }
    }
}
