use thiserror::Error;

/// Failures surfaced by the command line layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("syntax error at column {}: {msg}", pos + 1)]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("'{name}' takes {} argument(s), got {got}", fmt_arities(expected))]
    Arity { name: String, expected: Vec<usize>, got: usize },
    #[error("type error: {0}")]
    Type(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("in `{expr}`: {source}")]
    Kernel { expr: String, source: twistlaurent::Error },
    #[error("check failed")]
    CheckFailed,
}

fn fmt_arities(a: &[usize]) -> String {
    a.iter().map(usize::to_string).collect::<Vec<_>>().join(" or ")
}

impl CliError {
    /// Process exit status.
    pub fn code(&self) -> i32 {
        match self {
            CliError::CheckFailed => 1,
            CliError::Syntax { .. } => 3,
            CliError::UnknownIdentifier(_) => 4,
            CliError::Arity { .. } => 5,
            CliError::Type(_) => 6,
            CliError::Io(_) => 7,
            CliError::Kernel { source, .. } => source.code(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
