use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
    Core(attnet_core::Error),
}

impl CliError {
    /// 0 success, 1 degenerate data, 2 I/O or schema, 3 usage.
    pub fn exit_code(&self) -> u8 {
        use attnet_core::Error as E;
        match self {
            CliError::Usage(_) => 3,
            CliError::Io { .. } => 2,
            CliError::Core(e) if e.is_degenerate() => 1,
            CliError::Core(E::Io(_) | E::Csv(_) | E::Json(_) | E::Schema { .. }) => 2,
            CliError::Core(_) => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<attnet_core::Error> for CliError {
    fn from(e: attnet_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
