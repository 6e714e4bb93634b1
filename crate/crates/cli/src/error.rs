use std::path::PathBuf;

use resprune::Error as CoreError;

/// Process exit codes. Clap's own usage errors exit with 2.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INPUT_MISSING: i32 = 3;
    pub const INPUT_FORMAT: i32 = 4;
    pub const INVALID: i32 = 5;
    pub const OUTPUT: i32 = 6;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}", describe_input(path, source))]
    Input {
        path: PathBuf,
        #[source]
        source: CoreError,
    },

    #[error(transparent)]
    Invalid(#[from] CoreError),

    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

impl CliError {
    pub fn input(path: impl Into<PathBuf>, source: CoreError) -> Self {
        CliError::Input {
            path: path.into(),
            source,
        }
    }

    pub fn output(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Output {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Input { source, .. } => match source {
                CoreError::Io { .. } => exit::INPUT_MISSING,
                CoreError::Header(_)
                | CoreError::Dtype(_)
                | CoreError::Rank { .. }
                | CoreError::Payload { .. }
                | CoreError::Overflow(_)
                | CoreError::NonFinite { .. }
                | CoreError::KeepMask(_)
                | CoreError::Json(_)
                | CoreError::Empty(_) => exit::INPUT_FORMAT,
                _ => exit::INVALID,
            },
            CliError::Invalid(_) => exit::INVALID,
            CliError::Output { .. } => exit::OUTPUT,
        }
    }
}

fn describe_input(path: &std::path::Path, source: &CoreError) -> String {
    match source {
        CoreError::Io { .. } => source.to_string(),
        _ => format!("{}: {source}", path.display()),
    }
}

/// Attaches the input path to a core error.
pub trait InputContext<T> {
    fn for_input(self, path: &std::path::Path) -> Result<T, CliError>;
}

impl<T> InputContext<T> for resprune::Result<T> {
    fn for_input(self, path: &std::path::Path) -> Result<T, CliError> {
        self.map_err(|e| CliError::input(path, e))
    }
}
