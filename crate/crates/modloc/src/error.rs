use std::path::PathBuf;

/// Everything that makes a run an input error (exit status 1).
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{path}:{line}:{column}: {msg}")]
    Parse { path: PathBuf, line: usize, column: usize, msg: String },
    #[error("invalid `{field}`: {msg}")]
    Invalid { field: String, msg: String },
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("unknown mode `{0}` (try one of: tomita, localize, boundary, pws, hormander, epstein, support-estimate, cauchy)")]
    UnknownMode(String),
    #[error("{context}: {source}")]
    Core { context: String, source: modloc_core::Error },
}

impl RunError {
    pub fn invalid(field: impl Into<String>, msg: impl Into<String>) -> Self {
        RunError::Invalid { field: field.into(), msg: msg.into() }
    }

    pub fn io(path: impl Into<PathBuf>, e: impl std::fmt::Display) -> Self {
        RunError::Io { path: path.into(), msg: e.to_string() }
    }

    pub fn parse(path: impl Into<PathBuf>, e: &serde_json::Error) -> Self {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let msg = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        RunError::Parse { path: path.into(), line: e.line(), column: e.column(), msg }
    }
}

/// Attaches a context label to core errors.
pub trait CoreContext<T> {
    fn ctx(self, context: &str) -> Result<T, RunError>;
}

impl<T> CoreContext<T> for Result<T, modloc_core::Error> {
    fn ctx(self, context: &str) -> Result<T, RunError> {
        self.map_err(|source| RunError::Core { context: context.to_string(), source })
    }
}
