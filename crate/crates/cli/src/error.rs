use std::path::PathBuf;

use thiserror::Error;

use crate::config::FieldError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration {origin}:\n{}", list(errors))]
    Config { origin: String, errors: Vec<FieldError> },

    #[error("scenario {name} refused: {source}")]
    Regime { name: String, source: berryshift::Error },

    #[error("scenario {name} failed: {source}")]
    Numeric { name: String, source: berryshift::Error },

    #[error("I/O error at {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

fn list(errors: &[FieldError]) -> String {
    errors.iter().map(|e| format!("  - {e}")).collect::<Vec<_>>().join("\n")
}

impl CliError {
    /// 2 for configuration problems, 3 for numeric-regime refusals, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Numeric { .. } => 2,
            CliError::Regime { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn from_core(name: &str, source: berryshift::Error) -> Self {
        if source.is_regime_refusal() {
            CliError::Regime { name: name.to_string(), source }
        } else {
            CliError::Numeric { name: name.to_string(), source }
        }
    }

    pub(crate) fn config(origin: &str, field: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            origin: origin.to_string(),
            errors: vec![FieldError { field: field.to_string(), message: message.into() }],
        }
    }
}
