use crate::format::ParseError;

/// Failure of a command, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum KitError {
    /// Bad input: unreadable file, syntax, or a manifold/map that fails validation.
    #[error("error: {0}")]
    Input(String),
    /// An internal consistency check failed.
    #[error("FATAL: {0}")]
    Fatal(String),
}

impl KitError {
    pub fn exit_code(&self) -> i32 {
        match self {
            KitError::Input(_) => 2,
            KitError::Fatal(_) => 3,
        }
    }

    pub fn parse(file: &str, e: ParseError) -> Self {
        KitError::Input(format!("{}:{}", file, e))
    }
}

impl From<segre_core::Error> for KitError {
    fn from(e: segre_core::Error) -> Self {
        match e {
            segre_core::Error::Fatal(m) => KitError::Fatal(m),
            other => KitError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for KitError {
    fn from(e: std::io::Error) -> Self {
        KitError::Input(e.to_string())
    }
}
