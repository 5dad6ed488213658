use std::fmt;

/// Failure classes, each mapped to a process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, missing inputs, unusable configuration.
    Usage(String),
    /// Malformed graph6 input.
    Parse(String),
    /// Counts disagree with a configured expectation.
    Mismatch(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "error: {m}"),
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Mismatch(m) => write!(f, "expectation mismatch: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<folkman_core::Error> for Failure {
    fn from(e: folkman_core::Error) -> Self {
        match e {
            folkman_core::Error::Graph6 { .. } => Failure::Parse(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;
