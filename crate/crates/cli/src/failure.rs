use std::fmt;

use newman_core::Error;

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or malformed files, violated guards.
    Usage(String),
    /// Sampling gave up, or a computed check did not hold.
    Algorithmic(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Algorithmic(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Algorithmic(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SamplingFailed { .. } | Error::ReductionFailed { .. } => {
                Failure::Algorithmic(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("malformed JSON: {e}"))
    }
}
