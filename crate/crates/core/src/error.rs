use alloc::string::String;

/// Errors reported by the core crate.
///
/// The variants map one-to-one onto the exit codes of the command line tool:
/// configuration and domain errors are user mistakes, numerical failures and
/// aborted simulations are runtime failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("simulation aborted after {events} events: {reason}")]
    SimulationAborted { events: usize, reason: String },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for failures that happen while computing (as opposed to bad input).
    pub fn is_runtime(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::SimulationAborted { .. })
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
