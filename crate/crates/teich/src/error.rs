//! Error categories shared by every module of the toolkit.
//!
//! Each failure is tagged with the category it originated from so that
//! front-ends (the CLI in particular) can map failures to distinct exit
//! codes without inspecting message strings.

use std::fmt;

/// Toolkit-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the mathematical domain was violated
    /// (e.g. `t <= 0` for a symmetric difference, a point outside a chart).
    Domain(String),
    /// A structural invariant failed at runtime (monotonicity broken,
    /// `|mu| >= 1` at a node, orientation lost, ...).
    Invariant(String),
    /// A numerical procedure did not converge or produced a non-finite value.
    Numerics(String),
    /// Malformed serialized data (map tables, coefficient lists, configs).
    Format(String),
    /// Underlying I/O failure.
    Io(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
    pub fn numerics(msg: impl Into<String>) -> Self {
        Error::Numerics(msg.into())
    }
    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    /// Stable category name, used by the CLI for exit codes and diagnostics.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Invariant(_) => "invariant",
            Error::Numerics(_) => "numerics",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Invariant(m) => write!(f, "invariant violation: {m}"),
            Error::Numerics(m) => write!(f, "numerics error: {m}"),
            Error::Format(m) => write!(f, "format error: {m}"),
            Error::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
