use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The non-primitive tuple falls in the `2k = nb <= 2a` case, which
    /// becomes `X^2 + 1 = Y^n` and has no solutions.
    #[error("reduces to X^2 + 1 = Y^{n} (Lebesgue), no solution: a={a}, b={b}, k={k}")]
    ReducesToLebesgue { a: u64, b: u64, k: u64, n: u64 },

    /// Neither case of the 11-adic split applies, so the tuple was not a solution.
    #[error("malformed tuple: {0}")]
    Malformed(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A computed result failed its own consistency check.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
