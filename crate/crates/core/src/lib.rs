//! Mechanized solution of the exponential Diophantine equation
//! `x^2 + 11^(2k) = y^n` (`x, y, k >= 1`, `n >= 3`).
//!
//! The only solutions are `(2 * 11^(3l), 5 * 11^(2l), 1 + 3l, 3)` for
//! `l >= 0`. [`solver`] derives this and emits a [`solver::Certificate`] for
//! each case it rules out; [`oracle`] cross-checks by exhaustive search.
//!
//! Supporting modules: [`ntheory`] (integer roots, Legendre symbol, trial
//! division), [`gaussian`] (Z[i]), [`pell`] (`X^2 - D Y^2 = N`), [`lucas`]
//! (binary recurrences) and [`primdiv`] (primitive-divisor screens).

pub mod cli;
pub mod error;
pub mod gaussian;
pub mod lucas;
pub mod ntheory;
pub mod oracle;
pub mod pell;
pub mod primdiv;
pub mod solver;

pub use error::{Error, Result};
pub use gaussian::GaussianInteger;
pub use lucas::BinaryRecurrence;
pub use oracle::SearchBounds;
pub use pell::{PellProblem, QuadPair};
pub use primdiv::{LucasPairZi, ScreenReason, ScreenVerdict};
pub use solver::{Certificate, SolutionTuple};

/// Serde adapter writing big integers as decimal strings.
pub(crate) mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| D::Error::custom(format!("not a decimal integer: {s:?}")))
    }
}
