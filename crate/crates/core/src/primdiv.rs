//! Primitive-divisor screens.
//!
//! Two filters decide when a prime `p` cannot be the only prime factor of a
//! term of a Lucas sequence:
//!
//! * [`carmichael_screen`] for the X-coordinates of Pell solutions: terms with
//!   index above 12 have a primitive prime factor `= +-1 (mod m)`, so they can
//!   only be powers of `p` when `p = +-1 (mod m)`; smaller indices are checked
//!   directly.
//! * [`congruence_screen`] for `u_n = (alpha^n - conj(alpha)^n) / (alpha - conj(alpha))`
//!   with `alpha` in Z[i]: a primitive divisor `q` satisfies `q = (-1|q) (mod n)`.
//!
//! The finitely many Lucas numbers with no primitive divisor are looked up in
//! [`DefectiveTable`], shipped as `data/defective_lucas_pairs.txt`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gaussian::GaussianInteger;
use crate::ntheory;
use crate::pell::{self, SignPolicy};

/// Beyond this index every Pell X-coordinate has a primitive prime factor.
pub const CARMICHAEL_THRESHOLD: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScreenReason {
    CarmichaelLargeIndex,
    CongruenceContradiction,
    DirectCheck,
    DefectiveTableHit,
}

impl fmt::Display for ScreenReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScreenReason::CarmichaelLargeIndex => "carmichael large index",
            ScreenReason::CongruenceContradiction => "congruence contradiction",
            ScreenReason::DirectCheck => "direct check",
            ScreenReason::DefectiveTableHit => "defective table hit",
        })
    }
}

/// Outcome of a screen. An exclusion always carries its reason; a survivor
/// may carry the reason it survived (e.g. a direct hit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenVerdict {
    excluded: bool,
    reason: Option<ScreenReason>,
}

impl ScreenVerdict {
    pub fn excluded(reason: ScreenReason) -> Self {
        ScreenVerdict {
            excluded: true,
            reason: Some(reason),
        }
    }

    pub fn survives(reason: Option<ScreenReason>) -> Self {
        ScreenVerdict {
            excluded: false,
            reason,
        }
    }

    pub fn is_excluded(&self) -> bool {
        self.excluded
    }

    pub fn reason(&self) -> Option<ScreenReason> {
        self.reason
    }
}

impl fmt::Display for ScreenVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.excluded, self.reason) {
            (true, Some(r)) => write!(f, "excluded: {r}"),
            (false, Some(r)) => write!(f, "not excluded: {r}"),
            _ => f.write_str("not excluded"),
        }
    }
}

/// One directly checked term `X_m` of the Pell X-sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectCheck {
    pub m: u64,
    #[serde(with = "crate::decimal")]
    pub x: BigInt,
    /// `e` with `X_m = p^e`, if any. `e = 0` is the trivial `X = 1`.
    pub power_exponent: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarmichaelReport {
    #[serde(with = "crate::decimal")]
    pub d: BigInt,
    pub p: u64,
    pub m_bound: u64,
    pub verdict: ScreenVerdict,
    /// `X_0, ..., X_{m_bound}`.
    pub direct: Vec<DirectCheck>,
}

impl CarmichaelReport {
    /// Indices where `X_m = p^0 = 1`; left to the caller to accept or discard.
    pub fn trivial_hits(&self) -> Vec<u64> {
        self.direct
            .iter()
            .filter(|c| c.power_exponent == Some(0))
            .map(|c| c.m)
            .collect()
    }

    /// Indices where `X_m = p^e` with `e >= 1`.
    pub fn nontrivial_hits(&self) -> Vec<u64> {
        self.direct
            .iter()
            .filter(|c| matches!(c.power_exponent, Some(e) if e >= 1))
            .map(|c| c.m)
            .collect()
    }
}

/// Decides whether some `X_m` (X-coordinate of the `m`-th power of the
/// fundamental unit of `Z[sqrt(D)]`) can be `p^e` with `e >= 1`.
///
/// Indices `m <= m_bound` are checked directly from a freshly computed
/// [`pell::x_sequence`]. Larger indices are excluded when `p + 1 <= m_bound`,
/// since then `p = +-1 (mod m)` is impossible for every `m > m_bound`; this
/// needs `m_bound >= 12` for the primitive divisor theorem to apply.
pub fn carmichael_screen(d: &BigInt, p: u64, m_bound: u64) -> Result<CarmichaelReport> {
    if !ntheory::is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let xs = pell::x_sequence(d, SignPolicy::Interleaved, m_bound as usize + 1)?;
    let direct: Vec<DirectCheck> = xs
        .into_iter()
        .zip(0u64..)
        .map(|(x, m)| DirectCheck {
            m,
            power_exponent: ntheory::is_power_of(&x, p),
            x,
        })
        .collect();
    let mut report = CarmichaelReport {
        d: d.clone(),
        p,
        m_bound,
        verdict: ScreenVerdict::survives(None),
        direct,
    };
    report.verdict = if !report.nontrivial_hits().is_empty() {
        ScreenVerdict::survives(Some(ScreenReason::DirectCheck))
    } else if m_bound >= CARMICHAEL_THRESHOLD && p < m_bound {
        ScreenVerdict::excluded(ScreenReason::CarmichaelLargeIndex)
    } else {
        ScreenVerdict::survives(None)
    };
    Ok(report)
}

/// Whether `p` can be a primitive divisor of `u_n` for a Z[i] Lucas pair:
/// excluded unless `p = (-1|p) (mod n)`.
pub fn congruence_screen(p: u64, n: u64) -> Result<ScreenVerdict> {
    if n < 5 || !ntheory::is_prime(n) {
        return domain(format!("exponent must be a prime >= 5, got {n}"));
    }
    let sign = ntheory::legendre(&BigInt::from(-1), p)?;
    let target = if sign > 0 { 1 } else { n - 1 };
    Ok(if p % n != target {
        ScreenVerdict::excluded(ScreenReason::CongruenceContradiction)
    } else {
        ScreenVerdict::survives(None)
    })
}

/// The Lucas pair `(alpha, conj(alpha))` of Z[i] at a prime index `n >= 5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasPairZi {
    alpha: GaussianInteger,
    n: u64,
}

impl LucasPairZi {
    pub fn new(alpha: GaussianInteger, n: u64) -> Result<Self> {
        if alpha.im.is_zero() {
            return domain(format!("degenerate pair: alpha = {alpha} is real"));
        }
        if n < 5 || !ntheory::is_prime(n) {
            return domain(format!("index must be a prime >= 5, got {n}"));
        }
        Ok(LucasPairZi { alpha, n })
    }

    pub fn alpha(&self) -> &GaussianInteger {
        &self.alpha
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(alpha - conj(alpha))^2 = -4 v^2`.
    pub fn discriminant(&self) -> BigInt {
        -(&self.alpha.im * &self.alpha.im * BigInt::from(4))
    }
}

/// A row `alpha = (a + sqrt(b)) / 2` of the defective-pairs table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectiveRow {
    pub n: u64,
    #[serde(with = "crate::decimal")]
    pub a: BigInt,
    #[serde(with = "crate::decimal")]
    pub b: BigInt,
}

impl DefectiveRow {
    /// Whether the row is a pair `u + iv, u - iv`: then `a = 2u`, `b = -4v^2`.
    pub fn gaussian_root(&self) -> Option<GaussianInteger> {
        if !self.b.is_negative()
            || (&self.a % 2u32) != BigInt::zero()
            || (&self.b % 4u32) != BigInt::zero()
        {
            return None;
        }
        let v = ntheory::exact_root(&(-&self.b / 4), 2)?;
        Some(GaussianInteger::new(&self.a / 2, v))
    }

    pub fn matches(&self, pair: &LucasPairZi) -> bool {
        self.n == pair.n
            && self.a.abs() == (&pair.alpha.re * BigInt::from(2)).abs()
            && self.b == pair.discriminant()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectiveTable {
    rows: Vec<DefectiveRow>,
}

const BUILTIN_TABLE: &str = include_str!("../data/defective_lucas_pairs.txt");

impl DefectiveTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_TABLE).expect("shipped table parses")
    }

    /// Reads `n a b` rows; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [n, a, b] = fields[..] else {
                return Err(Error::Parse(format!(
                    "line {}: expected `n a b`, got {line:?}",
                    lineno + 1
                )));
            };
            let n = n
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("line {}: bad index {n:?}", lineno + 1)))?;
            rows.push(DefectiveRow {
                n,
                a: ntheory::parse_bigint(a)?,
                b: ntheory::parse_bigint(b)?,
            });
        }
        Ok(DefectiveTable { rows })
    }

    pub fn rows(&self) -> &[DefectiveRow] {
        &self.rows
    }

    pub fn max_index(&self) -> u64 {
        self.rows.iter().map(|r| r.n).max().unwrap_or(0)
    }

    /// Rows at index `n` whose roots lie in Z[i].
    pub fn gaussian_rows(&self, n: u64) -> Vec<&DefectiveRow> {
        self.rows
            .iter()
            .filter(|r| r.n == n && r.gaussian_root().is_some())
            .collect()
    }

    pub fn check(&self, pair: &LucasPairZi) -> bool {
        self.rows.iter().any(|r| r.matches(pair))
    }
}

/// Whether `(alpha, conj(alpha), n)` is a tabulated defective triple.
pub fn defective_table_check(pair: &LucasPairZi) -> bool {
    DefectiveTable::builtin().check(pair)
}
