//! Exhaustive search for solutions of `x^2 + p^(2k) = y^n` in a box.
//!
//! Independent of the solver: every candidate value is tested with
//! [`ntheory::perfect_power`]. The x-range splits into disjoint chunks that
//! are searched without shared state and merged in sorted order, so the
//! result does not depend on the chunking or the worker count.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ntheory;
use crate::solver::SolutionTuple;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    #[serde(with = "crate::decimal")]
    pub x_max: BigInt,
    pub k_max: u64,
    pub n_max: u64,
    pub base_prime: u64,
}

impl SearchBounds {
    pub fn new(x_max: impl Into<BigInt>, k_max: u64, n_max: u64) -> Self {
        SearchBounds {
            x_max: x_max.into(),
            k_max,
            n_max,
            base_prime: 11,
        }
    }

    pub fn with_base_prime(mut self, p: u64) -> Self {
        self.base_prime = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.x_max.is_positive() || self.k_max == 0 {
            return domain("search bounds must be >= 1");
        }
        if self.n_max < 3 {
            return domain(format!("n_max must be >= 3, got {}", self.n_max));
        }
        if self.base_prime < 2 {
            return domain(format!("base must be >= 2, got {}", self.base_prime));
        }
        Ok(())
    }
}

/// Splits `1..=x_max` into `chunks` contiguous non-empty ranges.
fn partition(x_max: &BigInt, chunks: usize) -> Vec<(BigInt, BigInt)> {
    let chunks = BigInt::from(chunks.max(1));
    let size = (x_max + &chunks - 1u32) / &chunks;
    let mut out = Vec::new();
    let mut lo = BigInt::one();
    while lo <= *x_max {
        let hi = (&lo + &size - 1u32).min(x_max.clone());
        out.push((lo.clone(), &hi + 1u32));
        lo = hi + 1u32;
    }
    out
}

/// Exponents `n` in `3..=n_max` for which `v` is a perfect `n`-th power, with the roots.
fn power_hits(v: &BigInt, n_max: u64) -> Vec<(BigInt, u64)> {
    match ntheory::perfect_power(v).expect("v >= 2") {
        None => Vec::new(),
        Some((base, e)) => (3..=n_max.min(e as u64))
            .filter(|n| (e as u64).is_multiple_of(*n))
            .map(|n| (num_traits::pow(base.clone(), (e as u64 / n) as usize), n))
            .collect(),
    }
}

fn search_chunk(b: &SearchBounds, lo: &BigInt, hi: &BigInt) -> Vec<SolutionTuple> {
    let mut out = Vec::new();
    let p = BigInt::from(b.base_prime);
    let mut offset = BigInt::one();
    for k in 1..=b.k_max {
        offset *= &p * &p;
        // v = x^2 + p^(2k), advanced by (x+1)^2 - x^2 = 2x + 1
        let mut x = lo.clone();
        let mut v = &x * &x + &offset;
        while x < *hi {
            for (y, n) in power_hits(&v, b.n_max) {
                out.push(SolutionTuple::new_unchecked(x.clone(), y, k, n));
            }
            v += &x * 2u32 + 1u32;
            x += 1u32;
        }
    }
    out
}

fn sort_tuples(v: &mut [SolutionTuple]) {
    v.sort_by(|a, b| (&a.x, a.k, a.n).cmp(&(&b.x, b.k, b.n)));
}

/// All `(x, y, k, n)` in the box with `x^2 + p^(2k) = y^n`, ascending in `(x, k, n)`.
pub fn brute_force_search(b: &SearchBounds) -> Result<Vec<SolutionTuple>> {
    brute_force_search_chunked(b, 1)
}

/// [`brute_force_search`] over `chunks` disjoint x-ranges searched in parallel.
pub fn brute_force_search_chunked(b: &SearchBounds, chunks: usize) -> Result<Vec<SolutionTuple>> {
    b.validate()?;
    let parts = partition(&b.x_max, chunks);
    let mut out: Vec<SolutionTuple> = parts
        .par_iter()
        .map(|(lo, hi)| search_chunk(b, lo, hi))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    sort_tuples(&mut out);
    Ok(out)
}

/// Runs the chunked search on a dedicated pool of `jobs` worker threads.
pub fn brute_force_search_with_jobs(b: &SearchBounds, jobs: usize) -> Result<Vec<SolutionTuple>> {
    let jobs = jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    let chunks = if jobs == 1 { 1 } else { jobs * 4 };
    pool.install(|| brute_force_search_chunked(b, chunks))
}

/// True iff no `x` in `1..=x_max` and `n` in `3..=n_max` gives `x^2 + 1 = y^n`.
pub fn lebesgue_spot_check(x_max: &BigInt, n_max: u64) -> bool {
    if !x_max.is_positive() || n_max < 3 {
        return true;
    }
    let parts = partition(x_max, rayon::current_num_threads() * 4);
    parts.par_iter().all(|(lo, hi)| {
        let mut x = lo.clone();
        let mut v = &x * &x + 1u32;
        while x < *hi {
            if !power_hits(&v, n_max).is_empty() {
                return false;
            }
            v += &x * 2u32 + 1u32;
            x += 1u32;
        }
        true
    })
}

/// Writes tuples one per line as `x y k n`.
pub fn dump_tuples(tuples: &[SolutionTuple]) -> String {
    tuples
        .iter()
        .map(|t| format!("{} {} {} {}\n", t.x, t.y, t.k, t.n))
        .collect()
}

/// Inverse of [`dump_tuples`].
pub fn parse_dump(text: &str) -> Result<Vec<SolutionTuple>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split_whitespace().collect();
            let [x, y, k, n] = f[..] else {
                return Err(Error::Parse(format!("expected `x y k n`, got {line:?}")));
            };
            let small = |s: &str| {
                ntheory::parse_bigint(s)?
                    .to_u64()
                    .ok_or_else(|| Error::Parse(format!("{s:?} out of range")))
            };
            Ok(SolutionTuple::new_unchecked(
                ntheory::parse_bigint(x)?,
                ntheory::parse_bigint(y)?,
                small(k)?,
                small(n)?,
            ))
        })
        .collect()
}
