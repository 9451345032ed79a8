//! Exact integer primitives on [`BigInt`]: roots, perfect powers, the
//! Legendre symbol and small-scale factorization.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

/// Floor square root by Newton iteration on integers.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return domain(format!("isqrt of negative number {n}"));
    }
    if n.is_zero() {
        return Ok(BigInt::zero());
    }
    // Start above the root: 2^ceil(bits/2) >= sqrt(n).
    let mut x = BigInt::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            break;
        }
        x = y;
    }
    // post-correction
    while &x * &x > *n {
        x -= 1;
    }
    while (&x + 1u32) * (&x + 1u32) <= *n {
        x += 1;
    }
    Ok(x)
}

/// Floor of the `e`-th root of a non-negative integer.
pub fn iroot(n: &BigInt, e: u32) -> Result<BigInt> {
    if n.is_negative() {
        return domain(format!("root of negative number {n}"));
    }
    if e == 0 {
        return domain("zeroth root");
    }
    if e == 2 {
        return isqrt(n);
    }
    Ok(n.nth_root(e))
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    // Quadratic residues mod 64 reject most non-squares without a root.
    let low = (n.magnitude().iter_u64_digits().next().unwrap_or(0) & 63) as usize;
    const SQ64: u64 = {
        let mut mask = 0u64;
        let mut i = 0;
        while i < 64 {
            mask |= 1 << ((i * i) % 64);
            i += 1;
        }
        mask
    };
    if SQ64 >> low & 1 == 0 {
        return false;
    }
    let r = isqrt(n).expect("non-negative");
    &r * &r == *n
}

/// Exact `e`-th root if `n` is a perfect `e`-th power.
pub fn exact_root(n: &BigInt, e: u32) -> Option<BigInt> {
    if e == 0 {
        return None;
    }
    if n.is_negative() {
        if e.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-n, e).map(|r| -r);
    }
    if e == 2 && !is_square(n) {
        return None;
    }
    let r = iroot(n, e).ok()?;
    (num_traits::pow(r.clone(), e as usize) == *n).then_some(r)
}

/// Primes up to `limit` inclusive, by a plain sieve.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Writes `n >= 2` as `b^e` with `e >= 2` maximal, or `None` when `n` is not
/// a perfect power.
///
/// Prime exponents are peeled off one at a time; the final base is then not a
/// perfect power, so the accumulated exponent is maximal.
pub fn perfect_power(n: &BigInt) -> Result<Option<(BigInt, u32)>> {
    if *n < BigInt::from(2) {
        return domain(format!("perfect_power requires n >= 2, got {n}"));
    }
    let mut base = n.clone();
    let mut exp = 1u32;
    'outer: loop {
        for q in small_primes(base.bits()) {
            if let Some(r) = exact_root(&base, q as u32) {
                base = r;
                exp *= q as u32;
                continue 'outer;
            }
        }
        break;
    }
    Ok((exp > 1).then_some((base, exp)))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin over the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least non-negative residue of `a` modulo `m > 0`.
pub fn mod_u64(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

/// Legendre symbol `(a | p)` by Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return domain(format!(
            "legendre symbol needs an odd prime modulus, got {p}"
        ));
    }
    let r = mod_u64(a, p);
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    })
}

/// Result of [`trial_factor`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Prime factors in increasing order with multiplicities.
    pub factors: Vec<(BigInt, u32)>,
    /// Part left over with no prime factor up to the bound and exceeding
    /// `bound^2`, so its primality is undecided.
    pub cofactor: Option<BigInt>,
}

impl Factorization {
    /// Product of all factors (and the cofactor, if any).
    pub fn product(&self) -> BigInt {
        let mut acc = self.factors.iter().fold(BigInt::one(), |acc, (p, e)| {
            acc * num_traits::pow(p.clone(), *e as usize)
        });
        if let Some(c) = &self.cofactor {
            acc *= c;
        }
        acc
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }
}

/// Trial division by every integer up to `bound`.
pub fn trial_factor(n: &BigInt, bound: u64) -> Result<Factorization> {
    if *n < BigInt::from(2) {
        return domain(format!("trial_factor requires n >= 2, got {n}"));
    }
    if bound < 2 {
        return domain(format!("trial_factor bound must be >= 2, got {bound}"));
    }
    let mut rest = n.clone();
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d <= bound {
        let dd = BigInt::from(d);
        if &dd * &dd > rest {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&dd);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((dd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut cofactor = None;
    if !rest.is_one() {
        let b = BigInt::from(bound);
        // Any composite left would have a factor <= bound.
        if rest <= &b * &b {
            factors.push((rest, 1));
        } else {
            cofactor = Some(rest);
        }
    }
    Ok(Factorization { factors, cofactor })
}

/// The exponent `e` with `p^e = n`, if there is one.
pub fn is_power_of(n: &BigInt, p: u64) -> Option<u32> {
    if n.sign() != Sign::Plus || p < 2 {
        return None;
    }
    let p = BigInt::from(p);
    let mut rest = n.clone();
    let mut e = 0u32;
    while !rest.is_one() {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return None;
        }
        rest = q;
        e += 1;
    }
    Some(e)
}

/// Parses a decimal integer, allowing a leading sign.
pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| crate::Error::Parse(format!("not an integer: {s:?}")))
}
