//! Arithmetic in the Gaussian integers Z[i].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::ntheory;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianInteger {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInteger {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInteger {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn conj(&self) -> Self {
        GaussianInteger {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re^2 + im^2`, equal to `z * conj(z)`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplication by `i`.
    pub fn rotate(&self) -> Self {
        GaussianInteger {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    /// The four associates `z, iz, -z, -iz`.
    pub fn associates(&self) -> [GaussianInteger; 4] {
        let a = self.clone();
        let b = a.rotate();
        let c = b.rotate();
        let d = c.rotate();
        [a, b, c, d]
    }

    /// Canonical associate with `re > 0` and `im >= 0`; zero maps to zero.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.associates()
            .into_iter()
            .find(|z| z.re.is_positive() && !z.im.is_negative())
            .expect("exactly one associate lies in the first quadrant")
    }

    pub fn is_associate(&self, other: &GaussianInteger) -> bool {
        self.associates().iter().any(|z| z == other)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = GaussianInteger::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division with each quotient coordinate rounded to the
    /// nearest integer (ties to even), so `norm(r) <= norm(d) / 2`.
    pub fn div_rem(&self, d: &GaussianInteger) -> Result<(GaussianInteger, GaussianInteger)> {
        if d.is_zero() {
            return domain("division by zero in Z[i]");
        }
        let n = d.norm();
        let num = self * &d.conj();
        let q = GaussianInteger {
            re: round_div(&num.re, &n),
            im: round_div(&num.im, &n),
        };
        let r = self - &(&q * d);
        Ok((q, r))
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn checked_div(&self, d: &GaussianInteger) -> Option<GaussianInteger> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &GaussianInteger) -> bool {
        other.checked_div(self).is_some()
    }
}

/// `num / den` rounded to nearest, ties to even; `den > 0`.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    let twice = &r * 2;
    if twice > *den || (twice == *den && q.is_odd()) {
        q + 1
    } else {
        q
    }
}

impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a GaussianInteger> for &'a GaussianInteger {
    type Output = GaussianInteger;
    fn add(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianInteger> for &'a GaussianInteger {
    type Output = GaussianInteger;
    fn sub(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianInteger> for &'a GaussianInteger {
    type Output = GaussianInteger;
    fn mul(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInteger {
    type Output = GaussianInteger;
    fn neg(self) -> GaussianInteger {
        GaussianInteger {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Add for GaussianInteger {
    type Output = GaussianInteger;
    fn add(self, rhs: GaussianInteger) -> GaussianInteger {
        &self + &rhs
    }
}

impl Sub for GaussianInteger {
    type Output = GaussianInteger;
    fn sub(self, rhs: GaussianInteger) -> GaussianInteger {
        &self - &rhs
    }
}

impl Mul for GaussianInteger {
    type Output = GaussianInteger;
    fn mul(self, rhs: GaussianInteger) -> GaussianInteger {
        &self * &rhs
    }
}

impl Neg for GaussianInteger {
    type Output = GaussianInteger;
    fn neg(self) -> GaussianInteger {
        -&self
    }
}

/// Euclidean gcd, normalized to the first-quadrant associate (units give 1).
pub fn gcd(a: &GaussianInteger, b: &GaussianInteger) -> Result<GaussianInteger> {
    if a.is_zero() && b.is_zero() {
        return domain("gcd(0, 0) is undefined");
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y)?;
        x = y;
        y = r;
    }
    Ok(x.normalize())
}

/// Some `beta` with `beta^n` an associate of `target`, normalized to the
/// first quadrant.
///
/// Exhaustive over `|re|, |im| <= isqrt(norm(target)^(1/n))`; `None` when the
/// norm is not an exact `n`-th power or no candidate matches.
pub fn nth_root(target: &GaussianInteger, n: u32) -> Result<Option<GaussianInteger>> {
    if n < 2 {
        return domain(format!("nth_root needs n >= 2, got {n}"));
    }
    if target.is_zero() {
        return domain("nth_root of zero");
    }
    let Some(root_norm) = ntheory::exact_root(&target.norm(), n) else {
        return Ok(None);
    };
    let bound = ntheory::isqrt(&root_norm)?;
    let mut re = BigInt::one();
    // First quadrant only: every associate class has exactly one member there.
    while re <= bound {
        let rest = &root_norm - &re * &re;
        if let Some(im) = ntheory::exact_root(&rest, 2) {
            let beta = GaussianInteger::new(re.clone(), im);
            if beta.pow(n as u64).is_associate(target) {
                return Ok(Some(beta));
            }
        }
        re += 1;
    }
    Ok(None)
}

/// `v (3u^2 - v^2)`, the imaginary part of `(u + iv)^3`.
pub fn imag_identity_rhs(u: &BigInt, v: &BigInt) -> BigInt {
    v * (u * u * 3 - v * v)
}
