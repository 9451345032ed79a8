//! Pell-type equations `X^2 - D Y^2 = N`: continued fractions of `sqrt(D)`,
//! fundamental units and unit orbits in `Z[sqrt(D)]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::ntheory;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellProblem {
    d: BigInt,
    n: BigInt,
}

impl PellProblem {
    pub fn new(d: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self> {
        let (d, n) = (d.into(), n.into());
        check_nonsquare(&d)?;
        if n.is_zero() {
            return domain("Pell right-hand side must be nonzero");
        }
        Ok(PellProblem { d, n })
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn is_solution(&self, p: &QuadPair) -> bool {
        p.norm(&self.d) == self.n
    }
}

/// `x + y sqrt(D)`; the discriminant `D` is supplied by context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadPair {
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadPair {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadPair {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn norm(&self, d: &BigInt) -> BigInt {
        &self.x * &self.x - d * &self.y * &self.y
    }

    pub fn mul(&self, other: &QuadPair, d: &BigInt) -> QuadPair {
        QuadPair {
            x: &self.x * &other.x + d * &self.y * &other.y,
            y: &self.x * &other.y + &self.y * &other.x,
        }
    }

    pub fn conj(&self) -> QuadPair {
        QuadPair {
            x: self.x.clone(),
            y: -&self.y,
        }
    }

    pub fn neg(&self) -> QuadPair {
        QuadPair {
            x: -&self.x,
            y: -&self.y,
        }
    }
}

fn check_nonsquare(d: &BigInt) -> Result<()> {
    if *d < BigInt::from(2) {
        return domain(format!("D must be >= 2, got {d}"));
    }
    if ntheory::is_square(d) {
        return domain(format!("D = {d} is a perfect square"));
    }
    Ok(())
}

/// Simple continued fraction `[a0; period...]` of `sqrt(D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a0: BigInt,
    pub period: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Partial quotients `a0, a1, a2, ...` cycling the period forever.
    pub fn quotients(&self) -> impl Iterator<Item = &BigInt> + '_ {
        std::iter::once(&self.a0).chain(self.period.iter().cycle())
    }
}

pub fn cf_sqrt(d: &BigInt) -> Result<ContinuedFraction> {
    check_nonsquare(d)?;
    let a0 = ntheory::isqrt(d)?;
    let two_a0 = &a0 * 2;
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let mut period = Vec::new();
    // The expansion of sqrt(D) is purely periodic after a0 and the period
    // ends exactly at the first partial quotient equal to 2 a0.
    loop {
        m = &q * &a - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        period.push(a.clone());
        if a == two_a0 {
            break;
        }
    }
    Ok(ContinuedFraction { a0, period })
}

/// Least solution `x, y >= 1` of `x^2 - D y^2 = +-1`, with the sign it attains.
pub fn fundamental_unit(d: &BigInt) -> Result<(QuadPair, i8)> {
    let cf = cf_sqrt(d)?;
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    for a in cf.quotients().take(2 * cf.period.len() + 1) {
        let h_next = a * &h + &h_prev;
        let k_next = a * &k + &k_prev;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        let pair = QuadPair::new(h.clone(), k.clone());
        let norm = pair.norm(d);
        if norm.abs().is_one() {
            let sign = if norm.is_positive() { 1 } else { -1 };
            return Ok((pair, sign));
        }
    }
    unreachable!("a convergent at the end of the second period has norm +1")
}

/// The norm +1 fundamental unit: the fundamental unit, squared when its norm is -1.
pub fn positive_unit(d: &BigInt) -> Result<QuadPair> {
    let (u, sign) = fundamental_unit(d)?;
    Ok(if sign < 0 { u.mul(&u, d) } else { u })
}

fn unit_norm(unit: &QuadPair, d: &BigInt) -> Result<i8> {
    let n = unit.norm(d);
    if n.is_one() {
        Ok(1)
    } else if n == BigInt::from(-1) {
        Ok(-1)
    } else {
        domain(format!("({}, {}) has norm {n}, not a unit", unit.x, unit.y))
    }
}

/// `base * unit^r` for `r = 0..count`.
pub fn orbit(base: &QuadPair, unit: &QuadPair, d: &BigInt, count: usize) -> Result<Vec<QuadPair>> {
    unit_norm(unit, d)?;
    if count == 0 {
        return domain("orbit count must be >= 1");
    }
    let mut out = Vec::with_capacity(count);
    let mut cur = base.clone();
    for _ in 0..count {
        let next = cur.mul(unit, d);
        out.push(cur);
        cur = next;
    }
    Ok(out)
}

/// `base * unit^r` for every `r` in `r_min..=r_max`, negative powers included.
pub fn orbit_two_sided(
    base: &QuadPair,
    unit: &QuadPair,
    d: &BigInt,
    r_min: i64,
    r_max: i64,
) -> Result<Vec<(i64, QuadPair)>> {
    let sign = unit_norm(unit, d)?;
    if r_min > r_max {
        return domain("empty exponent range");
    }
    // unit^-1 = sign * conj(unit)
    let inverse = if sign > 0 {
        unit.conj()
    } else {
        unit.conj().neg()
    };
    let mut out = Vec::new();
    let mut cur = base.clone();
    let mut r = 0i64;
    while r > r_min {
        cur = cur.mul(&inverse, d);
        r -= 1;
    }
    while r < r_min {
        cur = cur.mul(unit, d);
        r += 1;
    }
    for r in r_min..=r_max {
        let next = cur.mul(unit, d);
        out.push((r, cur));
        cur = next;
    }
    Ok(out)
}

/// Which norms the X-coordinates in [`x_sequence`] are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignPolicy {
    /// Every power of the fundamental unit, so the norms alternate when it
    /// has norm -1.
    #[default]
    Interleaved,
    NormPlusOne,
    NormMinusOne,
}

/// X-coordinates of `(x1 + y1 sqrt(D))^m`, `m = 0, 1, ...`, via
/// `X_{m+1} = 2 x1 X_m - e X_{m-1}` with `e` the unit norm.
///
/// `X_0 = 1` is the trivial solution, so index `m` is the unit exponent.
pub fn x_sequence(d: &BigInt, policy: SignPolicy, count: usize) -> Result<Vec<BigInt>> {
    let (unit, sign) = fundamental_unit(d)?;
    let want = |m: usize| -> bool {
        let norm_sign = if sign < 0 && m % 2 == 1 { -1 } else { 1 };
        match policy {
            SignPolicy::Interleaved => true,
            SignPolicy::NormPlusOne => norm_sign == 1,
            SignPolicy::NormMinusOne => norm_sign == -1,
        }
    };
    if policy == SignPolicy::NormMinusOne && sign > 0 {
        return domain(format!("X^2 - {d} Y^2 = -1 has no solutions"));
    }
    let two_x1 = &unit.x * 2;
    let eps = BigInt::from(sign);
    let (mut prev, mut cur) = (BigInt::one(), unit.x.clone());
    let mut out = Vec::with_capacity(count);
    let mut m = 0usize;
    if want(0) && out.len() < count {
        out.push(prev.clone());
    }
    while out.len() < count {
        m += 1;
        if want(m) {
            out.push(cur.clone());
        }
        let next = &two_x1 * &cur - &eps * &prev;
        (prev, cur) = (cur, next);
    }
    Ok(out)
}

/// All solutions `(x, y)` with `y >= 0` and `y <= isqrt(x1 |N|) + 1`, where `x1`
/// is the x-coordinate of the norm +1 unit. Every orbit under the unit group
/// has a member in this window.
pub fn base_solutions(problem: &PellProblem) -> Result<Vec<QuadPair>> {
    let unit = positive_unit(problem.d())?;
    let bound = ntheory::isqrt(&(&unit.x * problem.n().abs()))? + 1;
    let mut out = Vec::new();
    let mut y = BigInt::zero();
    while y <= bound {
        let x2 = problem.n() + problem.d() * &y * &y;
        if let Some(x) = ntheory::exact_root(&x2, 2) {
            if x.is_zero() {
                out.push(QuadPair::new(x, y.clone()));
            } else {
                out.push(QuadPair::new(x.clone(), y.clone()));
                out.push(QuadPair::new(-x, y.clone()));
            }
        }
        y += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn q(x: i64, y: i64) -> QuadPair {
        QuadPair::new(x, y)
    }

    #[test]
    fn cf_examples() {
        let cf = cf_sqrt(&b(2)).unwrap();
        assert_eq!((cf.a0, cf.period), (b(1), vec![b(2)]));
        let cf = cf_sqrt(&b(3)).unwrap();
        assert_eq!((cf.a0, cf.period), (b(1), vec![b(1), b(2)]));
        let cf = cf_sqrt(&b(33)).unwrap();
        assert_eq!((cf.a0, cf.period), (b(5), vec![b(1), b(2), b(1), b(10)]));
        assert!(cf_sqrt(&b(49)).is_err());
        assert!(cf_sqrt(&b(1)).is_err());
    }

    #[test]
    fn cf_convergent_checks() {
        // last convergent of the first period solves the +-1 equation
        for (d, expect) in [(2, (1, 1, -1)), (3, (2, 1, 1)), (33, (23, 4, 1))] {
            let cf = cf_sqrt(&b(d)).unwrap();
            let quotients: Vec<BigInt> = cf.quotients().take(cf.period.len()).cloned().collect();
            // evaluate [a0; a1, ..., a_{l-1}] from the back
            let (mut num, mut den) = (quotients.last().unwrap().clone(), b(1));
            for a in quotients.iter().rev().skip(1) {
                (num, den) = (a * &num + &den, num);
            }
            assert_eq!((num.clone(), den.clone()), (b(expect.0), b(expect.1)));
            assert_eq!(QuadPair::new(num, den).norm(&b(d)), b(expect.2));
        }
    }

    #[test]
    fn fundamental_unit_examples() {
        assert_eq!(fundamental_unit(&b(2)).unwrap(), (q(1, 1), -1));
        assert_eq!(fundamental_unit(&b(3)).unwrap(), (q(2, 1), 1));
        assert_eq!(fundamental_unit(&b(33)).unwrap(), (q(23, 4), 1));
        assert_eq!(fundamental_unit(&b(61)).unwrap(), (q(29718, 3805), -1));
        assert_eq!(positive_unit(&b(2)).unwrap(), q(3, 2));
    }

    #[test]
    fn fundamental_unit_is_minimal() {
        for d in 2..=50i64 {
            if ntheory::is_square(&b(d)) {
                continue;
            }
            let (u, sign) = fundamental_unit(&b(d)).unwrap();
            assert_eq!(u.norm(&b(d)), b(sign as i64));
            let y1: i64 = (&u.y).try_into().unwrap();
            for y in 1..y1 {
                for target in [d * y * y + 1, d * y * y - 1] {
                    assert!(!ntheory::is_square(&b(target)), "D={d} y={y}");
                }
            }
        }
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(
            orbit(&q(6, 1), &q(23, 4), &b(33), 2).unwrap(),
            vec![q(6, 1), q(270, 47)]
        );
        assert_eq!(
            orbit(&q(1, 0), &q(2, 1), &b(3), 4).unwrap(),
            vec![q(1, 0), q(2, 1), q(7, 4), q(26, 15)]
        );
        assert_eq!(
            orbit(&q(1, 1), &q(1, 1), &b(2), 4).unwrap(),
            vec![q(1, 1), q(3, 2), q(7, 5), q(17, 12)]
        );
        assert!(orbit(&q(1, 0), &q(2, 2), &b(3), 2).is_err());
        assert!(orbit(&q(1, 0), &q(2, 1), &b(3), 0).is_err());
    }

    #[test]
    fn orbit_norms_hold_for_many_steps() {
        let d = b(33);
        for p in orbit(&q(6, 1), &q(23, 4), &d, 100).unwrap() {
            assert_eq!(p.norm(&d), b(3));
        }
        let d = b(2);
        for (r, p) in orbit(&q(1, 0), &q(1, 1), &d, 100)
            .unwrap()
            .iter()
            .enumerate()
        {
            assert_eq!(p.norm(&d), b(if r % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn orbit_y_coordinates_follow_the_46_recurrence() {
        let d = b(33);
        let pts = orbit_two_sided(&q(6, 1), &q(23, 4), &d, -1, 30).unwrap();
        assert_eq!(pts[0], (-1, q(6, -1)));
        for w in pts.windows(3) {
            assert_eq!(w[2].1.y, &w[1].1.y * 46 - &w[0].1.y);
        }
    }

    #[test]
    fn x_sequence_examples() {
        let s = |d, c| x_sequence(&b(d), SignPolicy::Interleaved, c).unwrap();
        assert_eq!(s(3, 4), vec![b(1), b(2), b(7), b(26)]);
        assert_eq!(s(2, 5), vec![b(1), b(1), b(3), b(7), b(17)]);
        assert_eq!(s(33, 3), vec![b(1), b(23), b(1057)]);
        assert_eq!(
            x_sequence(&b(2), SignPolicy::NormMinusOne, 3).unwrap(),
            vec![b(1), b(7), b(41)]
        );
        assert_eq!(
            x_sequence(&b(2), SignPolicy::NormPlusOne, 3).unwrap(),
            vec![b(1), b(3), b(17)]
        );
        assert!(x_sequence(&b(3), SignPolicy::NormMinusOne, 3).is_err());
    }

    #[test]
    fn x_sequence_matches_orbit() {
        for d in [2i64, 3, 33, 7, 13] {
            let (u, _) = fundamental_unit(&b(d)).unwrap();
            let xs: Vec<BigInt> = orbit(&q(1, 0), &u, &b(d), 20)
                .unwrap()
                .into_iter()
                .map(|p| p.x)
                .collect();
            assert_eq!(x_sequence(&b(d), SignPolicy::Interleaved, 20).unwrap(), xs);
        }
    }

    #[test]
    fn base_solutions_for_33_3() {
        let p = PellProblem::new(33, 3).unwrap();
        assert_eq!(base_solutions(&p).unwrap(), vec![q(6, 1), q(-6, 1)]);
        assert!(PellProblem::new(36, 1).is_err());
        assert!(PellProblem::new(33, 0).is_err());
    }
}
