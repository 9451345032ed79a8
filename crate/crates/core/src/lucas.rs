//! Second-order linear recurrences `t_{r+1} = P t_r - Q t_{r-1}` indexed from
//! `r = -1`, with exact terms and residue periods.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ntheory;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryRecurrence {
    pub p: BigInt,
    pub q: BigInt,
    /// `t_{-1}`
    pub t_minus1: BigInt,
    /// `t_0`
    pub t0: BigInt,
}

/// Residues of one full period of a recurrence modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCycle {
    pub modulus: u64,
    /// Minimal period of the state pair `(t_r, t_{r+1}) mod m`.
    pub period: u64,
    /// Number of indices after `r = -1` before the state enters its cycle.
    /// Zero whenever `Q` is invertible modulo `m`.
    pub preperiod: u64,
    pub start: i64,
    /// Balanced residues `-m/2 < rho <= m/2` of `t_start, ..., t_{start+period-1}`.
    pub residues: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroClasses {
    pub modulus: u64,
    pub period: u64,
    pub preperiod: u64,
    /// Classes `r mod period` of indices in the periodic part with `m | t_r`.
    pub classes: BTreeSet<u64>,
    /// Indices before the cycle with `m | t_r`.
    pub transient: Vec<i64>,
}

impl BinaryRecurrence {
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        t_minus1: impl Into<BigInt>,
        t0: impl Into<BigInt>,
    ) -> Self {
        BinaryRecurrence {
            p: p.into(),
            q: q.into(),
            t_minus1: t_minus1.into(),
            t0: t0.into(),
        }
    }

    /// `y_{-1} = -1, y_0 = 1, y_{r+1} = 46 y_r - y_{r-1}`: the Y-coordinates of
    /// `(6 + sqrt(33)) (23 + 4 sqrt(33))^r`.
    pub fn pell33() -> Self {
        Self::new(46, 1, -1, 1)
    }

    fn q_is_unit(&self) -> bool {
        self.q.abs().is_one()
    }

    /// Exact value of `t_r`; negative `r` below `-1` needs `|Q| = 1`.
    pub fn term(&self, r: i64) -> Result<BigInt> {
        Ok(self.terms(r, r)?.pop().expect("one term"))
    }

    /// `t_r` for every `r` in `r_min..=r_max`.
    pub fn terms(&self, r_min: i64, r_max: i64) -> Result<Vec<BigInt>> {
        if r_min > r_max {
            return Ok(Vec::new());
        }
        let (mut a, mut b) = (self.t_minus1.clone(), self.t0.clone());
        let mut idx = -1i64; // a = t_idx, b = t_{idx+1}
        if r_min < -1 {
            if !self.q_is_unit() {
                return Err(Error::Unsupported(format!(
                    "negative index {r_min} needs |Q| = 1, got Q = {}",
                    self.q
                )));
            }
            while idx > r_min {
                // t_{r-1} = (P t_r - t_{r+1}) / Q
                let prev = (&self.p * &a - &b) * &self.q;
                b = a;
                a = prev;
                idx -= 1;
            }
        }
        while idx < r_min {
            self.step(&mut a, &mut b);
            idx += 1;
        }
        let mut out = Vec::with_capacity((r_max - r_min + 1) as usize);
        loop {
            out.push(a.clone());
            if idx == r_max {
                break;
            }
            self.step(&mut a, &mut b);
            idx += 1;
        }
        Ok(out)
    }

    fn step(&self, a: &mut BigInt, b: &mut BigInt) {
        let next = &self.p * &*b - &self.q * &*a;
        *a = std::mem::replace(b, next);
    }

    fn modular(&self, m: u64) -> ModState {
        ModState {
            m,
            p: ntheory::mod_u64(&self.p, m),
            neg_q: (m - ntheory::mod_u64(&self.q, m)) % m,
            start: (
                ntheory::mod_u64(&self.t_minus1, m),
                ntheory::mod_u64(&self.t0, m),
            ),
        }
    }

    /// Period of the residue sequence and one full period of residues from `r_start`.
    pub fn residues_mod(&self, m: u64, r_start: i64) -> Result<ResidueCycle> {
        if m < 2 {
            return domain(format!("modulus must be >= 2, got {m}"));
        }
        if r_start < -1 && !self.q_is_unit() {
            return Err(Error::Unsupported(format!(
                "negative index {r_start} needs |Q| = 1"
            )));
        }
        let ms = self.modular(m);
        let (preperiod, period) = ms.cycle();
        // Map r_start to an index >= -1 with the same state. A negative
        // offset implies |Q| = 1, so the state map is invertible and the
        // preperiod is zero.
        let offset = r_start + 1;
        let reduced = if offset < 0 || offset >= preperiod as i64 {
            preperiod as i64 + (offset - preperiod as i64).rem_euclid(period as i64)
        } else {
            offset
        };
        let mut s = ms.start;
        for _ in 0..reduced {
            s = ms.next(s);
        }
        let mut residues = Vec::with_capacity(period as usize);
        for _ in 0..period {
            residues.push(balanced(s.0, m));
            s = ms.next(s);
        }
        Ok(ResidueCycle {
            modulus: m,
            period,
            preperiod,
            start: r_start,
            residues,
        })
    }

    /// Index classes, modulo the period, where `m` divides the term.
    pub fn zero_classes_mod(&self, m: u64) -> Result<ZeroClasses> {
        if m < 2 {
            return domain(format!("modulus must be >= 2, got {m}"));
        }
        let ms = self.modular(m);
        let (preperiod, period) = ms.cycle();
        let mut s = ms.start;
        let mut transient = Vec::new();
        let mut classes = BTreeSet::new();
        for step in 0..preperiod + period {
            let r = step as i64 - 1;
            if s.0 == 0 {
                if step < preperiod {
                    transient.push(r);
                } else {
                    classes.insert(r.rem_euclid(period as i64) as u64);
                }
            }
            s = ms.next(s);
        }
        Ok(ZeroClasses {
            modulus: m,
            period,
            preperiod,
            classes,
            transient,
        })
    }

    /// First index `r >= -1` with `r = class (mod modulus)` and `q` not
    /// dividing `t_r`, searched over one window of length
    /// `lcm(modulus, period mod q)` past the transient part. `None` means `q`
    /// divides every term in the class.
    pub fn propagation_counterexample(
        &self,
        q: u64,
        class: i64,
        modulus: u64,
    ) -> Result<Option<i64>> {
        if !ntheory::is_prime(q) {
            return domain(format!("{q} is not prime"));
        }
        if modulus == 0 {
            return domain("class modulus must be >= 1");
        }
        let ms = self.modular(q);
        let (preperiod, period) = ms.cycle();
        let window = preperiod + modulus.lcm(&period);
        let mut s = ms.start;
        for step in 0..window {
            let r = step as i64 - 1;
            if (r - class).rem_euclid(modulus as i64) == 0 && s.0 != 0 {
                return Ok(Some(r));
            }
            s = ms.next(s);
        }
        Ok(None)
    }

    /// Whether the prime `q` divides `t_r` for every `r = target_class (mod target_mod)`.
    pub fn divisor_propagation(&self, q: u64, target_class: i64, target_mod: u64) -> Result<bool> {
        Ok(self
            .propagation_counterexample(q, target_class, target_mod)?
            .is_none())
    }

    /// Indices `r` in the range with `|t_r| = p^e`, paired with `e`.
    pub fn power_terms(&self, p: u64, r_min: i64, r_max: i64) -> Result<Vec<(i64, u32)>> {
        if !ntheory::is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        Ok(self
            .terms(r_min, r_max)?
            .iter()
            .zip(r_min..)
            .filter_map(|(t, r)| ntheory::is_power_of(&t.abs(), p).map(|e| (r, e)))
            .collect())
    }
}

fn balanced(r: u64, m: u64) -> i64 {
    if r > m / 2 {
        r as i64 - m as i64
    } else {
        r as i64
    }
}

struct ModState {
    m: u64,
    p: u64,
    neg_q: u64,
    start: (u64, u64),
}

impl ModState {
    fn next(&self, (a, b): (u64, u64)) -> (u64, u64) {
        let m = self.m as u128;
        let c = (self.p as u128 * b as u128 + self.neg_q as u128 * a as u128) % m;
        (b, c as u64)
    }

    /// `(preperiod, period)` of the state sequence, by Brent's cycle detection.
    fn cycle(&self) -> (u64, u64) {
        let mut power = 1u64;
        let mut lam = 1u64;
        let mut tortoise = self.start;
        let mut hare = self.next(self.start);
        while tortoise != hare {
            if power == lam {
                tortoise = hare;
                power *= 2;
                lam = 0;
            }
            hare = self.next(hare);
            lam += 1;
        }
        let mut tortoise = self.start;
        let mut hare = self.start;
        for _ in 0..lam {
            hare = self.next(hare);
        }
        let mut mu = 0u64;
        while tortoise != hare {
            tortoise = self.next(tortoise);
            hare = self.next(hare);
            mu += 1;
        }
        (mu, lam)
    }
}

/// Reads an `i64` index from a big integer, for CLI parsing.
pub fn index_from_bigint(r: &BigInt) -> Result<i64> {
    r.to_i64()
        .ok_or_else(|| Error::Unsupported(format!("index {r} out of range")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn term_examples() {
        let y = BinaryRecurrence::pell33();
        assert_eq!(y.term(5).unwrap(), b(210044879));
        assert_eq!(y.term(0).unwrap(), b(1));
        assert_eq!(y.term(1).unwrap(), b(47));
        assert_eq!(y.term(-1).unwrap(), b(-1));
        assert_eq!(y.term(-2).unwrap(), b(-47));
    }

    #[test]
    fn negative_index_needs_unit_q() {
        let s = BinaryRecurrence::new(3, 2, 0, 1);
        assert_eq!(s.term(3).unwrap(), b(15)); // 2^r - 1 shifted: 0,1,3,7,15
        assert!(matches!(s.term(-2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn recurrence_and_symmetry() {
        let y = BinaryRecurrence::pell33();
        let t = y.terms(-22, 51).unwrap();
        let at = |r: i64| &t[(r + 22) as usize];
        for r in -1..=50 {
            assert_eq!(*at(r + 1), at(r) * 46 - at(r - 1));
        }
        for j in 0..=20 {
            assert_eq!(*at(-1 - j), -at(j));
        }
    }

    #[test]
    fn residues_mod_11() {
        let c = BinaryRecurrence::pell33().residues_mod(11, -1).unwrap();
        assert_eq!(c.period, 11);
        assert_eq!(c.preperiod, 0);
        assert_eq!(c.residues, vec![-1, 1, 3, 5, -4, -2, 0, 2, 4, -5, -3]);
        // same cycle seen from a shifted and a negative start
        let c2 = BinaryRecurrence::pell33().residues_mod(11, 10).unwrap();
        assert_eq!(c2.residues, vec![-1, 1, 3, 5, -4, -2, 0, 2, 4, -5, -3]);
        let c3 = BinaryRecurrence::pell33().residues_mod(11, -12).unwrap();
        assert_eq!(c3.residues, c.residues);
        // t_{-3} = -t_2 = -2161, t_{-2} = -t_1 = -47
        let c4 = BinaryRecurrence::pell33().residues_mod(11, -3).unwrap();
        assert_eq!(&c4.residues[..2], &[-5, -3]);
        assert_eq!(c4.residues[2], -1);
    }

    #[test]
    fn residues_agree_with_terms() {
        let y = BinaryRecurrence::pell33();
        for m in [2u64, 11, 373, 51193] {
            let c = y.residues_mod(m, -1).unwrap();
            let terms = y.terms(-1, 2 * c.period as i64 - 2).unwrap();
            for (i, t) in terms.iter().enumerate() {
                let rho = c.residues[i % c.period as usize];
                assert_eq!(ntheory::mod_u64(&(t - rho), m), 0, "m={m} i={i}");
            }
        }
    }

    #[test]
    fn parity_case() {
        // P even, Q odd, both seeds odd: every term is odd.
        let s = BinaryRecurrence::new(4, 3, 1, 5);
        let c = s.residues_mod(2, -1).unwrap();
        assert!(c.residues.iter().all(|&r| r == 1));
    }

    #[test]
    fn preperiod_is_detected() {
        // Q = 0 mod 4: t_{r+1} = 2 t_r mod 4 collapses to zero.
        let s = BinaryRecurrence::new(2, 4, 1, 1);
        let c = s.residues_mod(4, -1).unwrap();
        assert_eq!((c.preperiod, c.period), (3, 1));
        let z = s.zero_classes_mod(4).unwrap();
        assert_eq!(z.classes, BTreeSet::from([0]));
        assert!(z.transient.is_empty());
    }

    #[test]
    fn zero_classes() {
        let y = BinaryRecurrence::pell33();
        assert_eq!(y.zero_classes_mod(11).unwrap().classes, BTreeSet::from([5]));
        let z = y.zero_classes_mod(373).unwrap();
        assert!(z.classes.contains(&(5 % z.period)));
        let s = BinaryRecurrence::new(3, 1, 1, 0);
        assert!(s.zero_classes_mod(7).unwrap().classes.contains(&0));
    }

    #[test]
    fn propagation_examples() {
        let y = BinaryRecurrence::pell33();
        assert!(y.divisor_propagation(373, 5, 11).unwrap());
        assert!(y.divisor_propagation(51193, 5, 11).unwrap());
        assert!(!y.divisor_propagation(373, 0, 11).unwrap());
        assert_eq!(y.propagation_counterexample(373, 0, 11).unwrap(), Some(0));
        assert!(y.divisor_propagation(12, 5, 11).is_err());
    }

    #[test]
    fn power_terms_examples() {
        let y = BinaryRecurrence::pell33();
        assert_eq!(y.power_terms(11, -1, 30).unwrap(), vec![(-1, 0), (0, 0)]);
        assert_eq!(y.power_terms(11, 5, 5).unwrap(), vec![]);
        let s = BinaryRecurrence::new(1, 1, 0, 7);
        assert!(s.power_terms(7, -1, 3).unwrap().contains(&(0, 1)));
    }
}
