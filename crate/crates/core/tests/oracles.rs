//! Cross-checks against direct enumeration that shares no code with the
//! module under test.

use std::collections::BTreeSet;

use dioph11_core::gaussian::GaussianInteger;
use dioph11_core::lucas::BinaryRecurrence;
use dioph11_core::pell::{self, QuadPair};
use dioph11_core::primdiv::{self, DefectiveTable, LucasPairZi};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn isqrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[test]
fn pell_33_3_has_a_single_orbit_up_to_a_million() {
    let mut brute = BTreeSet::new();
    for y in 0..=1_000_000u128 {
        let x2 = 3 + 33 * y * y;
        let x = isqrt_u128(x2);
        if x * x == x2 {
            brute.insert(y);
        }
    }
    let d = BigInt::from(33);
    let orbit =
        pell::orbit_two_sided(&QuadPair::new(6, 1), &QuadPair::new(23, 4), &d, -6, 5).unwrap();
    let from_orbit: BTreeSet<u128> = orbit
        .iter()
        .map(|(_, p)| u128::try_from(p.y.abs()).unwrap())
        .filter(|&y| y <= 1_000_000)
        .collect();
    assert_eq!(brute, from_orbit);
    assert_eq!(
        brute.iter().take(3).copied().collect::<Vec<_>>(),
        vec![1, 47, 2161]
    );
}

/// `t_r mod q` for `r = -1 ..` by plain modular iteration.
fn residues(p: i128, t_m1: i128, t0: i128, q: i128, count: usize) -> Vec<i128> {
    let mut out = Vec::with_capacity(count);
    let (mut a, mut b) = (t_m1.rem_euclid(q), t0.rem_euclid(q));
    for _ in 0..count {
        out.push(a);
        let c = (p * b - a).rem_euclid(q);
        a = b;
        b = c;
    }
    out
}

#[test]
fn divisor_propagation_matches_brute_force() {
    let y = BinaryRecurrence::pell33();
    for q in [373u64, 51193] {
        let period = y.residues_mod(q, -1).unwrap().period;
        let window = 11u64.lcm(&period) as usize;
        let seq = residues(46, -1, 1, q as i128, (3 * window + 1).max(62));
        for class in 0..11i64 {
            let brute = seq
                .iter()
                .enumerate()
                .filter(|(i, _)| (*i as i64 - 1 - class).rem_euclid(11) == 0)
                .all(|(_, &t)| t == 0);
            assert_eq!(
                y.divisor_propagation(q, class, 11).unwrap(),
                brute,
                "q={q} class={class}"
            );
        }
        // the modular listing agrees with exact terms at the start
        for (i, t) in y.terms(-1, 60).unwrap().iter().enumerate() {
            assert_eq!(t.mod_floor(&BigInt::from(q)), BigInt::from(seq[i]));
        }
    }
}

/// Part of `u_n` coprime to `b * u_1 * ... * u_{n-1}`; greater than 1 exactly
/// when `u_n` has a primitive divisor.
fn primitive_part(p: &BigInt, q: &BigInt, disc: &BigInt, n: usize) -> BigInt {
    let mut u = vec![BigInt::zero(), BigInt::one()];
    for k in 2..=n {
        let next = p * &u[k - 1] - q * &u[k - 2];
        u.push(next);
    }
    let mut g = u[n].abs();
    let mut bad = disc.abs();
    for t in &u[1..n] {
        if !t.is_zero() {
            bad *= t.abs();
        }
    }
    loop {
        let c = g.gcd(&bad);
        if c.is_one() {
            return g;
        }
        g /= c;
    }
}

#[test]
fn shipped_table_rows_are_defective() {
    for row in DefectiveTable::builtin().rows() {
        let q = (&row.a * &row.a - &row.b) / 4;
        assert_eq!(
            primitive_part(&row.a, &q, &row.b, row.n as usize),
            BigInt::one(),
            "{row:?}"
        );
    }
}

#[test]
fn no_small_gaussian_pair_is_defective() {
    for n in [5usize, 7, 11, 13] {
        for u in -12i64..=12 {
            for v in 1i64..=12 {
                // Lucas pair conditions: (2u)^2 and u^2+v^2 coprime, alpha/conj(alpha) not a root of unity
                if u == 0 || u.abs() == v || (2 * u).gcd(&(u * u + v * v)) != 1 {
                    continue;
                }
                let p = BigInt::from(2 * u);
                let q = BigInt::from(u * u + v * v);
                let disc = BigInt::from(-4 * v * v);
                assert!(
                    primitive_part(&p, &q, &disc, n) > BigInt::one(),
                    "u={u} v={v} n={n}"
                );
                let pair = LucasPairZi::new(GaussianInteger::new(u, v), n as u64).unwrap();
                assert!(!primdiv::defective_table_check(&pair));
            }
        }
    }
}

#[test]
fn eleven_never_congruent_to_plus_minus_one_past_twelve() {
    for m in 13u64..=10_000 {
        assert!(11 % m != 1 && 11 % m != m - 1, "m={m}");
    }
}
