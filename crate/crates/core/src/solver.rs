//! Decision procedure for `x^2 + 11^(2k) = y^n`.
//!
//! Non-primitive solutions reduce to primitive ones by stripping powers of
//! 11 ([`reduce_to_primitive`], [`lift`]). Primitive solutions are split by
//! the exponent: `n = 3` ([`solve_n3`]), `n = 4` ([`solve_n4`]) and prime
//! `n >= 5` ([`solve_prime_ge5`]); every other `n` descends to one of those
//! through a divisor `d > 2` of `n`. Each case returns a [`Certificate`]
//! recording every branch it closed and why.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gaussian::{self, GaussianInteger};
use crate::lucas::BinaryRecurrence;
use crate::ntheory;
use crate::oracle;
use crate::pell::{self, PellProblem, QuadPair};
use crate::primdiv::{self, DefectiveTable, CARMICHAEL_THRESHOLD};

pub const BASE: u64 = 11;
pub const EQUATION: &str = "x^2 + 11^(2k) = y^n";

/// Bound of the Lebesgue spot check attached to the reduction certificate.
const LEBESGUE_SPOT_X: u64 = 1000;
const LEBESGUE_SPOT_N: u64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SolutionTuple {
    #[serde(with = "crate::decimal")]
    pub x: BigInt,
    #[serde(with = "crate::decimal")]
    pub y: BigInt,
    pub k: u64,
    pub n: u64,
}

impl SolutionTuple {
    /// A tuple with fields in range; no check of the equation itself.
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, k: u64, n: u64) -> Result<Self> {
        let t = Self::new_unchecked(x.into(), y.into(), k, n);
        t.check_ranges()?;
        Ok(t)
    }

    pub(crate) fn new_unchecked(x: BigInt, y: BigInt, k: u64, n: u64) -> Self {
        SolutionTuple { x, y, k, n }
    }

    /// A tuple that is known to satisfy the equation.
    pub fn confirmed(x: impl Into<BigInt>, y: impl Into<BigInt>, k: u64, n: u64) -> Result<Self> {
        let t = Self::new(x, y, k, n)?;
        if !verify_solution(&t)? {
            return Err(Error::Invariant(format!("{t} does not satisfy {EQUATION}")));
        }
        Ok(t)
    }

    fn check_ranges(&self) -> Result<()> {
        if !self.x.is_positive() || !self.y.is_positive() {
            return domain(format!("x and y must be >= 1 in {self}"));
        }
        if self.k < 1 {
            return domain(format!("k must be >= 1 in {self}"));
        }
        if self.n < 3 {
            return domain(format!("n must be >= 3 in {self}"));
        }
        Ok(())
    }
}

impl fmt::Display for SolutionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x, self.y, self.k, self.n)
    }
}

fn pow11(e: u64) -> BigInt {
    num_traits::pow(BigInt::from(BASE), e as usize)
}

/// Exact check of `x^2 + 11^(2k) = y^n`.
pub fn verify_solution(t: &SolutionTuple) -> Result<bool> {
    t.check_ranges()?;
    Ok(&t.x * &t.x + pow11(2 * t.k) == num_traits::pow(t.y.clone(), t.n as usize))
}

/// 11-adic valuation and the 11-free part.
fn split11(v: &BigInt) -> (u64, BigInt) {
    let eleven = BigInt::from(BASE);
    let mut rest = v.clone();
    let mut e = 0;
    loop {
        let (q, r) = rest.div_rem(&eleven);
        if !r.is_zero() {
            return (e, rest);
        }
        rest = q;
        e += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub primitive: SolutionTuple,
    /// `x = 11^a x1`
    pub a: u64,
    /// `y = 11^b y1`
    pub b: u64,
}

/// Strips the common 11-power: `(x, y, k, n) -> (x / 11^a, y / 11^b, k - a, n)`.
pub fn reduce_to_primitive(t: &SolutionTuple) -> Result<Reduction> {
    if !verify_solution(t)? {
        return Err(Error::Malformed(format!("{t} is not a solution")));
    }
    let (a, x1) = split11(&t.x);
    let (b, y1) = split11(&t.y);
    let nb = t.n * b;
    if 2 * t.k == nb && nb <= 2 * a {
        return Err(Error::ReducesToLebesgue {
            a,
            b,
            k: t.k,
            n: t.n,
        });
    }
    if 2 * a == nb && nb < 2 * t.k {
        let primitive = SolutionTuple::new(x1, y1, t.k - a, t.n)?;
        return Ok(Reduction { primitive, a, b });
    }
    Err(Error::Malformed(format!(
        "{t}: neither 2k = nb <= 2a nor 2a = nb < 2k (a={a}, b={b})"
    )))
}

/// The `lambda`-th rescaling of a primitive solution by powers of 11.
///
/// `2a = nb` has least positive solution `(a, b) = (n, 2)` for odd `n` and
/// `(n/2, 1)` for even `n`; the result uses `lambda` times that step.
pub fn lift(primitive: &SolutionTuple, lambda: u64) -> SolutionTuple {
    let (a_step, b_step) = if primitive.n % 2 == 1 {
        (primitive.n, 2)
    } else {
        (primitive.n / 2, 1)
    };
    let (a, b) = (a_step * lambda, b_step * lambda);
    SolutionTuple::new_unchecked(
        &primitive.x * pow11(a),
        &primitive.y * pow11(b),
        primitive.k + a,
        primitive.n,
    )
}

/// The only primitive solution.
pub fn primitive_solution() -> SolutionTuple {
    SolutionTuple::new_unchecked(BigInt::from(2), BigInt::from(5), 1, 3)
}

/// `(2 * 11^(3 lambda), 5 * 11^(2 lambda), 1 + 3 lambda, 3)`.
pub fn lift_primitive(lambda: u64) -> SolutionTuple {
    lift(&primitive_solution(), lambda)
}

// ---------------------------------------------------------------------------
// Certificates

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub premise: String,
    pub method: String,
    pub verdict: String,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(with = "crate::decimal")]
    pub x: BigInt,
    #[serde(with = "crate::decimal")]
    pub y: BigInt,
    pub k: u64,
    pub n: u64,
    pub lambda: u64,
}

impl SolutionRecord {
    pub fn new(t: &SolutionTuple, lambda: u64) -> Self {
        SolutionRecord {
            x: t.x.clone(),
            y: t.y.clone(),
            k: t.k,
            n: t.n,
            lambda,
        }
    }

    pub fn tuple(&self) -> SolutionTuple {
        SolutionTuple::new_unchecked(self.x.clone(), self.y.clone(), self.k, self.n)
    }
}

/// Verdict strings used in branch records.
pub mod verdict {
    pub const REJECTED: &str = "rejected";
    pub const SOLUTION: &str = "solution";
    pub const HOLDS: &str = "holds";
    pub const LIFTED: &str = "lifted";
}

pub mod case {
    pub const N3: &str = "n=3";
    pub const N4: &str = "n=4";
    pub const PRIME: &str = "prime n>=5";
    pub const REDUCTION: &str = "reduction";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub equation: String,
    pub case: String,
    pub branches: Vec<Branch>,
    pub solutions: Vec<SolutionRecord>,
}

impl Certificate {
    fn new(case: impl Into<String>) -> Self {
        Certificate {
            equation: EQUATION.to_string(),
            case: case.into(),
            branches: Vec::new(),
            solutions: Vec::new(),
        }
    }

    fn branch(
        &mut self,
        premise: impl Into<String>,
        method: impl Into<String>,
        verdict: impl Into<String>,
        witness: impl Into<String>,
    ) {
        self.branches.push(Branch {
            premise: premise.into(),
            method: method.into(),
            verdict: verdict.into(),
            witness: witness.into(),
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Key-value text form with one indented block per branch.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Whether every branch either keeps a solution or names how it was closed.
    pub fn is_closed(&self) -> bool {
        self.branches.iter().all(|b| {
            !b.method.is_empty()
                && !b.witness.is_empty()
                && (b.verdict == verdict::REJECTED
                    || b.verdict == verdict::SOLUTION
                    || b.verdict == verdict::HOLDS
                    || b.verdict == verdict::LIFTED
                    || b.verdict.starts_with("excluded: "))
        })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "equation: {}", self.equation)?;
        writeln!(f, "case: {}", self.case)?;
        for (i, b) in self.branches.iter().enumerate() {
            writeln!(f, "branch[{i}]:")?;
            writeln!(f, "  premise: {}", b.premise)?;
            writeln!(f, "  method: {}", b.method)?;
            writeln!(f, "  verdict: {}", b.verdict)?;
            writeln!(f, "  witness: {}", b.witness)?;
        }
        for s in &self.solutions {
            writeln!(
                f,
                "solution: {} {} {} {} lambda={}",
                s.x, s.y, s.k, s.n, s.lambda
            )?;
        }
        Ok(())
    }
}

fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(what()))
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

// ---------------------------------------------------------------------------
// n = 3

/// Solves `3u^2 = 1 + 11^k` through `X^2 - 33 Y^2 = 3`, `X = 3u`, `Y = 11^m`,
/// `k = 2m + 1`. Returns the witness text and the admissible `(u, k)`.
fn pell33_branch() -> Result<(String, Vec<(BigInt, u64)>)> {
    let problem = PellProblem::new(33, 3)?;
    let d = problem.d().clone();
    let bases = pell::base_solutions(&problem)?;
    let (unit, unit_sign) = pell::fundamental_unit(&d)?;
    invariant(unit_sign == 1, || {
        "fundamental unit of Z[sqrt 33] has norm -1".into()
    })?;
    let seed = QuadPair::new(6, 1);
    invariant(bases.contains(&seed), || {
        format!("base solutions {bases:?} miss 6+sqrt33")
    })?;

    // Every base is +-(6 + sqrt33) times a unit power, so all solutions are
    // +-(6 + sqrt33)(23 + 4 sqrt33)^r and Y = +-y_r.
    let near = pell::orbit_two_sided(&seed, &unit, &d, -2, 2)?;
    for b in &bases {
        invariant(near.iter().any(|(_, p)| p == b || &p.neg() == b), || {
            format!("base ({}, {}) outside the orbit of 6+sqrt33", b.x, b.y)
        })?;
    }
    let pts = pell::orbit_two_sided(&seed, &unit, &d, -1, 0)?;
    let y = BinaryRecurrence::new(&unit.x * 2, 1, pts[0].1.y.clone(), pts[1].1.y.clone());
    invariant(y == BinaryRecurrence::pell33(), || {
        format!("unexpected recurrence {y:?}")
    })?;

    let cycle = y.residues_mod(BASE, -1)?;
    let zeros = y.zero_classes_mod(BASE)?;
    invariant(
        zeros.classes == BTreeSet::from([5]) && zeros.period == 11,
        || format!("zero classes mod 11: {zeros:?}"),
    )?;
    let zero_class = 5i64;
    let y5 = y.term(zero_class)?;
    let factors = ntheory::trial_factor(&y5.abs(), 1_000_000)?;
    invariant(factors.is_complete(), || {
        format!("y_5 = {y5} not fully factored")
    })?;
    let blockers: Vec<u64> = factors
        .factors
        .iter()
        .map(|(q, _)| u64::try_from(q).expect("trial factor fits u64"))
        .filter(|&q| q != BASE)
        .collect();
    let mut propagating = Vec::new();
    for &q in &blockers {
        if y.divisor_propagation(q, zero_class, zeros.period)? {
            propagating.push(q);
        }
    }
    invariant(!propagating.is_empty(), || {
        "no prime propagates through the zero class".into()
    })?;

    // m >= 1 needs 11 | y_r, hence r = 5 (mod 11), hence blocker | y_r: so m = 0.
    // |y_r| = 1 only at r in {-1, 0}: |y_r| increases for r >= 0 and y_{-1-j} = -y_j.
    let hits = y.power_terms(BASE, -1, 30)?;
    invariant(hits == vec![(-1, 0), (0, 0)], || {
        format!("power terms {hits:?}")
    })?;
    let (y_m1, y0, y1) = (y.term(-1)?, y.term(0)?, y.term(1)?);
    invariant(y1 > y0 && y0.is_positive(), || "y_r not increasing".into())?;
    invariant(y_m1 == -&y0, || "symmetry y_{-1} = -y_0 fails".into())?;

    let m = 0u64;
    let k = 2 * m + 1;
    let admissible: Vec<(BigInt, u64)> = bases
        .iter()
        .filter(|b| b.y.is_one())
        .filter_map(|b| {
            let (u, r) = b.x.div_rem(&BigInt::from(3));
            r.is_zero().then_some((u, k))
        })
        .collect();

    let witness = format!(
        "X^2-33Y^2=3 base solutions {{{}}}, unit (23,4); Y=+-y_r, y_(-1)=-1, y_0=1, y_(r+1)=46y_r-y_(r-1); \
         y mod 11 = [{}] period {}; 11|y_r iff r in {{{}}} mod {}; y_5={} = {}; \
         divisor_propagation(q, 5 mod 11)=true for q in {{{}}}; power_terms(11,-1..30)={{{}}}; \
         m=0 is the only power index; k=1, u=+-2",
        join(bases.iter().map(|b| format!("({},{})", b.x, b.y))),
        join(&cycle.residues),
        cycle.period,
        join(&zeros.classes),
        zeros.period,
        y5,
        factors
            .factors
            .iter()
            .map(|(q, e)| if *e == 1 { q.to_string() } else { format!("{q}^{e}") })
            .collect::<Vec<_>>()
            .join("*"),
        join(&propagating),
        join(hits.iter().map(|(r, e)| format!("(r={r},e={e})"))),
    );
    Ok((witness, admissible))
}

/// Primitive solutions with `n = 3`: `x + 11^k i = (u + vi)^3` in Z[i], so
/// `11^k = v (3u^2 - v^2)` and `v` is `+-1` or `+-11^k`.
pub fn solve_n3() -> Result<(BTreeSet<SolutionTuple>, Certificate)> {
    let mut cert = Certificate::new(case::N3);
    let mut found = BTreeSet::new();

    // v = -1: 3u^2 = 1 - 11^k < 0.
    cert.branch(
        "v=-1: 3u^2 = 1 - 11^k",
        "sign",
        verdict::REJECTED,
        "3u^2=1-11^k: RHS<0 since 11^k >= 11 for k >= 1",
    );

    // v = +1: 3u^2 = 1 + 11^k.
    let mut witness =
        String::from("k even: 1+11^k = 2 (mod 3), LHS = 0 (mod 3), rejected; k odd: ");
    let (pell_witness, admissible) = pell33_branch()?;
    witness.push_str(&pell_witness);
    let v = BigInt::one();
    for (u, k) in &admissible {
        invariant(gaussian::imag_identity_rhs(u, &v) == pow11(*k), || {
            format!("11^{k} != v(3u^2-v^2) at u={u}")
        })?;
        let alpha = GaussianInteger::new(u.clone(), v.clone());
        let cube = alpha.pow(3);
        if !cube.re.is_positive() {
            continue;
        }
        let t = SolutionTuple::confirmed(cube.re.clone(), alpha.norm(), *k, 3)?;
        let root = gaussian::nth_root(&cube, 3)?;
        invariant(
            root.as_ref().is_some_and(|r| r.is_associate(&alpha)),
            || format!("cube root of {cube} is not {alpha}"),
        )?;
        witness.push_str(&format!("; ({alpha})^3 = {cube} gives {t}"));
        found.insert(t);
    }
    cert.branch(
        "v=+1: 3u^2 = 1 + 11^k",
        "mod 3 for even k; Pell X^2-33Y^2=3 with lucas zero classes mod 11 and divisor propagation for odd k",
        verdict::SOLUTION,
        witness,
    );

    // v = 11^k: 3u^2 = 11^(2k) + 1 = 2 (mod 3).
    cert.branch(
        "v=+11^k: 3u^2 = 11^(2k) + 1",
        "mod 3",
        verdict::REJECTED,
        "11^(2k)+1 = 2 (mod 3) while 3u^2 = 0 (mod 3)",
    );

    // v = -11^k: (11^k)^2 - 3u^2 = 1.
    let screen = primdiv::carmichael_screen(&BigInt::from(3), BASE, CARMICHAEL_THRESHOLD)?;
    invariant(screen.verdict.is_excluded(), || {
        format!("D=3 screen: {}", screen.verdict)
    })?;
    cert.branch(
        "v=-11^k: 3u^2 = 11^(2k) - 1, so X=11^k solves X^2-3Y^2=1",
        "carmichael_screen(D=3, p=11, m_bound=12)",
        screen.verdict.to_string(),
        format!(
            "X_0..X_12 = [{}] contain no 11^e with e >= 1; X=1 at m in {{{}}} means k=0, discarded (k >= 1); \
             for m > 12 X_m has a primitive prime factor = +-1 (mod m) and 11 != +-1 (mod m)",
            join(screen.direct.iter().map(|c| &c.x)),
            join(screen.trivial_hits()),
        ),
    );

    for t in &found {
        cert.solutions.push(SolutionRecord::new(t, 0));
    }
    Ok((found, cert))
}

// ---------------------------------------------------------------------------
// n = 4

/// No primitive solutions with `n = 4`.
pub fn solve_n4() -> Result<(BTreeSet<SolutionTuple>, Certificate)> {
    let mut cert = Certificate::new(case::N4);
    cert.branch(
        "x even, y odd",
        "mod 4",
        verdict::HOLDS,
        "11^(2k) = 1 (mod 4) and x^2+1 is never 0 (mod 4), so y is odd and x is even; \
         then gcd(y^2-x, y^2+x) divides gcd(2y^2, 2x) = 2 and both are odd",
    );
    cert.branch(
        "(y^2-x)(y^2+x) = 11^(2k) with coprime factors",
        "unique factorization",
        verdict::HOLDS,
        "y^2+x > y^2-x > 0 forces y^2-x = 1, y^2+x = 11^(2k); adding: (11^k)^2 - 2y^2 = -1",
    );
    let screen = primdiv::carmichael_screen(&BigInt::from(2), BASE, CARMICHAEL_THRESHOLD)?;
    invariant(screen.verdict.is_excluded(), || {
        format!("D=2 screen: {}", screen.verdict)
    })?;
    cert.branch(
        "X=11^k solves X^2-2Y^2=-1",
        "carmichael_screen(D=2, p=11, m_bound=12)",
        screen.verdict.to_string(),
        format!(
            "X_0..X_12 = [{}] contain no 11^e with e >= 1; X=1 at m in {{{}}} means k=0, discarded (k >= 1); \
             for m > 12 X_m has a primitive prime factor = +-1 (mod m) and 11 != +-1 (mod m)",
            join(screen.direct.iter().map(|c| &c.x)),
            join(screen.trivial_hits()),
        ),
    );
    Ok((BTreeSet::new(), cert))
}

// ---------------------------------------------------------------------------
// prime n >= 5

/// No primitive solutions with prime `n >= 5`.
pub fn solve_prime_ge5(n: u64) -> Result<(BTreeSet<SolutionTuple>, Certificate)> {
    if n < 5 || !ntheory::is_prime(n) {
        return domain(format!("exponent must be a prime >= 5, got {n}"));
    }
    let mut cert = Certificate::new(format!("{} (n={n})", case::PRIME));
    cert.branch(
        format!("x + 11^k i = alpha^{n}, alpha = u + vi"),
        "Z[i] factorization",
        verdict::HOLDS,
        format!(
            "x even, y odd make x+11^k i and x-11^k i coprime; every unit is a {n}-th power; \
             u_{n} = (alpha^{n} - conj(alpha)^{n}) / (alpha - conj(alpha)) = 11^k / v is an integer"
        ),
    );
    let table = DefectiveTable::builtin();
    let gaussian_rows = table.gaussian_rows(n);
    invariant(gaussian_rows.is_empty(), || {
        format!("defective Z[i] rows at n={n}")
    })?;
    cert.branch(
        format!("u_{n} has no primitive divisor"),
        "defective_table_check",
        verdict::REJECTED,
        format!(
            "table rows at n={n}: {}; none has a = 2u, b = -4v^2 (no Z[i] roots); rows stop at n={}",
            table.rows().iter().filter(|r| r.n == n).count(),
            table.max_index()
        ),
    );
    let screen = primdiv::congruence_screen(BASE, n)?;
    invariant(screen.is_excluded(), || {
        format!("congruence screen at n={n}: {screen}")
    })?;
    let legendre = ntheory::legendre(&BigInt::from(-1), BASE)?;
    cert.branch(
        format!("11 is a primitive divisor of u_{n}"),
        format!("congruence_screen(p=11, n={n})"),
        screen.to_string(),
        format!(
            "primitive q satisfies q = (-1|q) (mod {n}); (-1|11) = {legendre}; 11 mod {n} = {}",
            BASE % n
        ),
    );
    Ok((BTreeSet::new(), cert))
}

// ---------------------------------------------------------------------------
// general n

/// Which lemma covers a given exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentCase {
    PrimeAtLeast5(u64),
    Four,
    Three,
}

/// Smallest prime factor `>= 5` if any; otherwise `4 | n`; otherwise `3 | n`.
pub fn dispatch_exponent(n: u64) -> Result<ExponentCase> {
    if n < 3 {
        return domain(format!("n must be >= 3, got {n}"));
    }
    let mut rest = n;
    while rest.is_multiple_of(2) {
        rest /= 2;
    }
    while rest.is_multiple_of(3) {
        rest /= 3;
    }
    if rest > 1 {
        let mut p = 5;
        while !rest.is_multiple_of(p) {
            p += 2;
        }
        return Ok(ExponentCase::PrimeAtLeast5(p));
    }
    Ok(if n.is_multiple_of(4) {
        ExponentCase::Four
    } else {
        ExponentCase::Three
    })
}

fn reduction_certificate(family: &[SolutionTuple], lambda_max: u64) -> Result<Certificate> {
    let mut cert = Certificate::new(case::REDUCTION);
    let spot = oracle::lebesgue_spot_check(&BigInt::from(LEBESGUE_SPOT_X), LEBESGUE_SPOT_N);
    invariant(spot, || "X^2 + 1 = Y^n has a small solution".into())?;
    cert.branch(
        "x = 11^a x1, y = 11^b y1 with 2k = nb <= 2a",
        "citation: Lebesgue, X^2 + 1 = Y^n has no solutions with n >= 3",
        verdict::REJECTED,
        format!("oracle spot check: no x <= {LEBESGUE_SPOT_X}, 3 <= n <= {LEBESGUE_SPOT_N} with x^2+1 = y^n"),
    );
    cert.branch(
        "x = 11^a x1, y = 11^b y1 with 2a = nb < 2k",
        "reduce_to_primitive / lift",
        verdict::LIFTED,
        "(x1, y1, k - a, n) is primitive; from (2,5,1,3): 2k = 2 + 2a = 2 + 3b, a = 3l, b = 2l",
    );
    cert.branch(
        "primitive solution with n >= 3",
        "descent: d > 2, d | n gives primitive (x, y^(n/d), k, d)",
        verdict::HOLDS,
        "prime p >= 5 dividing n -> case prime n>=5; else 4 | n -> case n=4; else n = 3j with j | 2^a 3^b -> case n=3",
    );
    cert.branch(
        "n = 3j, j > 1, no prime factor >= 5, 4 does not divide n",
        "descent to n=3",
        verdict::REJECTED,
        "(x, y^j, k, 3) must be (2,5,1,3), but y^j = 5 has no solution with j > 1",
    );
    let large: Vec<u64> = (13..=1000)
        .filter(|&m| BASE % m == 1 || BASE % m == m - 1)
        .collect();
    invariant(large.is_empty(), || format!("11 = +-1 mod {large:?}"))?;
    cert.branch(
        "prime n >= 13",
        "congruence_screen(p=11, n)",
        "excluded: congruence contradiction",
        "11 = +-1 (mod n) needs n | 10 or n | 12, impossible for n >= 13",
    );
    for (lambda, t) in (0..=lambda_max).zip(family) {
        cert.solutions.push(SolutionRecord::new(t, lambda));
    }
    Ok(cert)
}

/// Exponents that get their own certificate from [`solve_all`].
pub const CERTIFIED_PRIMES: [u64; 4] = [5, 7, 11, 13];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveAll {
    pub family: Vec<SolutionRecord>,
    pub certificates: Vec<Certificate>,
}

impl SolveAll {
    pub fn tuples(&self) -> Vec<SolutionTuple> {
        self.family.iter().map(SolutionRecord::tuple).collect()
    }
}

/// Runs every case and lists the solution family for `lambda = 0..=lambda_max`.
pub fn solve_all(lambda_max: u64) -> Result<SolveAll> {
    #[derive(Clone, Copy)]
    enum Job {
        N3,
        N4,
        Prime(u64),
    }
    let jobs: Vec<Job> = [Job::N3, Job::N4]
        .into_iter()
        .chain(CERTIFIED_PRIMES.into_iter().map(Job::Prime))
        .collect();
    let results: Vec<(BTreeSet<SolutionTuple>, Certificate)> = jobs
        .par_iter()
        .map(|job| match *job {
            Job::N3 => solve_n3(),
            Job::N4 => solve_n4(),
            Job::Prime(p) => solve_prime_ge5(p),
        })
        .collect::<Result<_>>()?;

    let primitives: BTreeSet<SolutionTuple> = results
        .iter()
        .flat_map(|(s, _)| s.iter().cloned())
        .collect();
    let mut family = Vec::new();
    let mut records = Vec::new();
    for p in &primitives {
        for lambda in 0..=lambda_max {
            let t = lift(p, lambda);
            invariant(verify_solution(&t)?, || format!("lifted {t} fails"))?;
            records.push(SolutionRecord::new(&t, lambda));
            family.push(t);
        }
    }
    let mut certificates = vec![reduction_certificate(&family, lambda_max)?];
    certificates.extend(results.into_iter().map(|(_, c)| c));
    Ok(SolveAll {
        family: records,
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: i64, y: i64, k: u64, n: u64) -> SolutionTuple {
        SolutionTuple::new(x, y, k, n).unwrap()
    }

    #[test]
    fn verify_examples() {
        assert!(verify_solution(&t(2, 5, 1, 3)).unwrap());
        assert!(verify_solution(&t(2662, 605, 4, 3)).unwrap());
        assert!(!verify_solution(&t(3, 5, 1, 3)).unwrap());
        assert!(SolutionTuple::new(2, 5, 1, 2).is_err());
        assert!(SolutionTuple::new(0, 5, 1, 3).is_err());
        assert!(SolutionTuple::new(2, 5, 0, 3).is_err());
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_primitive(0), t(2, 5, 1, 3));
        assert_eq!(lift_primitive(1), t(2662, 605, 4, 3));
        assert_eq!(lift_primitive(2), t(3543122, 73205, 7, 3));
    }

    #[test]
    fn reduce_examples() {
        let r = reduce_to_primitive(&t(2, 5, 1, 3)).unwrap();
        assert_eq!((r.primitive, r.a, r.b), (t(2, 5, 1, 3), 0, 0));
        let r = reduce_to_primitive(&t(2662, 605, 4, 3)).unwrap();
        assert_eq!((r.primitive, r.a, r.b), (t(2, 5, 1, 3), 3, 2));
        let r = reduce_to_primitive(&lift_primitive(2)).unwrap();
        assert_eq!((r.primitive, r.a, r.b), (t(2, 5, 1, 3), 6, 4));
        assert!(matches!(
            reduce_to_primitive(&t(3, 5, 1, 3)),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn reduce_round_trip() {
        for lambda in 0..=5 {
            let r = reduce_to_primitive(&lift_primitive(lambda)).unwrap();
            assert_eq!(
                (r.primitive, r.a, r.b),
                (primitive_solution(), 3 * lambda, 2 * lambda)
            );
        }
    }

    #[test]
    fn lift_even_exponent() {
        // hypothetical primitive tuple with n = 4: a = 2l, b = l
        let p = SolutionTuple::new_unchecked(BigInt::from(7), BigInt::from(3), 1, 4);
        let l = lift(&p, 1);
        assert_eq!(
            (l.x, l.y, l.k),
            (BigInt::from(7 * 121), BigInt::from(33), 3)
        );
    }

    #[test]
    fn n3_certificate() {
        let (sols, cert) = solve_n3().unwrap();
        assert_eq!(sols, BTreeSet::from([t(2, 5, 1, 3)]));
        assert_eq!(cert.case, case::N3);
        assert_eq!(cert.branches.len(), 4);
        assert!(cert.is_closed());
        assert!(cert
            .branches
            .iter()
            .any(|b| b.witness.contains("3u^2=1-11^k: RHS<0")));
        let pell = &cert.branches[1];
        assert!(pell.witness.contains("m=0 is the only power index"));
        assert!(pell.witness.contains("y_5=210044879 = 11*373*51193"));
        assert!(pell.witness.contains("[-1,1,3,5,-4,-2,0,2,4,-5,-3]"));
        assert_eq!(cert.branches[3].verdict, "excluded: carmichael large index");
        assert_eq!(cert.solutions.len(), 1);
    }

    #[test]
    fn n4_certificate() {
        let (sols, cert) = solve_n4().unwrap();
        assert!(sols.is_empty());
        assert!(cert.is_closed());
        assert_eq!(cert.branches[0].premise, "x even, y odd");
        let screen = &cert.branches[2];
        assert!(screen.method.contains("D=2"));
        assert!(screen.witness.contains("[1,1,3,7,17,"));
    }

    #[test]
    fn prime_certificates() {
        for n in [5, 7, 11, 13, 101] {
            let (sols, cert) = solve_prime_ge5(n).unwrap();
            assert!(sols.is_empty());
            assert!(cert.is_closed());
            assert_eq!(
                cert.branches.last().unwrap().verdict,
                "excluded: congruence contradiction"
            );
        }
        assert!(solve_prime_ge5(4).is_err());
        assert!(solve_prime_ge5(9).is_err());
        assert!(solve_prime_ge5(3).is_err());
    }

    #[test]
    fn dispatch() {
        use ExponentCase::*;
        assert_eq!(dispatch_exponent(3).unwrap(), Three);
        assert_eq!(dispatch_exponent(4).unwrap(), Four);
        assert_eq!(dispatch_exponent(5).unwrap(), PrimeAtLeast5(5));
        assert_eq!(dispatch_exponent(6).unwrap(), Three);
        assert_eq!(dispatch_exponent(8).unwrap(), Four);
        assert_eq!(dispatch_exponent(9).unwrap(), Three);
        assert_eq!(dispatch_exponent(12).unwrap(), Four);
        assert_eq!(dispatch_exponent(35).unwrap(), PrimeAtLeast5(5));
        assert_eq!(dispatch_exponent(49).unwrap(), PrimeAtLeast5(7));
        assert!(dispatch_exponent(2).is_err());
    }

    #[test]
    fn solve_all_family() {
        let r = solve_all(2).unwrap();
        assert_eq!(
            r.tuples(),
            vec![lift_primitive(0), lift_primitive(1), lift_primitive(2)]
        );
        let cases: Vec<&str> = r.certificates.iter().map(|c| c.case.as_str()).collect();
        for want in [
            "reduction",
            "n=3",
            "n=4",
            "prime n>=5 (n=5)",
            "prime n>=5 (n=7)",
        ] {
            assert!(cases.contains(&want), "{want}");
        }
        for c in &r.certificates {
            assert!(c.is_closed(), "{}", c.case);
        }
        for t in r.tuples() {
            assert!(verify_solution(&t).unwrap());
            assert!(t.x.is_even() && t.y.is_odd());
        }
    }

    #[test]
    fn certificate_json_round_trip() {
        let (_, cert) = solve_n3().unwrap();
        let json = cert.to_json();
        assert!(json.contains("\"branches\""));
        assert_eq!(Certificate::from_json(&json).unwrap(), cert);
        let text = cert.to_text();
        assert!(text.starts_with("equation: x^2 + 11^(2k) = y^n\ncase: n=3\n"));
        assert!(text.contains("solution: 2 5 1 3 lambda=0"));
    }
}
