//! Python bindings for `dioph11-core`.
//!
//! Integers cross the boundary as Python `int`s of any size. Domain and
//! parse errors raise `ValueError`; internal invariant failures raise
//! `RuntimeError`.

use dioph11_core::gaussian::{self, GaussianInteger as CoreGi};
use dioph11_core::lucas::BinaryRecurrence;
use dioph11_core::oracle::{self, SearchBounds};
use dioph11_core::pell::{self, QuadPair, SignPolicy};
use dioph11_core::{ntheory, primdiv, solver, Error, SolutionTuple};
use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

type Tuple4 = (BigInt, BigInt, u64, u64);
type Factors = (Vec<(BigInt, u32)>, Option<BigInt>);

fn to_tuple(t: &SolutionTuple) -> Tuple4 {
    (t.x.clone(), t.y.clone(), t.k, t.n)
}

fn recurrence(p: BigInt, q: BigInt, t_minus1: BigInt, t0: BigInt) -> BinaryRecurrence {
    BinaryRecurrence { p, q, t_minus1, t0 }
}

/// Element `re + im*i` of the Gaussian integers.
#[pyclass(
    name = "GaussianInteger",
    module = "dioph11",
    frozen,
    eq,
    hash,
    skip_from_py_object
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyGi(CoreGi);

#[pymethods]
impl PyGi {
    #[new]
    fn new(re: BigInt, im: BigInt) -> Self {
        PyGi(CoreGi::new(re, im))
    }

    #[getter]
    fn re(&self) -> BigInt {
        self.0.re.clone()
    }

    #[getter]
    fn im(&self) -> BigInt {
        self.0.im.clone()
    }

    fn norm(&self) -> BigInt {
        self.0.norm()
    }

    fn conj(&self) -> Self {
        PyGi(self.0.conj())
    }

    fn normalize(&self) -> Self {
        PyGi(self.0.normalize())
    }

    fn is_unit(&self) -> bool {
        self.0.is_unit()
    }

    fn is_associate(&self, other: &PyGi) -> bool {
        self.0.is_associate(&other.0)
    }

    fn divides(&self, other: &PyGi) -> bool {
        self.0.divides(&other.0)
    }

    fn divmod(&self, other: &PyGi) -> PyResult<(PyGi, PyGi)> {
        let (q, r) = self.0.div_rem(&other.0).map_err(py_err)?;
        Ok((PyGi(q), PyGi(r)))
    }

    fn __add__(&self, other: &PyGi) -> Self {
        PyGi(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyGi) -> Self {
        PyGi(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyGi) -> Self {
        PyGi(&self.0 * &other.0)
    }

    fn __neg__(&self) -> Self {
        PyGi(-&self.0)
    }

    fn __pow__(&self, e: u64, _modulo: Option<Py<PyAny>>) -> Self {
        PyGi(self.0.pow(e))
    }

    fn __repr__(&self) -> String {
        format!("GaussianInteger({}, {})", self.0.re, self.0.im)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyfunction]
fn gaussian_gcd(a: &PyGi, b: &PyGi) -> PyResult<PyGi> {
    gaussian::gcd(&a.0, &b.0).map(PyGi).map_err(py_err)
}

/// A `beta` with `beta^n` associate to `target`, or `None`.
#[pyfunction]
fn gaussian_nth_root(target: &PyGi, n: u32) -> PyResult<Option<PyGi>> {
    Ok(gaussian::nth_root(&target.0, n).map_err(py_err)?.map(PyGi))
}

#[pyfunction]
fn isqrt(n: BigInt) -> PyResult<BigInt> {
    ntheory::isqrt(&n).map_err(py_err)
}

/// `(base, e)` with `n = base^e` and `e >= 2` maximal, or `None`.
#[pyfunction]
fn perfect_power(n: BigInt) -> PyResult<Option<(BigInt, u32)>> {
    ntheory::perfect_power(&n).map_err(py_err)
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    ntheory::is_prime(n)
}

#[pyfunction]
fn legendre(a: BigInt, p: u64) -> PyResult<i8> {
    ntheory::legendre(&a, p).map_err(py_err)
}

/// `([(p, e), ...], cofactor)`; the cofactor is `None` when the factorization is complete.
#[pyfunction]
#[pyo3(signature = (n, bound = 1_000_000))]
fn trial_factor(n: BigInt, bound: u64) -> PyResult<Factors> {
    let f = ntheory::trial_factor(&n, bound).map_err(py_err)?;
    Ok((f.factors, f.cofactor))
}

/// `((x1, y1), norm)` for the fundamental unit of `Z[sqrt(d)]`.
#[pyfunction]
fn fundamental_unit(d: BigInt) -> PyResult<((BigInt, BigInt), i8)> {
    let (u, s) = pell::fundamental_unit(&d).map_err(py_err)?;
    Ok(((u.x, u.y), s))
}

#[pyfunction]
fn orbit(
    base: (BigInt, BigInt),
    unit: (BigInt, BigInt),
    d: BigInt,
    count: usize,
) -> PyResult<Vec<(BigInt, BigInt)>> {
    let pts = pell::orbit(
        &QuadPair::new(base.0, base.1),
        &QuadPair::new(unit.0, unit.1),
        &d,
        count,
    )
    .map_err(py_err)?;
    Ok(pts.into_iter().map(|p| (p.x, p.y)).collect())
}

/// Solutions of `X^2 - d Y^2 = n` with `0 <= Y` in the reduced window.
#[pyfunction]
fn pell_base_solutions(d: BigInt, n: BigInt) -> PyResult<Vec<(BigInt, BigInt)>> {
    let problem = pell::PellProblem::new(d, n).map_err(py_err)?;
    let pts = pell::base_solutions(&problem).map_err(py_err)?;
    Ok(pts.into_iter().map(|p| (p.x, p.y)).collect())
}

/// `policy` is one of `interleaved`, `plus`, `minus`.
#[pyfunction]
#[pyo3(signature = (d, count, policy = "interleaved"))]
fn x_sequence(d: BigInt, count: usize, policy: &str) -> PyResult<Vec<BigInt>> {
    let policy = match policy {
        "interleaved" => SignPolicy::Interleaved,
        "plus" => SignPolicy::NormPlusOne,
        "minus" => SignPolicy::NormMinusOne,
        other => return Err(PyValueError::new_err(format!("unknown policy {other:?}"))),
    };
    pell::x_sequence(&d, policy, count).map_err(py_err)
}

#[pyfunction]
fn lucas_term(p: BigInt, q: BigInt, t_minus1: BigInt, t0: BigInt, r: i64) -> PyResult<BigInt> {
    recurrence(p, q, t_minus1, t0).term(r).map_err(py_err)
}

/// `{"period", "preperiod", "start", "residues"}` for the recurrence modulo `m`.
#[pyfunction]
fn lucas_residues<'py>(
    py: Python<'py>,
    p: BigInt,
    q: BigInt,
    t_minus1: BigInt,
    t0: BigInt,
    m: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let c = recurrence(p, q, t_minus1, t0)
        .residues_mod(m, -1)
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("modulus", c.modulus)?;
    d.set_item("period", c.period)?;
    d.set_item("preperiod", c.preperiod)?;
    d.set_item("start", c.start)?;
    d.set_item("residues", c.residues)?;
    Ok(d)
}

/// `(period, sorted zero classes)` of the recurrence modulo `m`.
#[pyfunction]
fn lucas_zero_classes(
    p: BigInt,
    q: BigInt,
    t_minus1: BigInt,
    t0: BigInt,
    m: u64,
) -> PyResult<(u64, Vec<u64>)> {
    let z = recurrence(p, q, t_minus1, t0)
        .zero_classes_mod(m)
        .map_err(py_err)?;
    Ok((z.period, z.classes.into_iter().collect()))
}

#[pyfunction]
fn divisor_propagation(
    p: BigInt,
    q: BigInt,
    t_minus1: BigInt,
    t0: BigInt,
    divisor: u64,
    class_: i64,
    modulus: u64,
) -> PyResult<bool> {
    recurrence(p, q, t_minus1, t0)
        .divisor_propagation(divisor, class_, modulus)
        .map_err(py_err)
}

/// `(excluded, reason)`.
#[pyfunction]
fn congruence_screen(p: u64, n: u64) -> PyResult<(bool, Option<String>)> {
    let v = primdiv::congruence_screen(p, n).map_err(py_err)?;
    Ok((v.is_excluded(), v.reason().map(|r| r.to_string())))
}

/// `{"excluded", "reason", "x_values", "nontrivial_hits"}`.
#[pyfunction]
#[pyo3(signature = (d, p = 11, m_bound = 12))]
fn carmichael_screen<'py>(
    py: Python<'py>,
    d: BigInt,
    p: u64,
    m_bound: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = primdiv::carmichael_screen(&d, p, m_bound).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("excluded", r.verdict.is_excluded())?;
    out.set_item("reason", r.verdict.reason().map(|x| x.to_string()))?;
    out.set_item("nontrivial_hits", r.nontrivial_hits())?;
    out.set_item(
        "x_values",
        r.direct.into_iter().map(|c| c.x).collect::<Vec<_>>(),
    )?;
    Ok(out)
}

#[pyfunction]
fn verify_solution(x: BigInt, y: BigInt, k: u64, n: u64) -> PyResult<bool> {
    let t = SolutionTuple::new(x, y, k, n).map_err(py_err)?;
    solver::verify_solution(&t).map_err(py_err)
}

/// `((x1, y1, k1, n), a, b)` with `x = 11^a x1`, `y = 11^b y1`.
#[pyfunction]
fn reduce_to_primitive(x: BigInt, y: BigInt, k: u64, n: u64) -> PyResult<(Tuple4, u64, u64)> {
    let t = SolutionTuple::new(x, y, k, n).map_err(py_err)?;
    let r = solver::reduce_to_primitive(&t).map_err(py_err)?;
    Ok((to_tuple(&r.primitive), r.a, r.b))
}

#[pyfunction]
fn lift_primitive(lambda_: u64) -> Tuple4 {
    to_tuple(&solver::lift_primitive(lambda_))
}

/// The solution family and every certificate, as a JSON document.
#[pyfunction]
fn solve_all(py: Python<'_>, lambda_max: u64) -> PyResult<String> {
    let all = py
        .detach(|| solver::solve_all(lambda_max))
        .map_err(py_err)?;
    serde_json::to_string(&all).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (x_max, k_max, n_max, prime = 11, jobs = 1))]
fn brute_force_search(
    py: Python<'_>,
    x_max: BigInt,
    k_max: u64,
    n_max: u64,
    prime: u64,
    jobs: usize,
) -> PyResult<Vec<Tuple4>> {
    let b = SearchBounds::new(x_max, k_max, n_max).with_base_prime(prime);
    let hits = py
        .detach(|| oracle::brute_force_search_with_jobs(&b, jobs))
        .map_err(py_err)?;
    Ok(hits.iter().map(to_tuple).collect())
}

#[pyfunction]
fn lebesgue_spot_check(py: Python<'_>, x_max: BigInt, n_max: u64) -> bool {
    py.detach(|| oracle::lebesgue_spot_check(&x_max, n_max))
}

#[pymodule]
fn dioph11(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("EQUATION", solver::EQUATION)?;
    m.add_class::<PyGi>()?;
    m.add_function(wrap_pyfunction!(gaussian_gcd, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_nth_root, m)?)?;
    m.add_function(wrap_pyfunction!(isqrt, m)?)?;
    m.add_function(wrap_pyfunction!(perfect_power, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(legendre, m)?)?;
    m.add_function(wrap_pyfunction!(trial_factor, m)?)?;
    m.add_function(wrap_pyfunction!(fundamental_unit, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(pell_base_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(x_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(lucas_term, m)?)?;
    m.add_function(wrap_pyfunction!(lucas_residues, m)?)?;
    m.add_function(wrap_pyfunction!(lucas_zero_classes, m)?)?;
    m.add_function(wrap_pyfunction!(divisor_propagation, m)?)?;
    m.add_function(wrap_pyfunction!(congruence_screen, m)?)?;
    m.add_function(wrap_pyfunction!(carmichael_screen, m)?)?;
    m.add_function(wrap_pyfunction!(verify_solution, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_to_primitive, m)?)?;
    m.add_function(wrap_pyfunction!(lift_primitive, m)?)?;
    m.add_function(wrap_pyfunction!(solve_all, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_search, m)?)?;
    m.add_function(wrap_pyfunction!(lebesgue_spot_check, m)?)?;
    Ok(())
}
