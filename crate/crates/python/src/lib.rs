//! Python bindings. Integers cross the boundary as Python `int`s of any
//! size; certificates and scans come back as plain dicts and lists.

use std::str::FromStr;

use gdet::measure::group_measure;
use gdet::search::default_workers;
use gdet::witness;
use gdet::{
    Assignment, CayleyTable, Claim, CyclicElem, DihedralElem, Factorization, GroupSpec, IntPoly,
    LambdaOptions, SearchConfig,
};
use num_bigint::BigInt;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

fn err(e: gdet::Error) -> PyErr {
    match e {
        gdet::Error::StateSpaceOverflow { .. } => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn from_json<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

fn factorization(n: &Bound<'_, PyAny>) -> PyResult<Factorization> {
    let text = if let Ok(s) = n.extract::<String>() {
        s
    } else {
        n.extract::<BigInt>()?.to_string()
    };
    Factorization::from_str(&text).map_err(err)
}

fn cyclic(n: u64, coeffs: Vec<BigInt>) -> PyResult<CyclicElem> {
    CyclicElem::from_dense(n, &coeffs).map_err(err)
}

/// Determinant of the circulant with first column `coeffs` (zero-padded to n).
#[pyfunction]
fn cyclic_measure(coeffs: Vec<BigInt>, n: u64) -> PyResult<BigInt> {
    gdet::cyclic_measure(&cyclic(n, coeffs)?).map_err(err)
}

/// Group determinant on D_2n of `f(x) + y g(x)`.
#[pyfunction]
#[pyo3(signature = (a, b, n))]
fn dihedral_measure(a: Vec<BigInt>, b: Vec<BigInt>, n: u64) -> PyResult<BigInt> {
    let e = DihedralElem::new(cyclic(n, a)?, cyclic(n, b)?).map_err(err)?;
    gdet::dihedral_measure(&e).map_err(err)
}

#[pyfunction]
fn abelian_measure(values: Vec<BigInt>, dims: Vec<usize>) -> PyResult<BigInt> {
    gdet::abelian_measure(&Assignment(values), &dims).map_err(err)
}

/// Determinant over an explicit multiplication table.
#[pyfunction]
#[pyo3(signature = (table, values, identity = 0))]
fn cayley_determinant(table: Vec<Vec<usize>>, values: Vec<BigInt>, identity: usize) -> PyResult<BigInt> {
    let t = CayleyTable::new(table, identity).map_err(err)?;
    gdet::cayley_determinant(&t, &Assignment(values)).map_err(err)
}

/// `group` is `cyclic:N`, `dihedral:N` or `abelian:AxB...`.
#[pyfunction]
fn group_determinant(group: &str, values: Vec<BigInt>) -> PyResult<BigInt> {
    let spec = parse_group(group)?;
    group_measure(&spec, &Assignment(values)).map_err(err)
}

fn parse_group(s: &str) -> PyResult<GroupSpec> {
    let bad = || PyValueError::new_err(format!("invalid group {s:?}"));
    let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let spec = match kind {
        "cyclic" => GroupSpec::Cyclic(num(arg)?),
        "dihedral" => GroupSpec::Dihedral(num(arg)?),
        "abelian" => GroupSpec::AbelianProduct(arg.split('x').map(num).collect::<PyResult<_>>()?),
        _ => return Err(bad()),
    };
    spec.validate().map_err(err)?;
    Ok(spec)
}

#[pyfunction]
#[pyo3(signature = (v, order))]
fn log_measure(v: BigInt, order: u64) -> Option<f64> {
    gdet::log_measure(&v, order).ok()
}

#[pyfunction]
fn cyclotomic(m: u64) -> PyResult<Vec<BigInt>> {
    if m == 0 {
        return Err(PyValueError::new_err("m must be positive"));
    }
    Ok(gdet::cyclotomic(m).into_coeffs())
}

#[pyfunction]
fn resultant(p: Vec<BigInt>, q: Vec<BigInt>) -> PyResult<BigInt> {
    gdet::resultant(&IntPoly::from_coeffs(p), &IntPoly::from_coeffs(q)).map_err(err)
}

#[pyfunction]
fn cyclo_resultant(n: u64, m: u64) -> PyResult<BigInt> {
    gdet::cyclo_resultant_closed(n, m).map(BigInt::from).map_err(err)
}

/// `(ok, reasons)` where each reason is a dict naming the violated rule.
#[pyfunction]
fn admissible<'py>(
    py: Python<'py>,
    v: BigInt,
    n: &Bound<'py, PyAny>,
) -> PyResult<(bool, Bound<'py, PyAny>)> {
    let report = gdet::admissible(&v, &factorization(n)?);
    Ok((report.is_admissible(), from_json(py, &report.reasons)?))
}

#[pyfunction]
fn lambda_lower_bound(n: &Bound<'_, PyAny>) -> PyResult<u64> {
    Ok(gdet::lambda_lower_bound(&factorization(n)?))
}

/// Certificate dict; `n` may be an int or a string such as `"2^2*3*5"`.
#[pyfunction]
#[pyo3(signature = (n, search_window = None, max_states = None))]
fn certified_lambda<'py>(
    py: Python<'py>,
    n: &Bound<'py, PyAny>,
    search_window: Option<(i64, i64)>,
    max_states: Option<u128>,
) -> PyResult<Bound<'py, PyAny>> {
    let nf = factorization(n)?;
    let mut opts = LambdaOptions {
        search_window,
        workers: default_workers(),
        ..LambdaOptions::default()
    };
    if let Some(m) = max_states {
        opts.max_states = m;
    }
    let cert = py.detach(|| gdet::certified_lambda(&nf, &opts));
    from_json(py, &cert)
}

/// `(value, a, b)` with the smallest `|det| >= 2`, or `None`.
#[pyfunction]
#[pyo3(signature = (n, lo, hi, max_states = None))]
fn exhaustive_min(
    py: Python<'_>,
    n: u64,
    lo: i64,
    hi: i64,
    max_states: Option<u128>,
) -> PyResult<Option<(BigInt, Vec<BigInt>, Vec<BigInt>)>> {
    let mut cfg = SearchConfig::new(n, lo, hi).with_workers(default_workers());
    if let Some(m) = max_states {
        cfg.max_states = m;
    }
    let r = py.detach(|| gdet::exhaustive_min(&cfg)).map_err(err)?;
    Ok(r.map(|r| (r.value, r.elem.a.to_dense(), r.elem.b.to_dense())))
}

/// List of `(value, count, example)` sorted by value.
#[pyfunction]
#[pyo3(signature = (group, lo, hi, max_abs = None))]
fn value_scan(
    py: Python<'_>,
    group: &str,
    lo: i64,
    hi: i64,
    max_abs: Option<BigInt>,
) -> PyResult<Vec<(BigInt, u64, Vec<i64>)>> {
    let spec = parse_group(group)?;
    let mut cfg = SearchConfig::new(1, lo, hi).with_workers(default_workers());
    if let Some(m) = max_abs {
        cfg = cfg.with_max_abs(m);
    }
    let scan = py.detach(|| gdet::value_scan(&spec, &cfg)).map_err(err)?;
    Ok(scan
        .entries
        .into_iter()
        .map(|e| (e.value, e.count, e.example))
        .collect())
}

/// An element of Z[D_2n] with a claimed determinant.
#[pyclass(name = "Witness", frozen)]
struct PyWitness(gdet::Witness);

#[pymethods]
impl PyWitness {
    #[new]
    #[pyo3(signature = (n, a, b, claimed, provenance = "user"))]
    fn new(n: u64, a: Vec<BigInt>, b: Vec<BigInt>, claimed: BigInt, provenance: &str) -> PyResult<Self> {
        let elem = DihedralElem::new(cyclic(n, a)?, cyclic(n, b)?).map_err(err)?;
        Ok(PyWitness(gdet::Witness {
            elem,
            claim: Claim::Value(claimed),
            provenance: provenance.into(),
        }))
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str(s)
            .map(PyWitness)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn n(&self) -> u64 {
        self.0.n()
    }

    #[getter]
    fn a(&self) -> Vec<BigInt> {
        self.0.elem.a.to_dense()
    }

    #[getter]
    fn b(&self) -> Vec<BigInt> {
        self.0.elem.b.to_dense()
    }

    #[getter]
    fn claimed(&self) -> Option<BigInt> {
        self.0.claimed().cloned()
    }

    #[getter]
    fn provenance(&self) -> String {
        self.0.provenance.clone()
    }

    fn measure(&self, py: Python<'_>) -> PyResult<BigInt> {
        py.detach(|| self.0.measure()).map_err(err)
    }

    fn verify(&self, py: Python<'_>) -> bool {
        py.detach(|| gdet::verify(&self.0))
    }

    fn swapped(&self) -> Self {
        PyWitness(self.0.swapped())
    }

    fn compose(&self, other: &PyWitness) -> PyResult<Self> {
        gdet::compose(&[self.0.clone(), other.0.clone()])
            .map(PyWitness)
            .map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let claimed = self.0.claimed().map_or("?".into(), |c| c.to_string());
        format!("Witness(n={}, claimed={claimed}, provenance={:?})", self.0.n(), self.0.provenance)
    }
}

#[pyfunction]
fn odd_coprime(m: u64, n: u64) -> PyResult<PyWitness> {
    witness::odd_coprime(m, n).map(PyWitness).map_err(err)
}

#[pyfunction]
fn two_power(n: &Bound<'_, PyAny>) -> PyResult<PyWitness> {
    witness::two_power(&factorization(n)?).map(PyWitness).map_err(err)
}

#[pyfunction]
fn odd_prime_power(p: u64, n: &Bound<'_, PyAny>) -> PyResult<PyWitness> {
    witness::odd_prime_power(p, &factorization(n)?)
        .map(PyWitness)
        .map_err(err)
}

#[pyfunction]
fn d2p2(p: u64) -> PyResult<PyWitness> {
    witness::family_d2p2(p).map(PyWitness).map_err(err)
}

#[pymodule]
fn pygdet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWitness>()?;
    m.add_function(wrap_pyfunction!(cyclic_measure, m)?)?;
    m.add_function(wrap_pyfunction!(dihedral_measure, m)?)?;
    m.add_function(wrap_pyfunction!(abelian_measure, m)?)?;
    m.add_function(wrap_pyfunction!(cayley_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(group_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(log_measure, m)?)?;
    m.add_function(wrap_pyfunction!(cyclotomic, m)?)?;
    m.add_function(wrap_pyfunction!(resultant, m)?)?;
    m.add_function(wrap_pyfunction!(cyclo_resultant, m)?)?;
    m.add_function(wrap_pyfunction!(admissible, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(certified_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_min, m)?)?;
    m.add_function(wrap_pyfunction!(value_scan, m)?)?;
    m.add_function(wrap_pyfunction!(odd_coprime, m)?)?;
    m.add_function(wrap_pyfunction!(two_power, m)?)?;
    m.add_function(wrap_pyfunction!(odd_prime_power, m)?)?;
    m.add_function(wrap_pyfunction!(d2p2, m)?)?;
    Ok(())
}
