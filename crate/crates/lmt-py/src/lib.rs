//! Python bindings: terms, types, parsing, reduction, development and CPS.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use pyo3::exceptions::{PyRuntimeError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use lmt_core::cps::{cps_term, cps_type, identity_nat, lt_normalize};
use lmt_core::develop::{classify_shape, complete_dev, par_reducts};
use lmt_core::reduction::{
    join_search, normalize_with, term_reducts, RuleSet, Strategy, DEFAULT_MAX_STEPS, DEFAULT_STATE_CAP,
};
use lmt_core::syntax::{parse_program, parse_term, parse_type, pretty_term};
use lmt_core::testkit::{oracle_normal_forms, run_suite, Suite};
use lmt_core::typing::infer_term;
use lmt_core::{as_numeral, numeral, Expr, Term, TypeEnv};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn hash_of(x: &impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

/// A simple type: `N` or an arrow.
#[pyclass(name = "Type", frozen, module = "lmt")]
#[derive(Clone)]
struct PyType {
    inner: lmt_core::Type,
}

#[pymethods]
impl PyType {
    #[new]
    fn new(src: &str) -> PyResult<PyType> {
        Ok(PyType { inner: parse_type(src).map_err(value_error)? })
    }

    #[staticmethod]
    fn nat() -> PyType {
        PyType { inner: lmt_core::Type::Nat }
    }

    #[staticmethod]
    fn arrow(dom: &PyType, cod: &PyType) -> PyType {
        PyType { inner: lmt_core::Type::arrow(dom.inner.clone(), cod.inner.clone()) }
    }

    fn is_arrow(&self) -> bool {
        self.inner.domain().is_some()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Type('{}')", self.inner)
    }

    fn __eq__(&self, other: &PyType) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        hash_of(&self.inner)
    }
}

/// A term together with the types of its free variables. Equality is
/// α-equivalence.
#[pyclass(name = "Term", frozen, module = "lmt")]
#[derive(Clone)]
struct PyTerm {
    inner: Term,
    env: TypeEnv,
}

impl PyTerm {
    fn derived(&self, t: Term) -> PyTerm {
        PyTerm { inner: t, env: self.env.clone() }
    }
}

#[pymethods]
impl PyTerm {
    #[new]
    fn new(src: &str) -> PyResult<PyTerm> {
        let (inner, env) = parse_term(src).map_err(value_error)?;
        Ok(PyTerm { inner, env })
    }

    /// The type of the term; raises `TypeError` when it has none.
    fn type_of(&self) -> PyResult<PyType> {
        infer_term(&self.env, &self.inner)
            .map(|inner| PyType { inner })
            .map_err(|e| PyTypeError::new_err(e.to_string()))
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn is_closed(&self) -> bool {
        self.inner.is_closed()
    }

    fn is_mu_free(&self) -> bool {
        self.inner.is_mu_free()
    }

    /// The value of a numeral, else `None`.
    fn as_int(&self) -> Option<u64> {
        as_numeral(&self.inner)
    }

    fn free_vars(&self) -> (Vec<String>, Vec<String>) {
        let fv = self.inner.free_vars();
        (fv.lam.iter().map(|s| s.to_string()).collect(), fv.mu.iter().map(|s| s.to_string()).collect())
    }

    fn __str__(&self) -> String {
        pretty_term(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", pretty_term(&self.inner))
    }

    fn __eq__(&self, other: &PyTerm) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        hash_of(&self.inner)
    }
}

fn strategy_of(s: &str) -> PyResult<Strategy> {
    if s == "lo" {
        return Ok(Strategy::LeftmostOutermost);
    }
    match s.strip_prefix("rand:").map(str::parse::<u64>) {
        Some(Ok(seed)) => Ok(Strategy::Random(seed)),
        _ => Err(PyValueError::new_err("strategy must be 'lo' or 'rand:SEED'")),
    }
}

fn rules_of(unsafe_suc_prime: bool) -> RuleSet {
    if unsafe_suc_prime {
        RuleSet::SUC_PRIME
    } else {
        RuleSet::STANDARD
    }
}

/// Parses a single term.
#[pyfunction]
fn parse(src: &str) -> PyResult<PyTerm> {
    PyTerm::new(src)
}

/// The term declarations of a program, in order, as `(name, term)` pairs.
#[pyfunction]
fn load_program(src: &str) -> PyResult<Vec<(String, PyTerm)>> {
    let p = parse_program(src).map_err(value_error)?;
    Ok(p.decls
        .into_iter()
        .filter_map(|d| match d.expr {
            Expr::Term(t) => Some((d.name, PyTerm { inner: t, env: d.env })),
            Expr::Command(_) => None,
        })
        .collect())
}

#[pyfunction]
fn pretty(t: &PyTerm) -> String {
    pretty_term(&t.inner)
}

#[pyfunction(name = "numeral")]
fn py_numeral(n: u64) -> PyTerm {
    PyTerm { inner: numeral(n), env: TypeEnv::new() }
}

/// One-step reducts as `(rule, term)` pairs.
#[pyfunction]
#[pyo3(signature = (t, unsafe_suc_prime=false))]
fn reducts(t: &PyTerm, unsafe_suc_prime: bool) -> Vec<(String, PyTerm)> {
    term_reducts(&t.inner, rules_of(unsafe_suc_prime))
        .into_iter()
        .map(|(r, u)| (r.name().to_string(), t.derived(u)))
        .collect()
}

/// Normal form; `trace=True` also returns the `(rule, path, term)` steps.
#[pyfunction]
#[pyo3(signature = (t, strategy="lo", max_steps=DEFAULT_MAX_STEPS, trace=false, unsafe_suc_prime=false))]
fn normalize<'py>(
    py: Python<'py>,
    t: &PyTerm,
    strategy: &str,
    max_steps: usize,
    trace: bool,
    unsafe_suc_prime: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let n = normalize_with(&t.inner, strategy_of(strategy)?, max_steps, rules_of(unsafe_suc_prime), trace)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let nf = t.derived(n.term);
    if !trace {
        return Ok(Bound::new(py, nf)?.into_any());
    }
    let steps: Vec<(String, Vec<usize>, PyTerm)> = n
        .trace
        .into_iter()
        .map(|r| {
            let term = r.result.as_term().expect("terms reduce to terms").clone();
            (r.rule.name().to_string(), r.path, t.derived(term))
        })
        .collect();
    Ok((nf, steps).into_pyobject(py)?.into_any())
}

/// Every reachable normal form.
#[pyfunction]
#[pyo3(signature = (t, cap=DEFAULT_STATE_CAP, unsafe_suc_prime=false))]
fn normal_forms(t: &PyTerm, cap: usize, unsafe_suc_prime: bool) -> PyResult<Vec<PyTerm>> {
    let nfs = oracle_normal_forms(&t.inner, cap, rules_of(unsafe_suc_prime)).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(nfs.into_iter().map(|u| t.derived(u)).collect())
}

/// A common reduct within `budget` steps of each side, else `None`.
#[pyfunction]
#[pyo3(signature = (a, b, budget=20))]
fn join(a: &PyTerm, b: &PyTerm, budget: usize) -> Option<PyTerm> {
    join_search(&a.inner, &b.inner, budget).map(|t| a.derived(t))
}

#[pyfunction(name = "complete_dev")]
fn py_complete_dev(t: &PyTerm) -> PyTerm {
    t.derived(complete_dev(&t.inner))
}

#[pyfunction(name = "par_reducts")]
fn py_par_reducts(t: &PyTerm) -> Vec<PyTerm> {
    par_reducts(&t.inner).into_iter().map(|u| t.derived(u)).collect()
}

/// The shape name used by complete development.
#[pyfunction]
fn classify(t: &PyTerm) -> &'static str {
    classify_shape(&t.inner).name()
}

/// The continuation-passing translation with answer type `bottom`.
#[pyfunction]
#[pyo3(signature = (t, bottom=None))]
fn cps(t: &PyTerm, bottom: Option<&PyType>) -> PyResult<PyTerm> {
    let bottom = bottom.map_or(lmt_core::Type::Nat, |b| b.inner.clone());
    let u = cps_term(&t.env, &t.inner, &bottom).map_err(value_error)?;
    Ok(PyTerm { inner: u, env: lmt_core::cps::cps_env(&t.env, &bottom) })
}

#[pyfunction(name = "cps_type")]
#[pyo3(signature = (ty, bottom=None))]
fn py_cps_type(ty: &PyType, bottom: Option<&PyType>) -> PyType {
    let bottom = bottom.map_or(lmt_core::Type::Nat, |b| b.inner.clone());
    PyType { inner: cps_type(&ty.inner, &bottom) }
}

/// Runs a closed term of type N through the translation and back.
#[pyfunction]
fn cps_run(t: &PyTerm) -> PyResult<Option<u64>> {
    let u = cps_term(&t.env, &t.inner, &lmt_core::Type::Nat).map_err(value_error)?;
    let v = lt_normalize(&Term::app(u, identity_nat()), 1_000_000).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(as_numeral(&v))
}

/// Runs a property suite and returns its counts and violations.
#[pyfunction]
#[pyo3(signature = (prop, cases=100, seed=0, size=None))]
fn fuzz<'py>(py: Python<'py>, prop: &str, cases: usize, seed: u64, size: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let suite = Suite::from_name(prop).ok_or_else(|| PyValueError::new_err(format!("unknown property {prop:?}")))?;
    let r = py.detach(|| run_suite(suite, cases, seed, size.unwrap_or(suite.default_size())));
    let d = PyDict::new(py);
    d.set_item("property", r.name)?;
    d.set_item("cases", r.cases)?;
    d.set_item("checks", r.checks)?;
    d.set_item("skipped", r.skipped)?;
    d.set_item("generation_failures", r.gen_failures)?;
    d.set_item("violations", r.violations)?;
    Ok(d)
}

#[pymodule]
fn lmt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTerm>()?;
    m.add_class::<PyType>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(load_program, m)?)?;
    m.add_function(wrap_pyfunction!(pretty, m)?)?;
    m.add_function(wrap_pyfunction!(py_numeral, m)?)?;
    m.add_function(wrap_pyfunction!(reducts, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(normal_forms, m)?)?;
    m.add_function(wrap_pyfunction!(join, m)?)?;
    m.add_function(wrap_pyfunction!(py_complete_dev, m)?)?;
    m.add_function(wrap_pyfunction!(py_par_reducts, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(cps, m)?)?;
    m.add_function(wrap_pyfunction!(py_cps_type, m)?)?;
    m.add_function(wrap_pyfunction!(cps_run, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz, m)?)?;
    Ok(())
}
