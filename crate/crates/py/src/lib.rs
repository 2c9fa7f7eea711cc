//! Python bindings: documents go in and out as canonical JSON text.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use polyspan::{check, commands, Error};

fn to_py(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `lhs ∘ rhs` for two documents; `kind` is `set`, `rel` or `mod`.
#[pyfunction]
fn compose(kind: &str, lhs: &str, rhs: &str) -> PyResult<String> {
    commands::compose(kind, lhs, rhs).map_err(to_py)
}

/// Evaluate a polynomial document on an argument document.
#[pyfunction]
fn eval(poly: &str, arg: &str) -> PyResult<String> {
    commands::eval(poly, arg).map_err(to_py)
}

/// A seeded random document of the given kind.
#[pyfunction]
#[pyo3(signature = (kind, seed=0))]
fn random(kind: &str, seed: u64) -> PyResult<String> {
    commands::random(kind, seed).map_err(to_py)
}

/// Run a property suite; returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (suite, seed=0, count=None))]
fn run_check(suite: &str, seed: u64, count: Option<usize>) -> PyResult<(bool, String)> {
    let default = check::suite(suite)
        .ok_or_else(|| PyKeyError::new_err(suite.to_string()))?
        .default_count;
    let report = check::run_suite(suite, seed, count.unwrap_or(default)).map_err(to_py)?;
    Ok((report.passed(), report.render()))
}

/// Names of the property suites.
#[pyfunction]
fn suites() -> Vec<&'static str> {
    check::SUITES.iter().map(|s| s.name).collect()
}

#[pymodule]
fn polyspan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(random, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    m.add_function(wrap_pyfunction!(suites, m)?)?;
    m.add("DOCUMENT_VERSION", polyspan::document::VERSION)?;
    Ok(())
}
