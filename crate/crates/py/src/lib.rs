//! Python bindings: a thin layer over the core crate. Tuples cross the
//! boundary as the canonical JSON documents; structured results come back
//! as JSON strings so the Python side can `json.loads` them.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use matsep::conj::{cardinality_and_dimension, eval_full_generators, profile_to_docs};
use matsep::geometry::{classify_pair, is_triangularizable, PairClassification};
use matsep::io::{parse_tuple, serialize_tuple};
use matsep::matrix::{MatTuple, TraceZeroTuple};
use matsep::reduced::{
    build_reduced_combinations, decide_equiv_full, decide_equiv_reduced, ReducedSetDoc, Scheme,
};
use matsep::semi::{decide_equiv_h, eval_h_generators};

fn err(e: matsep::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Tuple", frozen)]
struct PyTuple {
    inner: MatTuple,
}

#[pymethods]
impl PyTuple {
    #[staticmethod]
    fn from_json(doc: &str) -> PyResult<Self> {
        Ok(PyTuple {
            inner: parse_tuple(doc).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serialize_tuple(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn is_trace_zero(&self) -> bool {
        TraceZeroTuple::new(self.inner.clone()).is_ok()
    }

    fn __repr__(&self) -> String {
        format!("Tuple(n={})", self.inner.n())
    }
}

/// Full conjugation profile as [(label, re, im), ...].
#[pyfunction]
fn invariants_conj(t: &PyTuple) -> Vec<(String, String, String)> {
    profile_to_docs(&eval_full_generators(&t.inner))
        .into_iter()
        .map(|d| (d.label, d.value.re, d.value.im))
        .collect()
}

/// Left-right profile as [(label, re, im), ...].
#[pyfunction]
fn invariants_leftright(t: &PyTuple) -> Vec<(String, String, String)> {
    profile_to_docs(&eval_h_generators(&t.inner))
        .into_iter()
        .map(|d| (d.label, d.value.re, d.value.im))
        .collect()
}

/// (equivalent, witness) under the full conjugation set.
#[pyfunction]
fn separate_conj_full(a: &PyTuple, b: &PyTuple) -> PyResult<(bool, Option<String>)> {
    decide_equiv_full(&a.inner, &b.inner).map_err(err)
}

/// Equivalence under the reduced conjugation set.
#[pyfunction]
fn separate_conj_reduced(a: &PyTuple, b: &PyTuple) -> PyResult<bool> {
    decide_equiv_reduced(&a.inner, &b.inner).map_err(err)
}

/// (equivalent, witness) under the left-right family.
#[pyfunction]
fn separate_leftright(a: &PyTuple, b: &PyTuple) -> PyResult<(bool, Option<String>)> {
    decide_equiv_h(&a.inner, &b.inner).map_err(err)
}

/// Component classification of a trace-zero pair.
#[pyfunction]
fn classify(a: &PyTuple, b: &PyTuple) -> PyResult<String> {
    let ta = TraceZeroTuple::new(a.inner.clone()).map_err(err)?;
    let tb = TraceZeroTuple::new(b.inner.clone()).map_err(err)?;
    let label = match classify_pair(&ta, &tb).map_err(err)? {
        PairClassification::NotEquivalent => "NotEquivalent",
        PairClassification::GraphClosure => "GraphClosure",
        PairClassification::ExtraComponentOnly => "ExtraComponentOnly",
        PairClassification::Both => "Both",
    };
    Ok(label.to_string())
}

#[pyfunction]
fn triangularizable(t: &PyTuple) -> bool {
    is_triangularizable(&t.inner)
}

/// Generator-set sizes and dimensions as a JSON string.
#[pyfunction]
fn sizes(n: usize) -> String {
    serde_json::to_string(&cardinality_and_dimension(n)).expect("size table")
}

/// Reduced-set construction as a JSON string.
#[pyfunction]
#[pyo3(signature = (n, scheme = "unit"))]
fn reduced_set(n: usize, scheme: &str) -> PyResult<String> {
    let scheme = match scheme {
        "unit" => Scheme::UnitLevelSums,
        "vandermonde" => Scheme::VandermondeLevelSums,
        other => return Err(PyValueError::new_err(format!("unknown scheme: {other}"))),
    };
    let set = build_reduced_combinations(n, scheme).map_err(err)?;
    Ok(serde_json::to_string(&ReducedSetDoc::from_set(&set)).expect("reduced set"))
}

#[pymodule]
fn matsep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTuple>()?;
    m.add_function(wrap_pyfunction!(invariants_conj, m)?)?;
    m.add_function(wrap_pyfunction!(invariants_leftright, m)?)?;
    m.add_function(wrap_pyfunction!(separate_conj_full, m)?)?;
    m.add_function(wrap_pyfunction!(separate_conj_reduced, m)?)?;
    m.add_function(wrap_pyfunction!(separate_leftright, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(triangularizable, m)?)?;
    m.add_function(wrap_pyfunction!(sizes, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_set, m)?)?;
    Ok(())
}
