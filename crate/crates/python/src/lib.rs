//! Python bindings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};
use spid_core::oracle;
use spid_core::{self as core, ConstructionParams, FamilyFile, SpidError};

fn err(e: SpidError) -> PyErr {
    match e {
        SpidError::TheoremViolation(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

fn from_py(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = py.import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Subspace", module = "spid_lab", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PySubspace(core::Subspace);

#[pymethods]
impl PySubspace {
    #[new]
    fn new(q: u32, ambient: usize, rows: Vec<Vec<u32>>) -> PyResult<Self> {
        let field = core::FieldPrime::new(q).map_err(err)?;
        Ok(Self(core::Subspace::span(field, ambient, rows).map_err(err)?))
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.field().order()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Reduced row echelon basis.
    #[getter]
    fn basis(&self) -> Vec<Vec<u32>> {
        self.0.basis().to_vec()
    }

    fn intersect(&self, other: &PySubspace) -> PyResult<Self> {
        Ok(Self(self.0.intersect(&other.0).map_err(err)?))
    }

    fn sum(&self, other: &PySubspace) -> PyResult<Self> {
        Ok(Self(self.0.sum(&other.0).map_err(err)?))
    }

    fn contains(&self, other: &PySubspace) -> PyResult<bool> {
        self.0.contains(&other.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "Family", module = "spid_lab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFamily(core::SpidFamily);

#[pymethods]
impl PyFamily {
    #[new]
    fn new(members: Vec<PySubspace>) -> PyResult<Self> {
        let members = members.into_iter().map(|s| s.0).collect();
        Ok(Self(core::SpidFamily::new(members).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = FamilyFile::parse(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self(file.to_family().map_err(err)?))
    }

    fn to_json(&self) -> String {
        FamilyFile::from_family(&self.0, None).to_json()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    #[getter]
    fn members(&self) -> Vec<PySubspace> {
        self.0.members().iter().cloned().map(PySubspace).collect()
    }

    fn dim_span(&self) -> usize {
        self.0.dim_span()
    }

    /// Attained intersection dimensions, ascending.
    fn attained(&self) -> Vec<usize> {
        self.0.profile().attained()
    }

    /// True when every pair meets in one of `values` and each value occurs.
    fn is_spid(&self, values: Vec<usize>) -> PyResult<bool> {
        match core::verify_spid(&self.0, &values) {
            Ok(_) => Ok(true),
            Err(SpidError::NotSpid(_)) => Ok(false),
            Err(e) => Err(err(e)),
        }
    }

    fn delta(&self, ordering: Vec<usize>) -> PyResult<Vec<usize>> {
        Ok(core::delta_array(&self.0, &ordering).map_err(err)?.values)
    }

    /// `(delta, ordering)` with a non-increasing tail.
    fn sort_nonincreasing(&self) -> PyResult<(Vec<usize>, Vec<usize>)> {
        let d = core::sort_nonincreasing(&self.0).map_err(err)?;
        Ok((d.values, d.ordering))
    }

    fn is_junta(&self, l: usize) -> bool {
        core::is_junta(&self.0, l).is_some()
    }

    fn shuffled(&self, seed: u64) -> Self {
        Self(core::sweep::shuffle_family(&self.0, seed).0)
    }

    fn bound_report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let r = core::check_theorem_2_1(&self.0).map_err(err)?;
        to_py(
            py,
            &json!({
                "n": r.n, "k": r.k, "t1": r.t1, "t2": r.t2,
                "dim_span": r.dim_span,
                "junta_threshold": r.junta_threshold,
                "refined_threshold": r.refined_threshold,
                "junta": r.is_junta_at_center_dim,
                "epsilon": r.epsilon,
                "within_hypotheses": r.within_hypotheses,
                "implication_holds": r.implication_holds,
                "notes": r.notes,
            }),
        )
    }

    fn classify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let r = core::classify_extremal(&self.0).map_err(err)?;
        to_py(
            py,
            &json!({
                "verdict": r.verdict.as_str(),
                "also_matches": r.also_matches.iter().map(|v| v.as_str()).collect::<Vec<_>>(),
                "k": r.k, "t": r.t, "m": r.m, "s": r.s(),
                "notes": r.notes,
            }),
        )
    }

    fn __repr__(&self) -> String {
        format!(
            "Family(n={}, k={}, ambient={}, q={})",
            self.0.len(),
            self.0.k(),
            self.0.ambient_dim(),
            self.0.field().order()
        )
    }
}

/// Build a construction from a parameter dict such as
/// `{"class": "II", "q": 2, "k": 3, "t": 2, "n": 4}`.
#[pyfunction]
fn construct(py: Python<'_>, params: &Bound<'_, PyAny>) -> PyResult<PyFamily> {
    let v = from_py(py, params)?;
    let p: ConstructionParams = serde_json::from_value(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(PyFamily(p.build().map_err(err)?))
}

#[pyfunction]
fn predicted_dim(py: Python<'_>, params: &Bound<'_, PyAny>) -> PyResult<usize> {
    let v = from_py(py, params)?;
    let p: ConstructionParams = serde_json::from_value(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    p.validate().map_err(err)?;
    Ok(p.predicted_dim())
}

#[pyfunction]
fn junta_bound(k: usize, t1: usize, n: usize) -> usize {
    core::junta_bound(k, t1, n)
}

#[pyfunction]
fn refined_bound(k: usize, t1: usize, t2: usize, n: usize) -> usize {
    core::refined_bound(k, t1, t2, n)
}

#[pyfunction]
fn extremal_dim(k: usize, t: usize, n: usize) -> usize {
    core::extremal_dim(k, t, n)
}

#[pyfunction]
fn gaussian_binomial(ambient: usize, d: usize, q: u32) -> u128 {
    oracle::gaussian_binomial(ambient, d, q)
}

#[pyfunction]
fn enumerate_subspaces(ambient: usize, d: usize, q: u32) -> PyResult<Vec<PySubspace>> {
    let field = core::FieldPrime::new(q).map_err(err)?;
    let all = oracle::enumerate_subspaces(ambient, d, field).map_err(err)?;
    Ok(all.into_iter().map(PySubspace).collect())
}

#[pymodule]
fn spid_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySubspace>()?;
    m.add_class::<PyFamily>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_dim, m)?)?;
    m.add_function(wrap_pyfunction!(junta_bound, m)?)?;
    m.add_function(wrap_pyfunction!(refined_bound, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_dim, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_subspaces, m)?)?;
    Ok(())
}
