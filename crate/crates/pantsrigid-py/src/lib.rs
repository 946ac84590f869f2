//! Python module `pantsrigid`. Curves, words, pants decompositions and
//! graphs wrap the Rust types; reports come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde_json::{json, Value};

use ::pantsrigid::curve::{round_curve, CurveClass};
use ::pantsrigid::mapclass::{two_puncture_twist, MCWord};
use ::pantsrigid::pants::{ball, PantsSubgraph, PantsVertex};
use ::pantsrigid::rigidset::{build_x, build_x5, build_z, core_pentagon, gamma};
use ::pantsrigid::verify::{rigidity_search, run_suite, SearchParams};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let s: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&s).map_err(err)
}

/// Isotopy class of an essential curve, in canonical cut-sequence form.
#[pyclass(name = "Curve", frozen, eq, ord, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyCurve(CurveClass);

#[pymethods]
impl PyCurve {
    /// From a list of (ray, sign) crossings.
    #[new]
    fn new(n: usize, crossings: Vec<(i64, i64)>) -> PyResult<Self> {
        CurveClass::from_pairs(n, &crossings).map(PyCurve).map_err(err)
    }

    /// The round curve around a cyclic block of punctures.
    #[staticmethod]
    fn round(n: usize, block: Vec<usize>) -> PyResult<Self> {
        round_curve(n, &block).map(PyCurve).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn crossings(&self) -> Vec<(i64, i64)> {
        self.0.pairs()
    }

    fn enclosed(&self) -> Vec<usize> {
        self.0.enclosed_punctures()
    }

    /// Geometric intersection number.
    fn i(&self, other: &PyCurve) -> PyResult<usize> {
        self.0.intersection(&other.0).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.0)
    }
}

/// A word in the mapping class generators.
#[pyclass(name = "Word", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyWord(MCWord);

#[pymethods]
impl PyWord {
    /// Generators as lists: ["sigma", i, sign], ["reflect"] or
    /// ["recoordinate", k].
    #[new]
    fn new(n: usize, gens: &Bound<'_, PyAny>) -> PyResult<Self> {
        let w = json!({"n": n, "word": from_py(gens)?});
        serde_json::from_value(w).map(PyWord).map_err(err)
    }

    /// The half-twist about a curve cutting off two punctures.
    #[staticmethod]
    #[pyo3(signature = (c, sign = 1))]
    fn half_twist(c: &PyCurve, sign: i64) -> PyResult<Self> {
        two_puncture_twist(&c.0, sign).map(PyWord).map_err(err)
    }

    fn apply(&self, c: &PyCurve) -> PyCurve {
        PyCurve(self.0.apply(&c.0))
    }

    fn inverse(&self) -> Self {
        PyWord(self.0.inverse())
    }

    fn then(&self, other: &PyWord) -> Self {
        PyWord(self.0.then(&other.0))
    }

    fn to_list<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let v = serde_json::to_value(&self.0).map_err(err)?;
        to_py(py, &v["word"])
    }

    fn __len__(&self) -> usize {
        self.0.gens.len()
    }
}

/// A pants decomposition.
#[pyclass(name = "Pants", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPants(PantsVertex);

#[pymethods]
impl PyPants {
    #[new]
    fn new(n: usize, curves: Vec<PyCurve>) -> PyResult<Self> {
        let cs: Vec<CurveClass> = curves.into_iter().map(|c| c.0).collect();
        PantsVertex::new(n, &cs).map(PyPants).map_err(err)
    }

    /// A, B, C, D, E of the core pentagon in S_0,5.
    #[staticmethod]
    fn core_pentagon() -> Vec<PyPants> {
        core_pentagon().into_iter().map(PyPants).collect()
    }

    fn curves(&self) -> Vec<PyCurve> {
        self.0.curves().iter().cloned().map(PyCurve).collect()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// A finite subgraph of the pants graph.
#[pyclass(name = "Graph", frozen)]
struct PyGraph(PantsSubgraph);

#[pymethods]
impl PyGraph {
    #[staticmethod]
    fn z(n: usize) -> PyResult<Self> {
        build_z(n).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn x5() -> PyResult<Self> {
        build_x5().map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn x(n: usize) -> PyResult<Self> {
        build_x(n, 7).map(PyGraph).map_err(err)
    }

    /// Vertices within `radius` moves of `seed`, twisting at most `k`
    /// half-twists per move.
    #[staticmethod]
    #[pyo3(signature = (seed, radius, k, max_vertices = 200_000))]
    fn ball(py: Python<'_>, seed: &PyPants, radius: usize, k: usize, max_vertices: usize) -> PyResult<Self> {
        let s = seed.0.clone();
        py.detach(move || ball(&s, radius, k, max_vertices)).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: Value = serde_json::from_str(text).map_err(err)?;
        PantsSubgraph::from_json(&v).map(PyGraph).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn vertex(&self, i: usize) -> PyResult<PyPants> {
        if i >= self.0.vertex_count() {
            return Err(err(format!("no vertex {i}")));
        }
        Ok(PyPants(self.0.vertex(i).clone()))
    }

    fn index(&self, p: &PyPants) -> Option<usize> {
        self.0.id_of(&p.0)
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    fn to_dot(&self) -> String {
        self.0.to_dot()
    }
}

/// The chord curves of the polygon model, in chord order.
#[pyfunction]
fn gamma_curves(n: usize) -> PyResult<Vec<PyCurve>> {
    Ok(gamma(n).map_err(err)?.curves.into_iter().map(PyCurve).collect())
}

/// Runs a verification suite and returns its report.
#[pyfunction]
#[pyo3(signature = (suite = "all", n = 5))]
fn verify<'py>(py: Python<'py>, suite: &str, n: usize) -> PyResult<Bound<'py, PyAny>> {
    let s = suite.to_string();
    let r = py.detach(move || run_suite(&s, n, false)).map_err(err)?;
    to_py(py, &r.to_json())
}

/// The embedding search; returns the full report.
#[pyfunction]
#[pyo3(signature = (n = 5, radius = 3, twist_bound = 3, certify_depth = 10, max_vertices = 200_000))]
fn search<'py>(
    py: Python<'py>,
    n: usize,
    radius: usize,
    twist_bound: usize,
    certify_depth: usize,
    max_vertices: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let p = SearchParams { n, radius, twist_bound, certify_depth, max_vertices, ..SearchParams::default() };
    let r = py.detach(move || rigidity_search(&p)).map_err(err)?;
    to_py(py, &serde_json::to_value(&r).map_err(err)?)
}

#[pymodule]
#[pyo3(name = "pantsrigid")]
fn pantsrigid_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_class::<PyWord>()?;
    m.add_class::<PyPants>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(gamma_curves, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    Ok(())
}
