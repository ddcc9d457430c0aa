//! Python module `positroidal`.
//!
//! Reports are returned as plain dicts with the same layout as the CLI's
//! JSON output. Weights come back as `int` when integral and
//! `fractions.Fraction` otherwise; weights passed in may mix `int`,
//! `Fraction` and `"p/q"` strings.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use positroidal::census::{CensusError, CensusOptions, SuiteParams};
use positroidal::webtrop::{parse_rational, DEFAULT_MAX_MONOMIALS};
use positroidal::{hypergeom, tableaux, Models, Rational};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn models() -> &'static Models {
    static M: OnceLock<Models> = OnceLock::new();
    M.get_or_init(|| Models::in_memory(DEFAULT_MAX_MONOMIALS))
}

fn to_py_json<'py, T: serde::Serialize + ?Sized>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn rational_to_py<'py>(py: Python<'py>, x: &Rational) -> PyResult<Bound<'py, PyAny>> {
    if x.is_integer() {
        py.import("builtins")?.getattr("int")?.call1((x.to_integer().to_string(),))
    } else {
        py.import("fractions")?.getattr("Fraction")?.call1((x.to_string(),))
    }
}

fn weight_to_py<'py>(py: Python<'py>, w: &positroidal::WeightVector) -> PyResult<Bound<'py, PyList>> {
    let items = w.values().iter().map(|x| rational_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// Semistandard rectangular tableau with `k` rows and entries in `[n]`.
#[pyclass(name = "Tableau", module = "positroidal", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyTableau {
    inner: tableaux::Tableau,
}

#[pymethods]
impl PyTableau {
    /// Parse rows top to bottom separated by `;`, entries by `,`.
    #[new]
    fn new(text: &str, k: usize, n: usize) -> PyResult<Self> {
        Ok(PyTableau { inner: tableaux::Tableau::parse(text, k, n).map_err(value_err)? })
    }

    #[staticmethod]
    fn column(k: usize, n: usize, entries: Vec<usize>) -> PyResult<Self> {
        Ok(PyTableau { inner: tableaux::Tableau::column(k, n, &entries).map_err(value_err)? })
    }

    #[staticmethod]
    fn from_columns(k: usize, n: usize, columns: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyTableau { inner: tableaux::Tableau::from_columns(k, n, columns).map_err(value_err)? })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<usize>> {
        self.inner.rows().to_vec()
    }

    #[getter]
    fn columns(&self) -> Vec<Vec<usize>> {
        self.inner.columns()
    }

    fn union(&self, other: &PyTableau) -> PyResult<Self> {
        Ok(PyTableau { inner: self.inner.union(&other.inner).map_err(value_err)? })
    }

    fn quotient(&self, divisor: &PyTableau) -> PyResult<Self> {
        Ok(PyTableau { inner: self.inner.quotient(&divisor.inner).map_err(value_err)? })
    }

    fn reduce(&self) -> Self {
        PyTableau { inner: self.inner.reduce() }
    }

    fn equivalent(&self, other: &PyTableau) -> bool {
        self.inner.equivalent(&other.inner)
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    /// `{"c": {(i, j): multiplicity}, "v": [...]}`.
    fn fundamental_decomposition<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let d = self.inner.fundamental_decomposition().map_err(value_err)?;
        let out = pyo3::types::PyDict::new(py);
        out.set_item("c", d.support().into_iter().collect::<std::collections::BTreeMap<_, _>>())?;
        out.set_item("v", d.v().to_vec())?;
        Ok(out.into_any())
    }

    /// Tropical weight vector in lexicographic subset order.
    fn weight<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let w = weight_of(&self.inner)?;
        weight_to_py(py, &w)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Tableau({:?}, k={}, n={})", self.inner.to_string(), self.inner.k(), self.inner.n())
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }
}

fn weight_of(t: &tableaux::Tableau) -> PyResult<positroidal::WeightVector> {
    let model = models().get(t.k(), t.n()).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    model.weight_of(t).map_err(value_err)
}

fn parse_weight(k: usize, n: usize, items: &Bound<'_, PyAny>) -> PyResult<positroidal::WeightVector> {
    let mut values = Vec::new();
    for item in items.try_iter()? {
        let text = item?.str()?.to_string();
        values.push(parse_rational(text.trim()).ok_or_else(|| value_err(format!("not a rational: {text}")))?);
    }
    positroidal::WeightVector::new(k, n, values).map_err(value_err)
}

/// Regular subdivision of Δ(k,n) with its classification.
#[pyclass(name = "Subdivision", module = "positroidal", frozen)]
struct PySubdivision {
    inner: hypergeom::Subdivision,
}

#[pymethods]
impl PySubdivision {
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Maximal cells as lists of k-subsets.
    #[getter]
    fn cells(&self) -> Vec<Vec<Vec<usize>>> {
        self.inner.cell_subsets()
    }

    #[getter]
    fn weight<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        weight_to_py(py, self.inner.weight())
    }

    #[getter]
    fn classification<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py_json(py, self.inner.classification())
    }

    fn canonical_key(&self) -> String {
        self.inner.canonical_key()
    }

    #[pyo3(signature = (detailed = false))]
    fn to_json(&self, detailed: bool) -> PyResult<String> {
        let v = if detailed {
            self.inner.to_json_detailed()
        } else {
            serde_json::to_value(&self.inner).map_err(value_err)?
        };
        serde_json::to_string(&v).map_err(value_err)
    }

    fn __len__(&self) -> usize {
        self.inner.cells().len()
    }

    fn __repr__(&self) -> String {
        format!("Subdivision(k={}, n={}, cells={})", self.inner.k(), self.inner.n(), self.inner.cells().len())
    }
}

/// Tropical weight vector of a tableau.
#[pyfunction]
fn wt<'py>(py: Python<'py>, tableau: &PyTableau) -> PyResult<Bound<'py, PyList>> {
    tableau.weight(py)
}

/// Subdivision induced by a tableau.
#[pyfunction]
fn subdivide(tableau: &PyTableau) -> PyResult<PySubdivision> {
    let (_, sub) = models().subdivide(&tableau.inner).map_err(value_err)?;
    Ok(PySubdivision { inner: sub })
}

/// Subdivision induced by an explicit weight vector of length C(n, k).
#[pyfunction]
fn regular_subdivision(k: usize, n: usize, weight: &Bound<'_, PyAny>) -> PyResult<PySubdivision> {
    let w = parse_weight(k, n, weight)?;
    let h = positroidal::Hypersimplex::new(k, n).map_err(value_err)?;
    Ok(PySubdivision { inner: positroidal::regular_subdivision(&h, &w).map_err(value_err)? })
}

#[pyfunction]
fn is_matroid(bases: Vec<Vec<usize>>) -> bool {
    hypergeom::is_matroid(&bases)
}

#[pyfunction]
fn is_positroid(bases: Vec<Vec<usize>>, n: usize) -> PyResult<bool> {
    hypergeom::is_positroid(&bases, n).map_err(value_err)
}

/// Split census over one-column tableaux; raises `RuntimeError` when the
/// number of sources exceeds `max_sources`.
#[pyfunction]
#[pyo3(signature = (k, n, max_sources = 70, certify = true, compatibility = true))]
fn split_census<'py>(
    py: Python<'py>,
    k: usize,
    n: usize,
    max_sources: usize,
    certify: bool,
    compatibility: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = CensusOptions { max_sources, certify, compatibility, timing: false };
    match positroidal::split_census(models(), k, n, &opts) {
        Ok(r) => to_py_json(py, &r),
        Err(e @ CensusError::Budget { .. }) => Err(PyRuntimeError::new_err(e.to_string())),
        Err(e) => Err(value_err(e)),
    }
}

/// Run a named verification suite and return its report.
#[pyfunction]
#[pyo3(signature = (suite, seed = 1729, samples = None, n_values = None, certify = true))]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    seed: u64,
    samples: Option<usize>,
    n_values: Option<Vec<usize>>,
    certify: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let suite: positroidal::Suite = suite.parse().map_err(value_err)?;
    let params = SuiteParams { n_values, samples, seed, certify, ..SuiteParams::default() };
    let r = positroidal::verify_suite(models(), suite, &params).map_err(value_err)?;
    to_py_json(py, &r)
}

/// Leaf bipartition of the split labelled by `{i, j}` in Δ(2, n).
#[pyfunction]
fn tree_split<'py>(py: Python<'py>, n: usize, i: usize, j: usize) -> PyResult<Bound<'py, PyAny>> {
    let t = positroidal::tree_split(n, (i, j)).map_err(value_err)?;
    let d = to_py_json(py, &t)?;
    d.set_item("dot", t.to_dot())?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "positroidal")]
pub fn init_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTableau>()?;
    m.add_class::<PySubdivision>()?;
    m.add_function(wrap_pyfunction!(wt, m)?)?;
    m.add_function(wrap_pyfunction!(subdivide, m)?)?;
    m.add_function(wrap_pyfunction!(regular_subdivision, m)?)?;
    m.add_function(wrap_pyfunction!(is_matroid, m)?)?;
    m.add_function(wrap_pyfunction!(is_positroid, m)?)?;
    m.add_function(wrap_pyfunction!(split_census, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(tree_split, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
