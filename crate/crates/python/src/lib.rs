//! Python bindings: rings, UT3 elements, representations and the exact checks.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use heislab::formula;
use heislab::reprs::{self, fixtures, SystemSolution};
use heislab::{Generator, UT3Elem};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A ring such as `Z`, `Z x Z` or `Z[theta]`.
#[pyclass(name = "Ring", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyRing(heislab::Ring);

#[pymethods]
impl PyRing {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        heislab::parse_ring(text).map(PyRing).map_err(err)
    }

    fn num_components(&self) -> usize {
        self.0.num_components()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ring('{}')", self.0)
    }

    fn __eq__(&self, other: &PyRing) -> bool {
        self.0 == other.0
    }
}

/// A unitriangular 3x3 matrix.
#[pyclass(name = "Element", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyElement(UT3Elem);

#[pymethods]
impl PyElement {
    /// Parses `{e12: .., e13: .., e23: ..}` over `ring`.
    #[new]
    fn new(ring: &PyRing, text: &str) -> PyResult<Self> {
        UT3Elem::parse(&ring.0, text).map(PyElement).map_err(err)
    }

    #[staticmethod]
    fn a1(ring: &PyRing) -> Self {
        PyElement(UT3Elem::a1(&ring.0))
    }

    #[staticmethod]
    fn a2(ring: &PyRing) -> Self {
        PyElement(UT3Elem::a2(&ring.0))
    }

    #[staticmethod]
    fn identity(ring: &PyRing) -> Self {
        PyElement(UT3Elem::identity(&ring.0))
    }

    /// The `(e12, e13, e23)` entries as strings.
    fn entries(&self) -> (String, String, String) {
        (self.0.u12.to_string(), self.0.u13.to_string(), self.0.u23.to_string())
    }

    fn ring(&self) -> PyRing {
        PyRing(self.0.ring().clone())
    }

    fn inv(&self) -> Self {
        PyElement(self.0.inv())
    }

    fn commutator(&self, other: &PyElement) -> PyResult<Self> {
        self.0.commutator(&other.0).map(PyElement).map_err(err)
    }

    fn power(&self, n: i64) -> Self {
        PyElement(self.0.power(&n.into()))
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn is_central(&self) -> bool {
        self.0.is_central()
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<Self> {
        self.0.mul(&other.0).map(PyElement).map_err(err)
    }

    fn __eq__(&self, other: &PyElement) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element('{}')", self.0)
    }
}

/// `<a1, a2, generators>` inside `UT3(R)`.
#[pyclass(name = "Representation", frozen)]
pub struct PyRepresentation(reprs::Representation);

#[pymethods]
impl PyRepresentation {
    /// Parses a config text.
    #[new]
    fn new(config: &str) -> PyResult<Self> {
        reprs::parse_config(config).map(PyRepresentation).map_err(err)
    }

    /// One of the bundled examples, e.g. `"zxz-lame"`.
    #[staticmethod]
    fn example(name: &str) -> PyResult<Self> {
        fixtures::by_name(name)
            .map(PyRepresentation)
            .ok_or_else(|| err(format!("unknown example `{name}`")))
    }

    #[staticmethod]
    fn example_names() -> Vec<&'static str> {
        fixtures::NAMES.to_vec()
    }

    fn ring(&self) -> PyRing {
        PyRing(self.0.ring().clone())
    }

    fn generators(&self) -> Vec<(String, PyElement)> {
        self.0
            .generators()
            .iter()
            .map(|(n, g)| (n.clone(), PyElement(g.clone())))
            .collect()
    }

    fn full_center(&self) -> bool {
        self.0.full_center()
    }

    fn config(&self) -> String {
        reprs::print_config(&self.0)
    }

    fn lame_check(&self) -> PyVerdict {
        PyVerdict::wrap(&self.0, reprs::lame_check(&self.0))
    }

    fn lame_check_def1(&self) -> PyVerdict {
        PyVerdict::wrap(&self.0, reprs::lame_check_def1(&self.0))
    }

    fn tau_check(&self) -> PyVerdict {
        PyVerdict::wrap(&self.0, reprs::tau_check(&self.0))
    }

    fn sigma_check(&self) -> PyVerdict {
        PyVerdict::wrap(&self.0, reprs::sigma_check(&self.0))
    }

    #[pyo3(signature = (bound = 3))]
    fn nzct_check(&self, bound: u32) -> PyVerdict {
        PyVerdict::wrap(&self.0, reprs::nzct_check(&self.0, bound))
    }

    fn c_rank(&self) -> i64 {
        reprs::c_rank(&self.0)
    }

    /// A solution `y` of system S for the central `z`, or `None`.
    fn solve_s(&self, z: &PyElement) -> PyResult<Option<PyElement>> {
        solution(reprs::solve_s(&self.0, &z.0))
    }

    /// A solution `x` of system T for the central `z`, or `None`.
    fn solve_t(&self, z: &PyElement) -> PyResult<Option<PyElement>> {
        solution(reprs::solve_t(&self.0, &z.0))
    }

    /// Returns the new representation and any warnings.
    fn adjoin_y(&self, z: &PyElement) -> PyResult<(PyRepresentation, Vec<String>)> {
        let (g1, w) = reprs::adjoin_y(&self.0, &z.0).map_err(err)?;
        Ok((PyRepresentation(g1), w))
    }

    fn adjoin_center(&self) -> PyRepresentation {
        PyRepresentation(reprs::adjoin_center(&self.0))
    }

    /// `at` is `"a1"` or `"a2"`.
    #[pyo3(signature = (at, name = "theta"))]
    fn extend_centralizer(&self, at: &str, name: &str) -> PyResult<PyRepresentation> {
        let at = match at {
            "a1" => Generator::A1,
            "a2" => Generator::A2,
            _ => return Err(err(format!("expected a1 or a2, got `{at}`"))),
        };
        reprs::extend_centralizer(&self.0, at, name)
            .map(PyRepresentation)
            .map_err(err)
    }

    /// Bounded search for a counterexample to a universal sentence. Returns
    /// the falsifying assignment or `None` when the ball is exhausted.
    fn refute(&self, sentence: &str, bound: u32) -> PyResult<Option<Vec<(String, PyElement)>>> {
        let f = formula::parse(sentence).map_err(err)?;
        let out = formula::refute_universal(&f, &self.0.env(), bound).map_err(err)?;
        Ok(out
            .found()
            .map(|a| a.iter().map(|(n, g)| (n.clone(), PyElement(g.clone()))).collect()))
    }

    fn __str__(&self) -> String {
        reprs::print_config(&self.0)
    }
}

fn solution(r: Result<SystemSolution, reprs::ReprError>) -> PyResult<Option<PyElement>> {
    Ok(r.map_err(err)?.witness().cloned().map(PyElement))
}

/// Outcome of a check.
#[pyclass(name = "Verdict", frozen)]
pub struct PyVerdict {
    verdict: reprs::Verdict,
    ring: heislab::Ring,
}

impl PyVerdict {
    fn wrap(rep: &reprs::Representation, verdict: reprs::Verdict) -> Self {
        PyVerdict {
            verdict,
            ring: rep.ring().clone(),
        }
    }
}

#[pymethods]
impl PyVerdict {
    /// `"holds"`, `"violated"` or `"inconclusive"`.
    #[getter]
    fn status(&self) -> String {
        self.verdict.status.to_string().to_lowercase()
    }

    #[getter]
    fn method(&self) -> String {
        self.verdict.method.to_string()
    }

    #[getter]
    fn check(&self) -> String {
        self.verdict.check.clone()
    }

    #[getter]
    fn bound(&self) -> Option<u32> {
        self.verdict.bound
    }

    #[getter]
    fn witness(&self) -> Vec<(String, PyElement)> {
        self.verdict
            .witness
            .iter()
            .map(|(n, g)| (n.clone(), PyElement(g.clone())))
            .collect()
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.verdict.notes.clone()
    }

    fn to_json(&self) -> String {
        self.verdict.to_json(&self.ring)
    }

    fn __str__(&self) -> String {
        self.verdict.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Verdict({} {})", self.verdict.check, self.verdict.status)
    }
}

/// Canonical text and syntactic class of a sentence.
#[pyfunction]
fn parse_formula(text: &str) -> PyResult<(String, String)> {
    let f = formula::parse(text).map_err(err)?;
    let class = formula::classify(&f).map_err(err)?;
    Ok((f.to_string(), class.to_string()))
}

/// The builtin sentence with the given name, e.g. `"NZCT"` or `"CT(2)"`.
#[pyfunction]
fn builtin(name: &str) -> PyResult<String> {
    let b: formula::Builtin = name.parse().map_err(err)?;
    Ok(formula::builtin(b).to_string())
}

#[pymodule]
fn pyheislab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRing>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyRepresentation>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(parse_formula, m)?)?;
    m.add_function(wrap_pyfunction!(builtin, m)?)?;
    Ok(())
}
