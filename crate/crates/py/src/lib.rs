use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use schottky_core::classify::{bounding_geodesic, classify, ClassifyOptions};
use schottky_core::coding::{decode, encode, DEFAULT_EPSILON};
use schottky_core::dsl::parse_family;
use schottky_core::group::{reduced_word_count as count_words, SchottkyConfig, SchottkyGroup};
use schottky_core::hyperbolic::{Arc, BoundaryPoint};
use schottky_core::lab::{neighbourhood, search_concentration, search_separation, ConcentrationTask, Outcome};
use schottky_core::render::{render_scene, RenderScene};
use schottky_core::report::classification_report;
use schottky_core::sequence::SymbolicSequence;
use schottky_core::symbol::letters_to_string;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sequence(text: &str) -> PyResult<SymbolicSequence> {
    Ok(parse_family(text).map_err(value_error)?.expand())
}

fn arc((start, end): (f64, f64)) -> PyResult<Arc> {
    Arc::from_angles(start, end).map_err(value_error)
}

fn witness_text(outcome: &Outcome) -> Option<String> {
    match outcome {
        Outcome::Witness { word } => Some(word.to_string()),
        Outcome::Exhausted { .. } => None,
    }
}

/// The group generated by the two pairings of circles of radius `radius`.
#[pyclass(frozen, name = "Group")]
struct PyGroup {
    inner: SchottkyGroup,
}

#[pymethods]
impl PyGroup {
    #[new]
    #[pyo3(signature = (radius = 0.8))]
    fn new(radius: f64) -> PyResult<Self> {
        let inner = SchottkyGroup::new(SchottkyConfig { radius }).map_err(value_error)?;
        Ok(PyGroup { inner })
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.config().radius
    }

    /// `(angle, depth, diameter)` of the limit point of `seq`.
    #[pyo3(signature = (seq, epsilon = DEFAULT_EPSILON))]
    fn decode(&self, seq: &str, epsilon: f64) -> PyResult<(f64, usize, f64)> {
        let d = decode(&self.inner, &sequence(seq)?, epsilon).map_err(value_error)?;
        Ok((d.point.angle(), d.depth, d.diameter))
    }

    #[pyo3(signature = (angle, max_len = 20))]
    fn encode(&self, angle: f64, max_len: usize) -> PyResult<String> {
        let letters = encode(&self.inner, BoundaryPoint::new(angle), max_len).map_err(value_error)?;
        Ok(letters_to_string(&letters))
    }

    /// `(start, end)` of the neighbourhood `U_n` (1-based).
    fn neighbourhood(&self, seq: &str, n: usize) -> PyResult<(f64, f64)> {
        let a = neighbourhood(&self.inner, &sequence(seq)?, n).map_err(value_error)?;
        Ok((a.start().angle(), a.end().angle()))
    }

    /// JSON classification report.
    #[pyo3(signature = (seq, depth = 500, max_len = 12, target = 6, parallel = true))]
    fn classify(&self, py: Python<'_>, seq: &str, depth: usize, max_len: usize, target: usize, parallel: bool) -> PyResult<String> {
        let family_spec = parse_family(seq).map_err(value_error)?;
        let options = ClassifyOptions { depth, max_len, target, parallel, ..ClassifyOptions::default() };
        let group = &self.inner;
        let c = py.detach(|| classify(group, &family_spec, &options)).map_err(value_error)?;
        Ok(classification_report(group.config(), &c, &options).to_json())
    }

    #[pyo3(signature = (seq, u, v, control = false, max_len = 12))]
    fn concentrate<'py>(
        &self,
        py: Python<'py>,
        seq: &str,
        u: (f64, f64),
        v: (f64, f64),
        control: bool,
        max_len: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let s = sequence(seq)?;
        let p = decode(&self.inner, &s, 1e-13).map_err(value_error)?.point;
        let task = ConcentrationTask::new(p, arc(u)?, arc(v)?, control, max_len).map_err(value_error)?;
        let group = &self.inner;
        let report = py.detach(|| search_concentration(group, &task));
        let out = PyDict::new(py);
        out.set_item("witness", witness_text(&report.outcome))?;
        out.set_item("words_examined", report.words_examined)?;
        out.set_item("verified", report.verification.map(|c| c.verified))?;
        Ok(out)
    }

    /// Separation search for the geodesic bounding `u`.
    #[pyo3(signature = (seq, u, v, max_len = 12))]
    fn separate<'py>(&self, py: Python<'py>, seq: &str, u: (f64, f64), v: (f64, f64), max_len: usize) -> PyResult<Bound<'py, PyDict>> {
        let s = sequence(seq)?;
        let p = decode(&self.inner, &s, 1e-13).map_err(value_error)?.point;
        let lambda = bounding_geodesic(&arc(u)?).map_err(value_error)?;
        let v = arc(v)?;
        let group = &self.inner;
        let report = py.detach(|| search_separation(group, p, &lambda, &v, max_len)).map_err(value_error)?;
        let direction = report.verification.as_ref().and_then(|c| c.direction).map(|d| {
            serde_json::to_value(d).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
        });
        let out = PyDict::new(py);
        out.set_item("witness", witness_text(&report.outcome))?;
        out.set_item("words_examined", report.words_examined)?;
        out.set_item("direction", direction)?;
        Ok(out)
    }

    /// SVG document with the sides and their translates up to word length `depth`.
    #[pyo3(signature = (depth = 3, size = 1000))]
    fn render(&self, depth: usize, size: u32) -> PyResult<String> {
        let mut scene = RenderScene::with_translates(self.inner.config(), depth);
        scene.size_px = size;
        render_scene(&scene).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Group(radius={})", self.inner.config().radius)
    }
}

/// First `n` letters of a sequence written in the family language.
#[pyfunction]
fn expand(text: &str, n: usize) -> PyResult<String> {
    Ok(letters_to_string(&sequence(text)?.prefix(n)))
}

#[pyfunction]
fn reduced_word_count(length: usize) -> u64 {
    count_words(length)
}

#[pymodule]
fn schottky(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_word_count, m)?)?;
    Ok(())
}
