//! Python bindings for `setqm`.
//!
//! Probabilities and other exact values come back as `fractions.Fraction`.
//! Every library error is raised as `setqm.SetqmError` with the message
//! `"<Kind>: <detail>"`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use setqm::attributes as attrs;
use setqm::dynamics::double_slit as slit_distribution;
use setqm::entangle::{bell_violation, counterfactual_joint, is_separated};
use setqm::partitions as parts;
use setqm::qc2;
use setqm::{density, dsl, presets, setspace, Probability, Rational};

create_exception!(setqm, SetqmError, PyValueError);

fn err(e: setqm::Error) -> PyErr {
    SetqmError::new_err(format!("{}: {e}", e.name()))
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for setqm::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn fraction<'py>(py: Python<'py>, r: Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

fn prob<'py>(py: Python<'py>, p: Probability) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, p.value())
}

/// Accepts an int, a `Fraction`, or a string such as `"2/3"`.
fn to_rational(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(n) = v.extract::<i64>() {
        return Ok(Rational::from_integer(n));
    }
    if let (Ok(n), Ok(d)) = (v.getattr("numerator"), v.getattr("denominator")) {
        return Ok(Rational::new(n.extract()?, d.extract()?));
    }
    setqm::prob::parse_rational(&v.str()?.to_cow()?).or_raise()
}

fn label_probs<'py>(py: Python<'py>, pairs: &[(String, Probability)]) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (l, p) in pairs {
        d.set_item(l, prob(py, *p)?)?;
    }
    Ok(d)
}

/// A finite set of labelled elements.
#[pyclass(module = "setqm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Universe(setqm::Universe);

#[pymethods]
impl Universe {
    #[new]
    fn new(labels: &str) -> PyResult<Self> {
        setqm::Universe::parse(labels).map(Universe).or_raise()
    }

    #[staticmethod]
    fn abc() -> Self {
        Universe(presets::abc())
    }

    #[staticmethod]
    fn ab() -> Self {
        Universe(presets::ab())
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.size()
    }

    fn subset(&self, text: &str) -> PyResult<Ket> {
        self.0.parse_subset(text).map(Ket).or_raise()
    }

    fn full(&self) -> Ket {
        Ket(self.0.full())
    }

    fn empty(&self) -> Ket {
        Ket(self.0.empty())
    }

    fn __repr__(&self) -> String {
        format!("Universe('{}')", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// A subset of a universe, read as a vector over Z2.
#[pyclass(module = "setqm", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Ket(setspace::SubsetKet);

#[pymethods]
impl Ket {
    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __add__(&self, other: &Ket) -> PyResult<Ket> {
        self.0.add(&other.0).map(Ket).or_raise()
    }

    fn __and__(&self, other: &Ket) -> PyResult<Ket> {
        self.0.intersect(&other.0).map(Ket).or_raise()
    }

    fn issubset(&self, other: &Ket) -> PyResult<bool> {
        self.0.is_subset_of(&other.0).or_raise()
    }

    fn bracket(&self, other: &Ket) -> PyResult<usize> {
        setspace::bracket(&self.0, &other.0).or_raise()
    }

    fn __repr__(&self) -> String {
        format!("Ket('{}')", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// A basis of Z2^n with its own element labels.
#[pyclass(module = "setqm", frozen, from_py_object)]
#[derive(Clone)]
struct Frame(setspace::BasisFrame);

#[pymethods]
impl Frame {
    #[staticmethod]
    fn canonical(name: &str, universe: &Universe) -> Self {
        Frame(setspace::BasisFrame::canonical(name, &universe.0))
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.universe().labels().to_vec()
    }

    fn subset(&self, text: &str) -> PyResult<Ket> {
        self.0.universe().parse_subset(text).map(Ket).or_raise()
    }

    /// Coordinates of a canonical ket in this basis.
    fn to_basis(&self, ket: &Ket) -> PyResult<Ket> {
        setspace::to_basis(&ket.0, &self.0).map(Ket).or_raise()
    }

    fn to_canonical(&self, ket: &Ket) -> PyResult<Ket> {
        self.0.to_canonical(&ket.0).map(Ket).or_raise()
    }

    fn born<'py>(&self, py: Python<'py>, ket: &Ket) -> PyResult<Bound<'py, PyDict>> {
        label_probs(py, &setspace::born(&ket.0, &self.0).or_raise()?)
    }

    fn __repr__(&self) -> String {
        format!("Frame('{}')", self.0.name())
    }
}

#[pyfunction]
fn triad_frames() -> Vec<Frame> {
    presets::triad_frames().into_iter().map(Frame).collect()
}

#[pyfunction]
fn bell_frames() -> Vec<Frame> {
    presets::bell_frames().into_iter().map(Frame).collect()
}

/// Every ket written in each basis, as a list of rows.
#[pyfunction]
fn ket_table(frames: Vec<Frame>) -> PyResult<Vec<Vec<String>>> {
    let fs: Vec<_> = frames.into_iter().map(|f| f.0).collect();
    let dim = fs.first().map_or(0, |f| f.dim());
    let t = setspace::ket_table(dim, &fs).or_raise()?;
    Ok(t.rows.iter().map(|r| r.iter().map(|k| k.to_string()).collect()).collect())
}

#[pyclass(module = "setqm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Partition(parts::Partition);

#[pymethods]
impl Partition {
    #[new]
    fn new(universe: &Universe, text: &str) -> PyResult<Self> {
        parts::Partition::parse(&universe.0, text).map(Partition).or_raise()
    }

    #[getter]
    fn blocks(&self) -> Vec<Vec<String>> {
        self.0.blocks().iter().map(|b| b.labels()).collect()
    }

    fn dits(&self) -> Vec<(String, String)> {
        parts::dit_set(&self.0).label_pairs()
    }

    fn logical_entropy<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        prob(py, parts::logical_entropy(&self.0))
    }

    fn shannon_entropy(&self) -> f64 {
        parts::shannon_entropy(&self.0)
    }

    fn join(&self, other: &Partition) -> PyResult<Partition> {
        parts::join(&self.0, &other.0).map(Partition).or_raise()
    }

    /// True if `self` refines `other`.
    fn refines(&self, other: &Partition) -> PyResult<bool> {
        parts::refines(&self.0, &other.0).or_raise()
    }

    fn density(&self) -> DensityMatrix {
        DensityMatrix(density::rho_of_partition(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("Partition('{}')", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// A real-valued function on a universe.
#[pyclass(module = "setqm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Attribute(attrs::Attribute);

#[pymethods]
impl Attribute {
    /// `"a=1,b=2,c=3"`.
    #[new]
    fn new(universe: &Universe, text: &str) -> PyResult<Self> {
        attrs::Attribute::parse(&universe.0, text).map(Attribute).or_raise()
    }

    #[staticmethod]
    fn ordinal(universe: &Universe) -> Self {
        Attribute(attrs::Attribute::ordinal(&universe.0))
    }

    #[staticmethod]
    fn characteristic(ket: &Ket) -> Self {
        Attribute(attrs::Attribute::characteristic(&ket.0))
    }

    fn spectrum<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0.spectrum().into_iter().map(|r| fraction(py, r)).collect()
    }

    fn partition(&self) -> Partition {
        Partition(attrs::inverse_image_partition(&self.0))
    }

    fn probabilities<'py>(&self, py: Python<'py>, ket: &Ket) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (r, p) in attrs::measure_probs(&self.0, &ket.0).or_raise()? {
            d.set_item(fraction(py, r)?, prob(py, p)?)?;
        }
        Ok(d)
    }

    /// Returns `(eigenvalue, probability, collapsed_ket)`.
    #[pyo3(signature = (ket, *, seed = 0, outcome = None))]
    fn measure<'py>(
        &self,
        py: Python<'py>,
        ket: &Ket,
        seed: u64,
        outcome: Option<&Bound<'py, PyAny>>,
    ) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>, Ket)> {
        let m = match outcome {
            Some(r) => attrs::measure_given(&self.0, &ket.0, to_rational(r)?),
            None => {
                use rand::SeedableRng;
                attrs::measure(&self.0, &ket.0, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
            }
        }
        .or_raise()?;
        Ok((fraction(py, m.eigenvalue)?, prob(py, m.probability)?, Ket(m.post_state)))
    }
}

#[pyclass(module = "setqm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct DensityMatrix(density::DensityMatrix);

#[pymethods]
impl DensityMatrix {
    #[staticmethod]
    fn of_ket(ket: &Ket) -> PyResult<Self> {
        density::rho_of_subset(&ket.0).map(DensityMatrix).or_raise()
    }

    fn entries<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        self.0
            .entries()
            .iter()
            .map(|row| row.iter().map(|r| fraction(py, *r)).collect())
            .collect()
    }

    fn trace<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.trace())
    }

    fn purity<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        prob(py, density::purity(&self.0))
    }

    fn logical_entropy<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        prob(py, density::logical_entropy_rho(&self.0))
    }

    fn measure(&self, attribute: &Attribute) -> PyResult<DensityMatrix> {
        density::measure_density(&attribute.0, &self.0).map(DensityMatrix).or_raise()
    }

    fn __str__(&self) -> String {
        self.0.render_text()
    }
}

#[pyfunction]
#[pyo3(signature = (measure_at_slits = false))]
fn double_slit(py: Python<'_>, measure_at_slits: bool) -> PyResult<Bound<'_, PyDict>> {
    label_probs(py, &slit_distribution(&presets::double_slit(), measure_at_slits).or_raise()?)
}

/// Bell inequality check on a subset of `{a,b}×{a,b}` such as `"{(a,a),(b,b)}"`.
#[pyfunction]
#[pyo3(signature = (state = None))]
fn bell<'py>(py: Python<'py>, state: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
    let s = match state {
        Some(text) => presets::bell_product().parse_state(text).or_raise()?,
        None => presets::bell_state(),
    };
    let report = bell_violation(&s).or_raise()?;
    let joint = counterfactual_joint(&s, &presets::bell_frames()).or_raise()?;
    let terms = PyDict::new(py);
    for (name, p) in &report.terms {
        terms.set_item(name, prob(py, *p)?)?;
    }
    let d = PyDict::new(py);
    d.set_item("state", s.to_string())?;
    d.set_item("separated", is_separated(&s))?;
    d.set_item("terms", terms)?;
    d.set_item("lhs", fraction(py, report.lhs)?)?;
    d.set_item("rhs", fraction(py, report.rhs)?)?;
    d.set_item("violated", report.violated)?;
    d.set_item("summary", report.summary())?;
    d.set_item("counterfactual", prob(py, joint.prob(0, 0, 0))?)?;
    let marginals: PyResult<Vec<_>> = joint.marginals.iter().map(|p| prob(py, *p)).collect();
    d.set_item("counterfactual_marginals", marginals?)?;
    Ok(d)
}

/// A register of lines over Z2, big-endian (line 0 is the leftmost bit).
#[pyclass(module = "setqm", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Register(qc2::Register);

#[pymethods]
impl Register {
    /// `Register(["00", "11"])` is |00⟩+|11⟩.
    #[new]
    fn new(kets: Vec<String>) -> PyResult<Self> {
        qc2::Register::ket(&kets).map(Register).or_raise()
    }

    #[getter]
    fn lines(&self) -> usize {
        self.0.lines()
    }

    #[getter]
    fn support(&self) -> Vec<String> {
        self.0.support_bitstrings()
    }

    fn line_probability<'py>(&self, py: Python<'py>, line: usize, outcome: u8) -> PyResult<Bound<'py, PyAny>> {
        prob(py, self.0.line_probability(line, outcome).or_raise()?)
    }

    /// Collapse `line` to `outcome`; returns `(probability, register)`.
    fn measure<'py>(&self, py: Python<'py>, line: usize, outcome: u8) -> PyResult<(Bound<'py, PyAny>, Register)> {
        let (p, r) = self.0.measure_line_given(line, outcome).or_raise()?;
        Ok((prob(py, p)?, Register(r)))
    }

    /// Apply a named gate (`X`, `H0`, `CNOT`, ...) starting at `line`.
    #[pyo3(signature = (gate, line = 0))]
    fn apply(&self, gate: &str, line: usize) -> PyResult<Register> {
        let g = qc2::standard_gate(gate).or_raise()?;
        let span = qc2::LineSpan::Range { start: line, width: g.lines() };
        qc2::apply(&g, &self.0, span).map(Register).or_raise()
    }

    fn __repr__(&self) -> String {
        format!("Register({:?})", self.0.support_bitstrings())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, *, seed = 0, outcome = None))]
fn teleport(py: Python<'_>, alpha: u8, beta: u8, seed: u64, outcome: Option<u8>) -> PyResult<Bound<'_, PyDict>> {
    if alpha > 1 || beta > 1 {
        return Err(err(setqm::Error::OutOfRange(format!("amplitudes ({alpha},{beta})"))));
    }
    let (alpha, beta) = (alpha == 1, beta == 1);
    let t = match outcome {
        Some(m) => qc2::teleport_given(alpha, beta, m),
        None => {
            use rand::SeedableRng;
            qc2::teleport(alpha, beta, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
        }
    }
    .or_raise()?;
    let d = PyDict::new(py);
    for (k, r) in [
        ("input", &t.input),
        ("phi0", &t.phi0),
        ("phi1", &t.phi1),
        ("phi2", &t.phi2),
        ("collapsed", &t.collapsed),
        ("bob_received", &t.bob_received),
        ("bob_final", &t.bob_final),
    ] {
        d.set_item(k, Register(r.clone()))?;
    }
    d.set_item("measured", t.measured)?;
    d.set_item("probability", prob(py, t.probability)?)?;
    d.set_item("success", t.success)?;
    Ok(d)
}

/// Parity of the number of satisfying inputs of a truth table like `"1101"`.
#[pyfunction]
fn parity_sat<'py>(py: Python<'py>, table: &str) -> PyResult<Bound<'py, PyDict>> {
    let f = qc2::BooleanFunction::from_bits(table).or_raise()?;
    let r = qc2::parity_sat(&f).or_raise()?;
    let d = PyDict::new(py);
    d.set_item("table", &r.table)?;
    d.set_item("arity", r.arity)?;
    d.set_item("lines", r.lines)?;
    d.set_item("measured", &r.measured_ket)?;
    d.set_item("slices", &r.slice_label)?;
    d.set_item("parity", r.parity)?;
    d.set_item("ef_applications", r.ef_applications)?;
    Ok(d)
}

/// `"constant"` or `"balanced"` for a one-argument truth table.
#[pyfunction]
fn deutsch(table: &str) -> PyResult<&'static str> {
    let f = qc2::BooleanFunction::from_bits(table).or_raise()?;
    Ok(match qc2::deutsch(&f).or_raise()? {
        qc2::DeutschAnswer::Constant => "constant",
        qc2::DeutschAnswer::Balanced => "balanced",
    })
}

/// A parsed `.qc2` circuit.
#[pyclass(module = "setqm", frozen)]
struct Circuit(dsl::CircuitAst);

#[pymethods]
impl Circuit {
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        dsl::parse(source).map(Circuit).map_err(|e| err(e.into()))
    }

    fn render(&self) -> String {
        dsl::render(&self.0)
    }

    /// Run with a seed, or with forced measurement bits.
    ///
    /// Returns `{"outcomes": [(target, bits), ...], "final": Register, "trace": [...]}`.
    #[pyo3(signature = (*, seed = 0, outcomes = None))]
    fn run<'py>(&self, py: Python<'py>, seed: u64, outcomes: Option<Vec<u8>>) -> PyResult<Bound<'py, PyDict>> {
        let rec = match outcomes {
            Some(bits) => dsl::run_forced(&self.0, &bits),
            None => dsl::run(&self.0, seed),
        }
        .or_raise()?;
        let trace = PyList::empty(py);
        for s in &rec.steps {
            trace.append((s.statement.clone(), Register(s.state.clone())))?;
        }
        let d = PyDict::new(py);
        d.set_item("initial", Register(rec.initial))?;
        d.set_item("outcomes", rec.outcomes)?;
        d.set_item("final", Register(rec.final_state))?;
        d.set_item("trace", trace)?;
        Ok(d)
    }
}

/// Number of elements shared by two kets.
#[pyfunction]
fn bracket(t: &Ket, s: &Ket) -> PyResult<usize> {
    setspace::bracket(&t.0, &s.0).or_raise()
}

#[pymodule]
#[pyo3(name = "setqm")]
fn setqm_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SetqmError", m.py().get_type::<SetqmError>())?;
    m.add_class::<Universe>()?;
    m.add_class::<Ket>()?;
    m.add_class::<Frame>()?;
    m.add_class::<Partition>()?;
    m.add_class::<Attribute>()?;
    m.add_class::<DensityMatrix>()?;
    m.add_class::<Register>()?;
    m.add_class::<Circuit>()?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(triad_frames, m)?)?;
    m.add_function(wrap_pyfunction!(bell_frames, m)?)?;
    m.add_function(wrap_pyfunction!(ket_table, m)?)?;
    m.add_function(wrap_pyfunction!(double_slit, m)?)?;
    m.add_function(wrap_pyfunction!(bell, m)?)?;
    m.add_function(wrap_pyfunction!(teleport, m)?)?;
    m.add_function(wrap_pyfunction!(parity_sat, m)?)?;
    m.add_function(wrap_pyfunction!(deutsch, m)?)?;
    Ok(())
}
