//! Python bindings. Rational arguments accept `int`, `fractions.Fraction`
//! or a string such as `"3/2"` or `"0.25"`; rational results come back as
//! `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;

use symplectic_embed::capacities::{self as caps, CapSequence, DominanceReport};
use symplectic_embed::cone::{self, ConeCertificate};
use symplectic_embed::embed::{self, EmbedDecision};
use symplectic_embed::oracle;
use symplectic_embed::rational::parse_rational;
use symplectic_embed::weights;
use symplectic_embed::{Error, Rational};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.cast::<PyString>() {
        return parse_rational(&s.to_cow()?).map_err(err);
    }
    obj.extract::<Rational>()
        .map_err(|_| PyValueError::new_err(format!("not a rational: {obj}")))
}

fn rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(rational).collect()
}

fn sequence(objs: &[Bound<'_, PyAny>]) -> PyResult<CapSequence> {
    CapSequence::from_terms(&rationals(objs)?).map_err(err)
}

fn first_violation(rep: &DominanceReport) -> Option<usize> {
    match rep {
        DominanceReport::Holds { .. } => None,
        DominanceReport::Violation { index, .. } => Some(*index),
    }
}

/// E(a, b); omit `b` for the ball B(a).
#[pyclass(name = "Ellipsoid", frozen, from_py_object)]
#[derive(Clone)]
struct PyEllipsoid(embed::Ellipsoid);

#[pymethods]
impl PyEllipsoid {
    #[new]
    #[pyo3(signature = (a, b=None))]
    fn new(a: &Bound<'_, PyAny>, b: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let a = rational(a)?;
        let b = match b {
            Some(b) => rational(b)?,
            None => a.clone(),
        };
        embed::Ellipsoid::new(a, b).map(Self).map_err(err)
    }

    #[getter]
    fn a(&self) -> Rational {
        self.0.a().clone()
    }

    #[getter]
    fn b(&self) -> Rational {
        self.0.b().clone()
    }

    fn capacities(&self, max_index: usize) -> Vec<Rational> {
        self.0.caps(max_index).terms()
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// A class (mu; a_1, ..., a_n).
#[pyclass(name = "ConeClass", frozen, from_py_object)]
#[derive(Clone)]
struct PyConeClass(cone::ConeClass);

#[pymethods]
impl PyConeClass {
    #[new]
    fn new(mu: &Bound<'_, PyAny>, coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(Self(cone::ConeClass::new(rational(mu)?, rationals(&coeffs)?)))
    }

    #[getter]
    fn mu(&self) -> Rational {
        self.0.mu.clone()
    }

    #[getter]
    fn coeffs(&self) -> Vec<Rational> {
        self.0.coeffs.clone()
    }

    fn self_intersection(&self) -> Rational {
        self.0.self_intersection()
    }

    fn chern(&self) -> Rational {
        self.0.chern()
    }

    fn cremona(&self) -> Self {
        use cone::Cremona;
        Self(self.0.padded(3).cremona())
    }

    /// Sort-and-Cremona reduction; returns the final class and the move log as JSON.
    fn reduce(&self) -> (Self, String) {
        let r = cone::reduce(&self.0);
        (Self(r.reduced), r.log.to_json().to_string())
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "ConeDecision", frozen)]
struct PyConeDecision {
    #[pyo3(get)]
    verdict: &'static str,
    #[pyo3(get)]
    certificate_kind: &'static str,
    certificate: ConeCertificate,
}

#[pymethods]
impl PyConeDecision {
    fn certificate_json(&self) -> String {
        self.certificate.to_json().to_string()
    }

    fn __bool__(&self) -> bool {
        self.verdict == "yes"
    }
}

#[pyclass(name = "EmbedDecision", frozen)]
struct PyEmbedDecision {
    #[pyo3(get)]
    verdict: &'static str,
    #[pyo3(get)]
    certificate_kind: &'static str,
    #[pyo3(get)]
    class_: PyConeClass,
    #[pyo3(get)]
    scale: Rational,
    #[pyo3(get)]
    domain_balls: usize,
    /// (index, lhs, rhs) of a capacity violation, if one was found.
    #[pyo3(get)]
    capacity_witness: Option<(usize, Rational, Rational)>,
    certificate: ConeCertificate,
}

impl From<EmbedDecision> for PyEmbedDecision {
    fn from(d: EmbedDecision) -> Self {
        Self {
            verdict: d.verdict.as_str(),
            certificate_kind: d.cone.certificate.kind(),
            class_: PyConeClass(d.class.class),
            scale: d.class.scale,
            domain_balls: d.class.domain_balls,
            capacity_witness: d.capacity_witness.map(|w| (w.index, w.lhs, w.rhs)),
            certificate: d.cone.certificate,
        }
    }
}

#[pymethods]
impl PyEmbedDecision {
    fn certificate_json(&self) -> String {
        self.certificate.to_json().to_string()
    }

    fn __bool__(&self) -> bool {
        self.verdict == "yes"
    }

    fn __repr__(&self) -> String {
        format!("EmbedDecision({}, {})", self.verdict, self.certificate_kind)
    }
}

fn domain_list(domains: &[PyEllipsoid]) -> Vec<embed::Ellipsoid> {
    domains.iter().map(|d| d.0.clone()).collect()
}

/// Weight sequence W(p, q), flattened.
#[pyfunction]
fn weight_sequence(p: u64, q: u64) -> PyResult<Vec<u64>> {
    let w = weights::weight_sequence_u64(p, q).map_err(err)?;
    Ok(w.flatten().iter().map(|x| u64::try_from(x).expect("weights are bounded by p")).collect())
}

#[pyfunction]
fn continued_fraction(p: u64, q: u64) -> PyResult<Vec<u64>> {
    let (p, q) = if p >= q { (p, q) } else { (q, p) };
    let cf = weights::continued_fraction(&p.into(), &q.into()).map_err(err)?;
    Ok(cf.iter().map(|x| u64::try_from(x).expect("digits are bounded by p")).collect())
}

/// N_0(a, b), ..., N_max_index(a, b).
#[pyfunction]
fn cap_seq(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, max_index: usize) -> PyResult<Vec<Rational>> {
    Ok(caps::cap_seq(&rational(a)?, &rational(b)?, max_index).map_err(err)?.terms())
}

#[pyfunction]
fn cap_of_ball_list(sizes: Vec<Bound<'_, PyAny>>, max_index: usize) -> PyResult<Vec<Rational>> {
    Ok(caps::cap_of_ball_list(&rationals(&sizes)?, max_index).map_err(err)?.terms())
}

/// Max-plus convolution of two capacity sequences of equal length.
#[pyfunction]
fn sharp(x: Vec<Bound<'_, PyAny>>, y: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<Rational>> {
    let (x, y) = (sequence(&x)?, sequence(&y)?);
    if x.len() != y.len() {
        return Err(PyValueError::new_err("sequences differ in length"));
    }
    Ok(caps::sharp(&x, &y).terms())
}

/// First index where `lhs` exceeds `rhs`, or None.
#[pyfunction]
fn dominance_violation(lhs: Vec<Bound<'_, PyAny>>, rhs: Vec<Bound<'_, PyAny>>) -> PyResult<Option<usize>> {
    let rep = caps::dominates(&sequence(&lhs)?, &sequence(&rhs)?).map_err(err)?;
    Ok(first_violation(&rep))
}

#[pyfunction]
fn in_cone_closure(alpha: &PyConeClass) -> PyResult<PyConeDecision> {
    let d = cone::in_cone_closure(&alpha.0).map_err(err)?;
    Ok(PyConeDecision {
        verdict: d.verdict.as_str(),
        certificate_kind: d.certificate.kind(),
        certificate: d.certificate,
    })
}

/// Does the disjoint union of `domains` embed into `target`?
#[pyfunction]
fn decide(domains: Vec<PyEllipsoid>, target: &PyEllipsoid) -> PyResult<PyEmbedDecision> {
    embed::decide(&domain_list(&domains), &target.0).map(Into::into).map_err(err)
}

/// First index at which the capacity inequality fails, or None up to `max_index`.
#[pyfunction]
fn capacity_check(domains: Vec<PyEllipsoid>, target: &PyEllipsoid, max_index: usize) -> PyResult<Option<usize>> {
    let rep = embed::capacity_check(&domain_list(&domains), &target.0, max_index).map_err(err)?;
    Ok(first_violation(&rep))
}

#[pyfunction]
fn ball_packing(sizes: Vec<Bound<'_, PyAny>>, mu: &Bound<'_, PyAny>) -> PyResult<PyEmbedDecision> {
    embed::ball_packing(&rationals(&sizes)?, &rational(mu)?).map(Into::into).map_err(err)
}

/// Bracket (lo, hi) on the largest s with s·domain embedding into target.
#[pyfunction]
fn squeeze(domain: &PyEllipsoid, target: &PyEllipsoid, eps: &Bound<'_, PyAny>) -> PyResult<(Rational, Rational)> {
    let b = embed::squeeze(&domain.0, &target.0, &rational(eps)?).map_err(err)?;
    Ok((b.lo, b.hi))
}

/// Bracket (lo, hi) on the least A with E(1, a) embedding into B(A).
#[pyfunction]
fn staircase_point(a: &Bound<'_, PyAny>, eps: &Bound<'_, PyAny>) -> PyResult<(Rational, Rational)> {
    let b = embed::staircase_point(&rational(a)?, &rational(eps)?).map_err(err)?;
    Ok((b.lo, b.hi))
}

/// Tuple (d, m) with the most negative pairing against `alpha`, if any.
#[pyfunction]
#[pyo3(signature = (alpha, max_degree=oracle::DEFAULT_SCAN_DEGREE))]
fn constraint_scan(alpha: &PyConeClass, max_degree: i64) -> PyResult<Option<(i64, Vec<i64>, Rational)>> {
    let hit = oracle::constraint_scan(&alpha.0, max_degree).map_err(err)?;
    Ok(hit.map(|h| (h.tuple.d, h.tuple.m, h.pairing)))
}

#[pymodule(name = "symplectic_embed")]
fn native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEllipsoid>()?;
    m.add_class::<PyConeClass>()?;
    m.add_class::<PyConeDecision>()?;
    m.add_class::<PyEmbedDecision>()?;
    m.add_function(wrap_pyfunction!(weight_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(continued_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(cap_seq, m)?)?;
    m.add_function(wrap_pyfunction!(cap_of_ball_list, m)?)?;
    m.add_function(wrap_pyfunction!(sharp, m)?)?;
    m.add_function(wrap_pyfunction!(dominance_violation, m)?)?;
    m.add_function(wrap_pyfunction!(in_cone_closure, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_check, m)?)?;
    m.add_function(wrap_pyfunction!(ball_packing, m)?)?;
    m.add_function(wrap_pyfunction!(squeeze, m)?)?;
    m.add_function(wrap_pyfunction!(staircase_point, m)?)?;
    m.add_function(wrap_pyfunction!(constraint_scan, m)?)?;
    Ok(())
}
