//! Python bindings, importable as `hrk`.
//!
//! Big integers come back as Python `int`. Errors raise `ValueError`, except
//! computations that would exceed a configured cap, which raise
//! `hrk.ResourceLimitError`.

use hrk_core::cyclic2::{burnside_orbit_count, orbit_decompose, CyclicGroup};
use hrk_core::f2poly::{
    bundled_relation_file, is_nilpotent_witness, steenrod_conjugates as core_conjugates, verify_regularity,
    Limits, NilpotenceWitness, PolyError, RelationFile,
};
use hrk_core::hilbert::{self, HilbertError};
use hrk_core::koszul::{associated_graded, render_table};
use hrk_core::kzero::{self, height_drop_degree};
use hrk_core::moore::{self, MooreShape, Status};
use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::collections::BTreeMap;

create_exception!(hrk, ResourceLimitError, PyRuntimeError);

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn hilbert_err(e: HilbertError) -> PyErr {
    match e {
        HilbertError::ResourceLimit { .. } | HilbertError::HeightTooLarge { .. } => {
            ResourceLimitError::new_err(e.to_string())
        }
        other => value_err(other),
    }
}

fn poly_err(e: PolyError) -> PyErr {
    if e.is_resource_limit() {
        ResourceLimitError::new_err(e.to_string())
    } else {
        value_err(e)
    }
}

fn group(name: &str) -> PyResult<CyclicGroup> {
    CyclicGroup::parse(name).map_err(value_err)
}

/// The height-`h` context for `C_{2^n}` with `h = 2^{n-1} m`.
#[pyclass(frozen, name = "HeightContext")]
struct PyHeightContext {
    inner: hilbert::HeightContext,
}

#[pymethods]
impl PyHeightContext {
    #[new]
    fn new(n: u32, m: u32) -> PyResult<Self> {
        Ok(PyHeightContext {
            inner: hilbert::HeightContext::new(n, m).map_err(hilbert_err)?,
        })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m
    }

    #[getter]
    fn h(&self) -> u64 {
        self.inner.h
    }

    /// Dimension over F_2 of the quotient ring.
    fn dimension(&self) -> PyResult<BigUint> {
        hilbert::dimension(&self.inner).map_err(hilbert_err)
    }

    fn gaussian_product(&self) -> BigUint {
        hilbert::gaussian_product(&self.inner)
    }

    /// Dense Poincaré coefficients, lowest degree first.
    fn poincare_series(&self) -> PyResult<Vec<BigInt>> {
        Ok(hilbert::poincare_series(&self.inner)
            .map_err(hilbert_err)?
            .coefficients()
            .to_vec())
    }

    /// `{d: e_d}` with the series equal to `∏ Φ_d^{e_d}`.
    fn cyclotomic_exponents(&self) -> PyResult<BTreeMap<u64, u64>> {
        Ok(hilbert::poincare_factorization(&self.inner)
            .map_err(hilbert_err)?
            .exponents)
    }

    fn __repr__(&self) -> String {
        format!("HeightContext(n={}, m={})", self.inner.n, self.inner.m)
    }
}

#[pyfunction]
fn dimension(n: u32, m: u32) -> PyResult<BigUint> {
    hilbert::dimension(&hilbert::HeightContext::new(n, m).map_err(hilbert_err)?).map_err(hilbert_err)
}

#[pyfunction]
fn gaussian_binomial(top: u64, bottom: u64) -> PyResult<BigUint> {
    if bottom > top {
        return Err(PyValueError::new_err("need bottom <= top"));
    }
    Ok(hilbert::gaussian_binomial(top, bottom))
}

#[pyfunction]
fn poincare_series(n: u32, m: u32) -> PyResult<Vec<BigInt>> {
    PyHeightContext::new(n, m)?.poincare_series()
}

/// Orbit representatives of markings, as dictionaries.
#[pyfunction]
fn orbits<'py>(py: Python<'py>, group_name: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let g = group(group_name)?;
    let found = orbit_decompose(g).map_err(|e| ResourceLimitError::new_err(e.to_string()))?;
    found
        .iter()
        .map(|o| {
            let d = PyDict::new(py);
            d.set_item("representative", o.representative.to_string())?;
            d.set_item("stabilizer_exponent", o.stabilizer_exponent)?;
            d.set_item("orbit_size", o.orbit_size)?;
            d.set_item("n_f", o.n_f)?;
            d.set_item("grading", o.grading)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
fn burnside_count(group_name: &str) -> PyResult<u64> {
    burnside_orbit_count(group(group_name)?).map_err(|e| ResourceLimitError::new_err(e.to_string()))
}

/// `{grading: [summand, ...]}` with summands rendered as strings.
#[pyfunction]
#[pyo3(signature = (group_name, kdeg = 1))]
fn filtration(group_name: &str, kdeg: u64) -> PyResult<BTreeMap<u64, Vec<String>>> {
    if kdeg == 0 {
        return Err(PyValueError::new_err("kdeg must be positive"));
    }
    let t = associated_graded(group(group_name)?, kdeg).map_err(value_err)?;
    Ok(t
        .iter()
        .map(|(g, row)| (*g, row.iter().map(|s| s.to_string()).collect()))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (group_name, kdeg = 1))]
fn filtration_table(group_name: &str, kdeg: u64) -> PyResult<String> {
    if kdeg == 0 {
        return Err(PyValueError::new_err("kdeg must be positive"));
    }
    Ok(render_table(&associated_graded(group(group_name)?, kdeg).map_err(value_err)?))
}

/// A relation in K_0 together with the trace that derives it.
#[pyclass(frozen, name = "K0Relation")]
struct PyK0Relation {
    inner: kzero::K0Relation,
}

#[pymethods]
impl PyK0Relation {
    #[getter]
    fn mod_torsion(&self) -> bool {
        self.inner.mod_torsion
    }

    /// Terms of the left side as `(coefficient, atom)` pairs.
    fn lhs(&self) -> Vec<(BigInt, String)> {
        self.inner.lhs.terms().map(|(a, c)| (c.clone(), a.to_string())).collect()
    }

    fn rhs(&self) -> Vec<(BigInt, String)> {
        self.inner.rhs.terms().map(|(a, c)| (c.clone(), a.to_string())).collect()
    }

    /// True when replaying the trace from the start reproduces the relation.
    fn replays(&self) -> bool {
        self.inner.replays()
    }

    fn proof(&self) -> String {
        self.inner.proof()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("K0Relation({})", self.inner)
    }
}

#[pyfunction]
#[pyo3(signature = (group_name, kdeg = 1))]
fn quotient_relation(group_name: &str, kdeg: u64) -> PyResult<PyK0Relation> {
    let g = group(group_name)?;
    if g.exponent() == 0 {
        return Err(PyValueError::new_err("the group must be nontrivial"));
    }
    Ok(PyK0Relation {
        inner: kzero::quotient_relation(g.exponent(), kdeg).map_err(value_err)?,
    })
}

/// `(steps, composed)` for the height-drop relations of `C_{2^n}` at `m`.
#[pyfunction]
fn derive_height_drop(n: u32, m: u32) -> PyResult<(Vec<PyK0Relation>, Vec<PyK0Relation>)> {
    let k_deg = if n == 0 {
        1
    } else {
        height_drop_degree(&hilbert::HeightContext::new(n, m).map_err(hilbert_err)?)
    };
    let d = kzero::derive_height_drop_for(n, k_deg).map_err(value_err)?;
    let wrap = |v: Vec<kzero::K0Relation>| v.into_iter().map(|inner| PyK0Relation { inner }).collect();
    Ok((wrap(d.steps), wrap(d.composed)))
}

#[pyclass(frozen, name = "Verdict")]
struct PyVerdict {
    inner: moore::Verdict,
}

#[pymethods]
impl PyVerdict {
    /// `"RuledOut"` or `"NotRuledOut"`.
    #[getter]
    fn status(&self) -> String {
        self.inner.status.to_string()
    }

    #[getter]
    fn ruled_out(&self) -> bool {
        self.inner.status == Status::RuledOut
    }

    #[getter]
    fn height(&self) -> u64 {
        self.inner.height
    }

    #[getter]
    fn nu2_product(&self) -> u64 {
        self.inner.witness.nu2_product
    }

    #[getter]
    fn nu2_height(&self) -> u64 {
        self.inner.witness.nu2_height
    }

    #[getter]
    fn bound(&self) -> BigUint {
        self.inner.witness.bound.clone()
    }

    #[getter]
    fn caveat(&self) -> Option<String> {
        self.inner.caveat.clone()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

fn shape(exponents: Vec<u64>) -> PyResult<MooreShape> {
    MooreShape::new(exponents).map_err(value_err)
}

#[pyfunction]
fn moore_gate(exponents: Vec<u64>) -> PyResult<PyVerdict> {
    Ok(PyVerdict {
        inner: moore::moore_gate(&shape(exponents)?).map_err(value_err)?,
    })
}

#[pyfunction]
fn chi_bp(exponents: Vec<u64>) -> PyResult<BigUint> {
    Ok(moore::chi_bp(&shape(exponents)?))
}

#[pyfunction]
fn chi_eo(n: u32, m: u32, exponents: Vec<u64>) -> PyResult<BigUint> {
    let ctx = hilbert::HeightContext::new(n, m).map_err(hilbert_err)?;
    moore::chi_eo(&ctx, &shape(exponents)?).map_err(value_err)
}

fn relations(n: u32, m: u32, path: Option<&str>) -> PyResult<RelationFile> {
    match path {
        Some(p) => RelationFile::load(std::path::Path::new(p)).map_err(poly_err),
        None => bundled_relation_file(n, m)
            .ok_or_else(|| PyValueError::new_err(format!("no bundled relation file for n={n}, m={m}"))),
    }
}

/// `True`/`False` for whether `element` is nilpotent modulo the height
/// quotient ideal; the exponent found, if any, is the second item.
#[pyfunction]
#[pyo3(signature = (element, n, m, relations_path = None))]
fn is_nilpotent(element: &str, n: u32, m: u32, relations_path: Option<&str>) -> PyResult<(bool, Option<u32>)> {
    let ideal = relations(n, m, relations_path)?.ideal().map_err(poly_err)?;
    let p = ideal.ring.parse(element).map_err(poly_err)?;
    let w = is_nilpotent_witness(&p, &ideal, &Limits::default()).map_err(poly_err)?;
    let power = match w {
        NilpotenceWitness::Power(e) => Some(e),
        _ => None,
    };
    Ok((w.is_nilpotent(), power))
}

#[pyfunction]
#[pyo3(signature = (n, m, relations_path = None))]
fn regularity<'py>(py: Python<'py>, n: u32, m: u32, relations_path: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
    let ctx = hilbert::HeightContext::new(n, m).map_err(hilbert_err)?;
    let file = relations(n, m, relations_path)?;
    let r = verify_regularity(&ctx, &file, &Limits::default()).map_err(poly_err)?;
    let d = PyDict::new(py);
    d.set_item("regular", r.regular)?;
    d.set_item("height", r.height)?;
    d.set_item("sequence_length", r.sequence_length)?;
    d.set_item("generator_count", r.generator_count)?;
    d.set_item("quotient_dim", r.quotient_dim.finite())?;
    d.set_item("mismatch", r.mismatch)?;
    Ok(d)
}

/// The conjugates `ζ_1..ζ_{2m}` rendered in the `ξ_i`.
#[pyfunction]
fn steenrod_conjugates(m: u32) -> PyResult<Vec<String>> {
    if m == 0 {
        return Err(PyValueError::new_err("m must be positive"));
    }
    let (ring, zeta) = core_conjugates(m);
    Ok(zeta.iter().map(|z| ring.render(z)).collect())
}

#[pymodule]
fn hrk(module: &Bound<'_, PyModule>) -> PyResult<()> {
    module.add("ResourceLimitError", module.py().get_type::<ResourceLimitError>())?;
    module.add_class::<PyHeightContext>()?;
    module.add_class::<PyK0Relation>()?;
    module.add_class::<PyVerdict>()?;
    module.add_function(wrap_pyfunction!(dimension, module)?)?;
    module.add_function(wrap_pyfunction!(gaussian_binomial, module)?)?;
    module.add_function(wrap_pyfunction!(poincare_series, module)?)?;
    module.add_function(wrap_pyfunction!(orbits, module)?)?;
    module.add_function(wrap_pyfunction!(burnside_count, module)?)?;
    module.add_function(wrap_pyfunction!(filtration, module)?)?;
    module.add_function(wrap_pyfunction!(filtration_table, module)?)?;
    module.add_function(wrap_pyfunction!(quotient_relation, module)?)?;
    module.add_function(wrap_pyfunction!(derive_height_drop, module)?)?;
    module.add_function(wrap_pyfunction!(moore_gate, module)?)?;
    module.add_function(wrap_pyfunction!(chi_bp, module)?)?;
    module.add_function(wrap_pyfunction!(chi_eo, module)?)?;
    module.add_function(wrap_pyfunction!(is_nilpotent, module)?)?;
    module.add_function(wrap_pyfunction!(regularity, module)?)?;
    module.add_function(wrap_pyfunction!(steenrod_conjugates, module)?)?;
    Ok(())
}
