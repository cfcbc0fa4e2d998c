//! Python bindings: a `Workbench` class wrapping a validated truncated
//! module plus its minimal model, and module-level functions for the
//! fixed-point coefficient calculus. Rationals cross the boundary as
//! strings `"p/q"` so everything stays exact.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hbmodel_core::equivariant::TruncatedModule;
use hbmodel_core::fixed_point::{
    cp2_weighted as cp2_core, relation_report, FixedPointData,
};
use hbmodel_core::model::{
    canonical_extension, cohomology_cartan, cohomology_minimal, dbar_trichotomy,
    gamma_witness as gamma_core, homotopy_identities, minimal_model, twisted_product,
    MinimalModel,
};
use hbmodel_core::rational::{fmt_rat, parse_rat, Rat};
use hbmodel_core::{fixtures, Error};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A validated datum at a fixed cap, with its minimal model.
#[pyclass]
struct Workbench {
    module: TruncatedModule,
    mm: MinimalModel,
    source: String,
}

#[pymethods]
impl Workbench {
    /// Build from a fixture name, a datum-file path, or inline JSON.
    #[new]
    #[pyo3(signature = (datum, cap = None))]
    fn new(datum: &str, cap: Option<usize>) -> PyResult<Self> {
        let trimmed = datum.trim_start();
        let (parsed, file_cap, source) = if trimmed.starts_with('{') {
            let p = hbmodel_core::io::parse_datum_str(datum).map_err(py_err)?;
            (p.datum, p.cap, "<inline>".to_string())
        } else if fixtures::fixture_names().contains(&datum)
            || datum == fixtures::BROKEN_FIXTURE.0
        {
            (fixtures::fixture(datum).map_err(py_err)?, None, datum.to_string())
        } else {
            let p = hbmodel_core::io::parse_datum_path(std::path::Path::new(datum))
                .map_err(py_err)?;
            (p.datum, p.cap, datum.to_string())
        };
        let cap = cap.or(file_cap).unwrap_or(10);
        let module = TruncatedModule::new(parsed, cap).map_err(py_err)?;
        let mm = minimal_model(&module).map_err(py_err)?;
        Ok(Workbench {
            module,
            mm,
            source,
        })
    }

    #[getter]
    fn cap(&self) -> usize {
        self.module.cap()
    }

    #[getter]
    fn window(&self) -> usize {
        self.module.window()
    }

    #[getter]
    fn source(&self) -> String {
        self.source.clone()
    }

    #[getter]
    fn is_abelian(&self) -> bool {
        self.module.datum().is_abelian()
    }

    /// True when the transferred differential vanishes at this cap.
    #[getter]
    fn dhb_is_zero(&self) -> bool {
        self.mm.dhb_is_zero
    }

    /// Validation check lines as `(name, passed, witness)` triples.
    fn validation(&self) -> Vec<(String, bool, Option<String>)> {
        self.module
            .validation()
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.passed, c.witness.clone()))
            .collect()
    }

    /// Cohomology dimensions per total degree: `(minimal, brute_force)`.
    fn cohomology(&self) -> (Vec<usize>, Vec<usize>) {
        (
            cohomology_minimal(&self.module, &self.mm).dims,
            cohomology_cartan(&self.module).dims,
        )
    }

    /// Rendered transferred differential on each harmonic generator.
    fn dhb(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let c = &self.module.datum().complex;
        for deg in 0..c.len() {
            for (idx, value) in self.mm.dhb[deg].iter().enumerate() {
                let mut gen = hbmodel_core::ModuleElement::zero();
                gen.add_term(
                    hbmodel_core::Monomial::one(self.module.datum().rank()),
                    deg,
                    self.module.hodge().harmonic_basis[deg][idx].clone(),
                );
                out.push((
                    self.module.render_element(&gen),
                    self.module.render_element(value),
                ));
            }
        }
        out
    }

    /// Identity-check outcomes as `(name, passed)` pairs.
    fn identities(&self) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        let (pq, _) = self.module.check_pq_zero();
        out.push(("pq_qp_zero".to_string(), pq));
        for check in homotopy_identities(&self.module, &self.mm) {
            out.push((check.name, check.passed));
        }
        for check in dbar_trichotomy(&self.module) {
            out.push((check.name, check.passed));
        }
        out
    }

    fn harmonic_class(&self, label: &str) -> PyResult<(usize, Vec<String>)> {
        let (deg, v) = self.resolve(label)?;
        Ok((deg, v.iter().map(fmt_rat).collect()))
    }

    /// Canonical closed extension of a labeled harmonic class, rendered.
    fn extend(&self, class: &str) -> PyResult<String> {
        let (deg, v) = self.resolve(class)?;
        let ext = canonical_extension(&self.module, &self.mm, deg, &v).map_err(py_err)?;
        Ok(self.module.render_element(&ext))
    }

    /// Twisted product of two labeled harmonic classes, rendered.
    fn product(&self, left: &str, right: &str) -> PyResult<String> {
        let (dl, vl) = self.resolve(left)?;
        let (dr, vr) = self.resolve(right)?;
        let prod = twisted_product(&self.module, &self.mm, (dl, &vl), (dr, &vr))
            .map_err(py_err)?;
        Ok(self.module.render_element(&prod))
    }

    /// Exactness witness for the lifted product, rendered.
    fn gamma_witness(&self, left: &str, right: &str) -> PyResult<String> {
        let (dl, vl) = self.resolve(left)?;
        let (dr, vr) = self.resolve(right)?;
        let g = gamma_core(&self.module, &self.mm, (dl, &vl), (dr, &vr)).map_err(py_err)?;
        Ok(self.module.render_element(&g))
    }

    /// Serialize the datum back to the JSON file format.
    fn to_json(&self) -> String {
        hbmodel_core::io::datum_to_json(self.module.datum(), Some(self.module.cap()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Workbench(source={:?}, cap={}, dhb_is_zero={})",
            self.source,
            self.module.cap(),
            self.mm.dhb_is_zero
        )
    }
}

impl Workbench {
    fn resolve(&self, label: &str) -> PyResult<(usize, Vec<Rat>)> {
        let c = &self.module.datum().complex;
        let (deg, idx) = c
            .find_label(label)
            .ok_or_else(|| PyValueError::new_err(format!("unknown basis label {label:?}")))?;
        let mut v = vec![Rat::from_integer(0.into()); c.dim(deg)];
        v[idx] = Rat::from_integer(1.into());
        let projected = self.module.hodge().harmonic_projector[deg].mul_vec(&v);
        if projected != v {
            return Err(py_err(Error::NotHarmonic {
                label: label.to_string(),
                degree: deg,
            }));
        }
        Ok((deg, v))
    }
}

/// Shipped fixture names with one-line descriptions.
#[pyfunction]
fn list_fixtures() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = fixtures::FIXTURES
        .iter()
        .map(|(n, d)| (n.to_string(), d.to_string()))
        .collect();
    let (n, d) = fixtures::BROKEN_FIXTURE;
    out.push((n.to_string(), d.to_string()));
    out
}

/// Serialize a shipped fixture to the datum file format.
#[pyfunction]
fn fixture_json(name: &str) -> PyResult<String> {
    let datum = fixtures::fixture(name).map_err(py_err)?;
    Ok(hbmodel_core::io::datum_to_json(&datum, Some(10)))
}

fn parse_mu(mu: Vec<String>) -> PyResult<Vec<Rat>> {
    mu.iter()
        .map(|s| parse_rat(s).map_err(py_err))
        .collect()
}

/// Ring-presentation coefficients `c_1..c_{n+1}` from moment values.
#[pyfunction]
fn cpn_coefficients(mu: Vec<String>) -> PyResult<Vec<String>> {
    let mu = parse_mu(mu)?;
    let data = FixedPointData::isolated(&mu).map_err(py_err)?;
    let coeffs = hbmodel_core::fixed_point::coefficients_from_moments(&data).map_err(py_err)?;
    Ok(coeffs.0.iter().map(fmt_rat).collect())
}

/// Full verification report for a moment-value datum, as text.
#[pyfunction]
#[pyo3(signature = (mu, euler = None, jmax = 8))]
fn cpn_report(mu: Vec<String>, euler: Option<Vec<String>>, jmax: usize) -> PyResult<String> {
    let mu = parse_mu(mu)?;
    let data = match euler {
        Some(e) => {
            let eps = parse_mu(e)?;
            FixedPointData::isolated_with_euler(&mu, &eps).map_err(py_err)?
        }
        None => FixedPointData::isolated(&mu).map_err(py_err)?,
    };
    Ok(relation_report(&data, jmax).map_err(py_err)?.render())
}

/// The weighted projective-plane example; returns a dict with the moment
/// values, Euler numbers, volume, coefficients and the ring relation.
#[pyfunction]
fn cp2_weighted(py: Python<'_>, a: i64, b: i64, s: &str) -> PyResult<Py<PyDict>> {
    let scale = parse_rat(s).map_err(py_err)?;
    let rep = cp2_core(a, b, &scale).map_err(py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("a", a)?;
    dict.set_item("b", b)?;
    dict.set_item("s", fmt_rat(&rep.scale))?;
    dict.set_item("mu", rep.mu.iter().map(fmt_rat).collect::<Vec<_>>())?;
    dict.set_item("euler", rep.euler.iter().map(fmt_rat).collect::<Vec<_>>())?;
    dict.set_item("volume", fmt_rat(&rep.volume))?;
    dict.set_item(
        "coefficients",
        rep.coeffs.0.iter().map(fmt_rat).collect::<Vec<_>>(),
    )?;
    dict.set_item("relation", rep.relation)?;
    Ok(dict.into())
}

#[pymodule]
fn hbmodel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Workbench>()?;
    m.add_function(wrap_pyfunction!(list_fixtures, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_json, m)?)?;
    m.add_function(wrap_pyfunction!(cpn_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(cpn_report, m)?)?;
    m.add_function(wrap_pyfunction!(cp2_weighted, m)?)?;
    Ok(())
}
