//! Python bindings: maps, move paths, block complexes, bounds and the
//! irreducibility certificate.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use panto::blocks::{self, link_components};
use panto::bounds::{evaluate_bounds, HyperbolicConstants};
use panto::certify::Separation;
use panto::end_periodic::{boundary_complexity as boundary_xi, phi_star_norm as phi_norm, EndBehavior, EndPeriodicMap};
use panto::examples;
use panto::moves::MovePath;
use panto::schema::{self, CertificateSection, MapFile};
use panto::{Slope, SurfaceSig};

fn err(e: panto::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn slope(s: &str) -> PyResult<Slope> {
    s.parse::<Slope>().map_err(err)
}

#[pyfunction]
fn complexity(genus: u32, boundary: u32) -> i64 {
    panto::complexity(SurfaceSig::new(genus, boundary))
}

#[pyfunction]
fn farey_distance(a: &str, b: &str) -> PyResult<u32> {
    Ok(panto::farey::farey_distance(slope(a)?, slope(b)?))
}

#[pyfunction]
fn phi_star_norm(w: Vec<i64>) -> PyResult<u64> {
    phi_norm(&EndBehavior::from_w(&w)).map_err(err)
}

/// `(xi(S+), xi(S-), total)` for the end behavior `w`.
#[pyfunction]
fn boundary_complexity(w: Vec<i64>) -> PyResult<(u64, u64, u64)> {
    let b = boundary_xi(&EndBehavior::from_w(&w)).map_err(err)?;
    Ok((b.s_plus, b.s_minus, b.total))
}

/// `(V_oct, V_tet)`.
#[pyfunction]
#[pyo3(signature = (precision = 15))]
fn constants(precision: u32) -> (f64, f64) {
    let c = HyperbolicConstants::compute(precision);
    (c.v_oct, c.v_tet)
}

#[pyclass(name = "Path", module = "panto_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPath {
    inner: MovePath,
}

#[pymethods]
impl PyPath {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPath { inner: schema::parse_path(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        schema::path_to_json(&self.inner)
    }

    #[getter]
    fn weight(&self) -> u64 {
        self.inner.weight()
    }

    #[getter]
    fn n_t(&self) -> usize {
        self.inner.n_t()
    }

    #[getter]
    fn n_s(&self) -> usize {
        self.inner.n_s()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Path(len={}, weight={})", self.inner.len(), self.inner.weight())
    }
}

#[pyclass(name = "BlockComplex", module = "panto_py", frozen)]
struct PyBlockComplex {
    inner: blocks::BlockComplex,
}

#[pymethods]
impl PyBlockComplex {
    #[getter]
    fn blocks(&self) -> usize {
        self.inner.blocks.len()
    }

    #[getter]
    fn link_components(&self) -> usize {
        link_components(&self.inner)
    }

    #[getter]
    fn boundary_curves(&self) -> usize {
        self.inner.boundary_pants.curve_count()
    }

    #[getter]
    fn voct_coeff(&self) -> u64 {
        blocks::drilled_volume(&self.inner, &HyperbolicConstants::default()).voct_coeff
    }

    fn gluing(&self) -> String {
        blocks::export_gluing(&self.inner)
    }

    fn dot(&self) -> String {
        blocks::emit_dot(&self.inner)
    }
}

#[pyclass(name = "Map", module = "panto_py", frozen)]
struct PyMap {
    inner: EndPeriodicMap,
    certificate: Option<CertificateSection>,
}

#[pymethods]
impl PyMap {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = schema::parse_map(text).map_err(err)?;
        Ok(PyMap { inner: doc.to_map().map_err(err)?, certificate: doc.certificate })
    }

    /// `fenley`, `laddershift`, `certificate`, `sharp` or `reducible`.
    #[staticmethod]
    #[pyo3(signature = (name, k = 1))]
    fn example(name: &str, k: u32) -> PyResult<Self> {
        let (inner, certificate) = match name {
            "fenley" => {
                let placed = examples::fenley_placed().map_err(err)?;
                let cert = examples::certificate_support(&placed, placed.hosts.len() - 1, Separation::FullySeparating);
                (placed.map, Some(cert.map_err(err)?))
            }
            "laddershift" => (examples::laddershift(k, 2).map_err(err)?, None),
            "certificate" => {
                let placed = examples::certificate_demo(k).map_err(err)?;
                let cert = examples::certificate_support(&placed, 0, Separation::FullySeparating).map_err(err)?;
                (placed.map, Some(cert))
            }
            "sharp" => {
                let (base, _) = examples::sharp_base().map_err(err)?;
                let cert = examples::certificate_support(&base, 0, Separation::FullySeparating).map_err(err)?;
                (examples::sharp(k).map_err(err)?.0, Some(cert))
            }
            "reducible" => (examples::reducible().map_err(err)?, None),
            other => return Err(PyValueError::new_err(format!("unknown example {other:?}"))),
        };
        Ok(PyMap { inner, certificate })
    }

    fn to_json(&self) -> String {
        schema::map_to_json(&MapFile::from_map(&self.inner, self.certificate.clone()))
    }

    fn phi_star_norm(&self) -> PyResult<u64> {
        self.inner.phi_star_norm().map_err(err)
    }

    fn power(&self, n: u32) -> PyResult<PyMap> {
        Ok(PyMap { inner: self.inner.power(n).map_err(err)?, certificate: None })
    }

    fn canonical_path(&self) -> PyResult<PyPath> {
        Ok(PyPath { inner: self.inner.canonical_path().map_err(err)? })
    }

    #[pyo3(signature = (path = None))]
    fn build_blocks(&self, path: Option<&PyPath>) -> PyResult<PyBlockComplex> {
        let p = match path {
            Some(p) => p.inner.clone(),
            None => self.inner.canonical_path().map_err(err)?,
        };
        Ok(PyBlockComplex { inner: blocks::build_blocks(&self.inner, &p).map_err(err)? })
    }

    /// Bounds report as JSON text.
    #[pyo3(signature = (path = None, power = 1, precision = 15))]
    fn bounds(&self, path: Option<&PyPath>, power: u32, precision: u32) -> PyResult<String> {
        let p = match path {
            Some(p) => p.inner.clone(),
            None => self.inner.power(power).and_then(|g| g.canonical_path()).map_err(err)?,
        };
        let report = evaluate_bounds(&self.inner, &[(p, power)], &HyperbolicConstants::compute(precision)).map_err(err)?;
        Ok(report.to_json().to_string())
    }

    /// `(classification, distance)`; the map must carry a certificate section.
    fn certify(&self) -> PyResult<(String, String)> {
        let c = self
            .certificate
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("map has no certificate section"))?;
        let cert = panto::certify::certify(&self.inner, &c.support, &c.eta, &c.alpha).map_err(err)?;
        Ok((cert.classification.to_string(), cert.distance.to_string()))
    }
}

#[pymodule]
fn panto_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(complexity, m)?)?;
    m.add_function(wrap_pyfunction!(farey_distance, m)?)?;
    m.add_function(wrap_pyfunction!(phi_star_norm, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_class::<PyMap>()?;
    m.add_class::<PyPath>()?;
    m.add_class::<PyBlockComplex>()?;
    Ok(())
}
