//! Python bindings: presentations, dimension queries, Ext and the CM dual,
//! local cohomology, and the verification commands returning JSON reports.

// The pymethods expansion inserts Into conversions on already-PyErr values.
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use gradual_core::cech::{gamma_star_stabilized, local_cohomology_stabilized, CapConfig};
use gradual_core::derham::dr_cohomology;
use gradual_core::dual::selfdual_scan;
use gradual_core::homology::{cm_check, cm_dual, ext_s, OmegaS};
use gradual_core::modfile::{load_presentation, ModuleFile};
use gradual_core::resolution::{free_resolution_default, minimalize};
use gradual_core::verify::{default_window, verify_derham, verify_duality, VerifyOptions};
use gradual_core::window::Window;
use gradual_core::{BiDegree, BigradedPresentation};

fn err(e: gradual_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finitely presented bigraded module over Q[x1..xm][t1..td].
#[pyclass]
#[derive(Clone)]
struct Presentation {
    inner: BigradedPresentation,
    digest: String,
}

impl Presentation {
    fn wrap(inner: BigradedPresentation) -> Self {
        let digest = ModuleFile::from_presentation(&inner, None).digest();
        Presentation { inner, digest }
    }
}

#[pymethods]
impl Presentation {
    /// Build from module-file JSON (same schema as the CLI input files).
    #[new]
    fn new(json: &str) -> PyResult<Self> {
        let (file, inner) = load_presentation(json).map_err(err)?;
        Ok(Presentation { inner, digest: file.digest() })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Presentation::new(&text)
    }

    /// The free module S with the given numbers of base and fiber variables.
    #[staticmethod]
    fn ring(base_vars: usize, fiber_vars: usize) -> Self {
        Presentation::wrap(BigradedPresentation::ring(gradual_core::RingSig::new(
            base_vars, fiber_vars,
        )))
    }

    fn signature(&self) -> (usize, usize) {
        let sig = self.inner.sig();
        (sig.base_vars, sig.fiber_vars)
    }

    fn dim(&self, x: i64, t: i64) -> usize {
        gradual_core::piece::dim(&self.inner, BiDegree::new(x, t))
    }

    /// Dimension table [(x, t, dim)] over an inclusive window.
    fn hilbert(&self, x0: i64, x1: i64, t0: i64, t1: i64) -> Vec<(i64, i64, usize)> {
        let window = Window::new(x0, x1, t0, t1);
        gradual_core::piece::dim_table(&self.inner, &window)
            .into_iter()
            .map(|(deg, d)| (deg.x, deg.t, d))
            .collect()
    }

    fn shift(&self, m: i64) -> Self {
        Presentation::wrap(self.inner.shift_t(m))
    }

    fn reverse(&self) -> Self {
        Presentation::wrap(self.inner.reverse())
    }

    fn direct_sum(&self, other: &Presentation) -> PyResult<Self> {
        Ok(Presentation::wrap(self.inner.direct_sum(&other.inner).map_err(err)?))
    }

    /// (is_cm, witness) where witness is (q, x, t) for the first nonzero
    /// off-diagonal Ext, or None.
    #[allow(clippy::type_complexity)]
    fn cm_check(&self) -> PyResult<(bool, Option<(usize, i64, i64)>)> {
        let report = cm_check(&self.inner).map_err(err)?;
        let witness = report
            .witness_q
            .map(|q| {
                let (x, t) = report.witness_bidegree.unwrap();
                (q, x, t)
            });
        Ok((report.is_cm, witness))
    }

    fn cm_dual(&self) -> PyResult<Self> {
        Ok(Presentation::wrap(cm_dual(&self.inner).map_err(err)?))
    }

    fn ext(&self, q: usize) -> PyResult<Self> {
        Ok(Presentation::wrap(ext_s(&self.inner, q, &OmegaS::standard()).map_err(err)?.module))
    }

    /// Betti table of the (optionally minimalized) free resolution, as JSON.
    fn betti(&self, minimal: bool) -> String {
        let res = free_resolution_default(&self.inner);
        let res = if minimal { minimalize(&res) } else { res };
        res.betti().to_json()
    }

    fn local_cohomology(&self, i: usize, x: i64, t: i64) -> PyResult<usize> {
        let (v, _) =
            local_cohomology_stabilized(&self.inner, i, BiDegree::new(x, t), &CapConfig::default())
                .map_err(err)?;
        Ok(v)
    }

    fn gamma_star(&self, q: usize, x: i64, t: i64) -> PyResult<usize> {
        let (v, _) =
            gamma_star_stabilized(&self.inner, q, BiDegree::new(x, t), &CapConfig::default())
                .map_err(err)?;
        Ok(v)
    }

    fn dr_cohomology(&self, j: i64, x: i64, t: i64) -> usize {
        dr_cohomology(&self.inner, j, BiDegree::new(x, t))
    }

    /// Self-duality scan over [w0, w1]; returns the report as JSON.
    fn selfdual_scan(&self, w0: i64, w1: i64) -> PyResult<String> {
        let window = default_window(&self.inner);
        let report = selfdual_scan(&self.inner, (w0, w1), &window).map_err(err)?;
        Ok(serde_json::to_string_pretty(&report).expect("serializable"))
    }

    /// Full duality verification; returns the JSON report.
    fn verify_duality(&self) -> PyResult<String> {
        let opts = VerifyOptions::default();
        let report = verify_duality(&self.inner, &self.digest, &opts).map_err(err)?;
        Ok(report.to_json())
    }

    /// De Rham verification battery; returns the JSON report.
    #[pyo3(signature = (weight=None))]
    fn verify_derham(&self, weight: Option<i64>) -> PyResult<String> {
        let opts = VerifyOptions::default();
        let report = verify_derham(&self.inner, &self.digest, &opts, weight).map_err(err)?;
        Ok(report.to_json())
    }

    /// Module-file JSON for this presentation.
    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModuleFile::from_presentation(&self.inner, None))
            .expect("serializable")
    }

    fn digest(&self) -> String {
        self.digest.clone()
    }

    fn __repr__(&self) -> String {
        let sig = self.inner.sig();
        format!(
            "Presentation(m={}, d={}, generators={}, relations={})",
            sig.base_vars,
            sig.fiber_vars,
            self.inner.generators().rank(),
            self.inner.relations().source.rank()
        )
    }
}

/// Parse a polynomial in the module-file grammar; raises on error, echoing
/// the canonical rendering on success.
#[pyfunction]
fn check_polynomial(text: &str, base_vars: usize, fiber_vars: usize) -> PyResult<String> {
    let sig = gradual_core::RingSig::new(base_vars, fiber_vars);
    let p = gradual_core::grammar::parse_polynomial(text, sig).map_err(err)?;
    Ok(gradual_core::grammar::render_polynomial(&p))
}

#[pymodule]
fn gradual(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Presentation>()?;
    m.add_function(wrap_pyfunction!(check_polynomial, m)?)?;
    Ok(())
}
