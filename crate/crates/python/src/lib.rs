//! Python bindings: frames, polynomials, wave packets and Wigner functions.
//!
//! Matrices cross the boundary as nested lists of complex numbers, points as
//! lists of floats.

use hagedorn::linalg::CMatrix;
use hagedorn::phasespace::{self, OscillatoryQuadrature, PhaseSpaceQuadrature};
use hagedorn::polys::{self, MultiIndex};
use hagedorn::verify::{self, Suite};
use hagedorn::wavepackets::{self, QuadratureSpec};
use hagedorn::{fixtures, frames, io, random, FramePair, GridJob, LagrangianFrame, WavePacketSpec, WignerSpec};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

pyo3::create_exception!(hagedorn_py, HagedornError, PyValueError);

fn err(e: hagedorn::Error) -> PyErr {
    HagedornError::new_err(e.to_string())
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("matrix rows differ in length"));
    }
    Ok(CMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn index(k: Vec<u32>) -> MultiIndex {
    MultiIndex::new(k)
}

fn pair(z: &Frame, y: Option<PyRef<'_, Frame>>) -> PyResult<FramePair> {
    match y {
        Some(y) => FramePair::new(z.0.clone(), y.0.clone()).map_err(err),
        None => Ok(FramePair::diagonal(z.0.clone())),
    }
}

fn grid(lower: Vec<f64>, upper: Vec<f64>, points: Vec<usize>) -> PyResult<GridJob> {
    GridJob::new(lower, upper, points).map_err(err)
}

/// A normalised Lagrangian frame `Z = (Q; P)`.
#[pyclass(name = "Frame", module = "hagedorn_py", frozen)]
struct Frame(LagrangianFrame);

#[pymethods]
impl Frame {
    #[new]
    fn new(q: Vec<Vec<Complex64>>, p: Vec<Vec<Complex64>>) -> PyResult<Self> {
        LagrangianFrame::new(matrix(q)?, matrix(p)?).map(Frame).map_err(err)
    }

    #[staticmethod]
    fn standard(d: usize) -> Self {
        Frame(LagrangianFrame::standard(d))
    }

    /// One of the named frames `Z1`, `Z2`, `Z3`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        fixtures::frame(name)
            .map(Frame)
            .ok_or_else(|| PyValueError::new_err(format!("unknown fixture {name}")))
    }

    #[staticmethod]
    #[pyo3(signature = (d, seed = 1))]
    fn random(d: usize, seed: u64) -> Self {
        Frame(random::random_frame(&mut random::seeded(seed), d))
    }

    /// Parse the `{"Q": ..., "P": ...}` JSON layout used by the command line tool.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_frame(text).and_then(|f| f.to_frame()).map(Frame).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn q(&self) -> Vec<Vec<Complex64>> {
        rows(self.0.q())
    }

    #[getter]
    fn p(&self) -> Vec<Vec<Complex64>> {
        rows(self.0.p())
    }

    fn residuals<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.0.residuals();
        let out = PyDict::new(py);
        out.set_item("isotropy", r.isotropy)?;
        out.set_item("normalisation", r.normalisation)?;
        Ok(out)
    }

    /// The real symplectic metric `G_Z`.
    fn metric(&self) -> Vec<Vec<f64>> {
        let g = frames::symplectic_metric(&self.0);
        g.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    /// `Q^{-1} Q̄`, the recursion matrix of the standard packets.
    fn mixing_matrix(&self) -> Vec<Vec<Complex64>> {
        rows(&self.0.mixing_matrix())
    }

    /// The phase-space frame `(𝒬; 𝒫)` of doubled dimension.
    fn lift(&self) -> PyResult<Frame> {
        phasespace::lift_frame(&self.0).map(|l| Frame(l.frame().clone())).map_err(err)
    }

    fn lift_residuals<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = phasespace::lift_frame(&self.0).map_err(err)?.residuals();
        let out = PyDict::new(py);
        out.set_item("isotropy", r.isotropy)?;
        out.set_item("normalisation", r.normalisation)?;
        out.set_item("metric", r.metric)?;
        out.set_item("inverse", r.inverse)?;
        out.set_item("exchange", r.exchange)?;
        Ok(out)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&io::FrameJson::from_frame(&self.0)).expect("frame serialises")
    }

    fn __repr__(&self) -> String {
        format!("Frame(dim={})", self.0.dim())
    }
}

/// A multivariate complex polynomial.
#[pyclass(name = "Polynomial", module = "hagedorn_py", frozen)]
struct Polynomial(polys::Polynomial);

#[pymethods]
impl Polynomial {
    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn degree(&self) -> Option<u32> {
        self.0.degree()
    }

    /// `(exponent, coefficient)` pairs in graded order.
    fn terms(&self) -> Vec<(Vec<u32>, Complex64)> {
        self.0.terms().map(|(k, c)| (k.entries().to_vec(), *c)).collect()
    }

    fn coeff(&self, k: Vec<u32>) -> Complex64 {
        self.0.coeff(&index(k))
    }

    fn __call__(&self, x: Vec<Complex64>) -> PyResult<Complex64> {
        self.0.evaluate(&x).map_err(err)
    }

    /// Largest coefficient difference relative to the larger of the two polynomials.
    fn rel_diff(&self, other: PyRef<'_, Polynomial>) -> f64 {
        self.0.rel_diff(&other.0)
    }

    fn to_json(&self) -> String {
        io::polynomial_to_json(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial(dim={}, terms={})", self.0.dim(), self.0.len())
    }
}

/// `q_k^M` from the three-term recurrence.
#[pyfunction]
fn ttrr(m: Vec<Vec<Complex64>>, k: Vec<u32>) -> PyResult<Polynomial> {
    let k = index(k);
    let table = polys::ttrr_generate(&matrix(m)?, &k).map_err(err)?;
    Ok(Polynomial(table.into_polynomial(&k).expect("table contains its corner")))
}

/// Every `q_k^M` with `k ≤ kmax` componentwise, as `(k, polynomial)` pairs.
#[pyfunction]
fn ttrr_table(m: Vec<Vec<Complex64>>, kmax: Vec<u32>) -> PyResult<Vec<(Vec<u32>, Polynomial)>> {
    let table = polys::ttrr_generate(&matrix(m)?, &index(kmax)).map_err(err)?;
    Ok(table.iter().map(|(k, q)| (k.entries().to_vec(), Polynomial(q.clone()))).collect())
}

/// `q_k^M` as a Taylor coefficient of the generating function.
#[pyfunction]
fn genfunc(m: Vec<Vec<Complex64>>, k: Vec<u32>) -> PyResult<Polynomial> {
    polys::genfunc_coefficient(&matrix(m)?, &index(k)).map(Polynomial).map_err(err)
}

/// `q_k^M` from the tensor expansion of Hermite polynomials.
#[pyfunction]
fn tensor(m: Vec<Vec<Complex64>>, k: Vec<u32>) -> PyResult<Polynomial> {
    polys::tensor_expand(&matrix(m)?, &index(k)).map(Polynomial).map_err(err)
}

/// `q_k^M` through its Laguerre form when `M` couples only axes `n` and `mm`.
#[pyfunction]
fn laguerre(m: Vec<Vec<Complex64>>, k: Vec<u32>, n: usize, mm: usize) -> PyResult<Polynomial> {
    polys::laguerre_reduce(&matrix(m)?, &index(k), n, mm).map(Polynomial).map_err(err)
}

#[pyfunction]
fn overlap_matrix(z: PyRef<'_, Frame>, y: PyRef<'_, Frame>) -> PyResult<Vec<Vec<Complex64>>> {
    frames::overlap_matrix(&z.0, &y.0).map(|b| rows(&b)).map_err(err)
}

#[pyfunction]
fn recursion_matrix(z: PyRef<'_, Frame>, y: PyRef<'_, Frame>) -> PyResult<Vec<Vec<Complex64>>> {
    frames::recursion_matrix(&z.0, &y.0).map(|m| rows(&m)).map_err(err)
}

/// The packet `φ_k^ε[Z, Y]` centred at `(q0, p0)`.
#[pyclass(name = "WavePacket", module = "hagedorn_py", frozen)]
struct WavePacket(WavePacketSpec);

#[pymethods]
impl WavePacket {
    #[new]
    #[pyo3(signature = (z, k, eps = wavepackets::DEFAULT_EPS, y = None, center = None))]
    fn new(
        z: PyRef<'_, Frame>,
        k: Vec<u32>,
        eps: f64,
        y: Option<PyRef<'_, Frame>>,
        center: Option<Vec<f64>>,
    ) -> PyResult<Self> {
        let spec = WavePacketSpec::new(pair(&z, y)?, index(k), eps).map_err(err)?;
        match center {
            Some(z0) => wavepackets::translate(&spec, &z0).map(WavePacket).map_err(err),
            None => Ok(WavePacket(spec)),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn eps(&self) -> f64 {
        self.0.eps()
    }

    #[getter]
    fn k(&self) -> Vec<u32> {
        self.0.k().entries().to_vec()
    }

    /// The normalised prefactor polynomial in `x`.
    fn prefactor(&self) -> PyResult<Polynomial> {
        let x = self.0.scaled_prefactor().compose_linear(self.0.argument_map()).map_err(err)?;
        Ok(Polynomial(x))
    }

    fn __call__(&self, x: Vec<f64>) -> PyResult<Complex64> {
        self.0.eval(&x).map_err(err)
    }

    /// Values on an equispaced grid, first axis slowest.
    fn grid(&self, py: Python<'_>, lower: Vec<f64>, upper: Vec<f64>, points: Vec<usize>) -> PyResult<Vec<Complex64>> {
        let job = grid(lower, upper, points)?;
        let done = py.detach(|| wavepackets::grid_eval(&self.0, job)).map_err(err)?;
        Ok(done.values)
    }

    /// `⟨self, other⟩` by tensor Gauss–Legendre quadrature.
    #[pyo3(signature = (other, nodes = None))]
    fn inner(&self, py: Python<'_>, other: PyRef<'_, WavePacket>, nodes: Option<usize>) -> PyResult<Complex64> {
        let mut quad = QuadratureSpec::default();
        if let Some(n) = nodes {
            quad.nodes = n;
        }
        let other = &other.0;
        py.detach(|| wavepackets::inner_product(&self.0, other, &quad)).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("WavePacket(k={}, eps={})", self.0.k(), self.0.eps())
    }
}

/// The Wigner function `W(φ_k, φ_l)` of two packets over the pair `(Z, Y)`.
#[pyclass(name = "Wigner", module = "hagedorn_py", frozen)]
struct Wigner(WignerSpec);

#[pymethods]
impl Wigner {
    #[new]
    #[pyo3(signature = (z, k, l, eps = wavepackets::DEFAULT_EPS, y = None, center = None))]
    fn new(
        z: PyRef<'_, Frame>,
        k: Vec<u32>,
        l: Vec<u32>,
        eps: f64,
        y: Option<PyRef<'_, Frame>>,
        center: Option<Vec<f64>>,
    ) -> PyResult<Self> {
        let spec = WignerSpec::new(pair(&z, y)?, index(k), index(l), eps).map_err(err)?;
        match center {
            Some(z0) => spec.with_center(&z0).map(Wigner).map_err(err),
            None => Ok(Wigner(spec)),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Closed form as a lifted packet on phase space.
    fn __call__(&self, z: Vec<f64>) -> PyResult<Complex64> {
        phasespace::wigner_closed(&self.0, &z).map_err(err)
    }

    /// The defining integral over `y`, evaluated by quadrature (`d ≤ 2`, centred at the origin).
    fn quadrature(&self, py: Python<'_>, z: Vec<f64>) -> PyResult<Complex64> {
        let spec = &self.0;
        let pair = spec.pair();
        let quad = OscillatoryQuadrature::default();
        py.detach(|| phasespace::wigner_quadrature(pair.z(), pair.y(), spec.k(), spec.l(), spec.eps(), &z, &quad))
            .map_err(err)
    }

    /// Product of Laguerre factors, only for `Y = Z`.
    fn factorized(&self, z: Vec<f64>) -> PyResult<Complex64> {
        let spec = &self.0;
        let shifted: Vec<f64> = z.iter().zip(spec.center()).map(|(a, b)| a - b).collect();
        phasespace::wigner_factorized(spec.pair(), spec.k(), spec.l(), spec.eps(), &shifted).map_err(err)
    }

    /// `∫ W dz` over phase space (`d ≤ 2`).
    fn integral(&self, py: Python<'_>) -> PyResult<Complex64> {
        let quad = PhaseSpaceQuadrature::default();
        py.detach(|| phasespace::wigner_integral(&self.0, &quad)).map_err(err)
    }

    fn grid(&self, py: Python<'_>, lower: Vec<f64>, upper: Vec<f64>, points: Vec<usize>) -> PyResult<Vec<Complex64>> {
        let job = grid(lower, upper, points)?;
        let done = py.detach(|| phasespace::wigner_grid(&self.0, job)).map_err(err)?;
        Ok(done.values)
    }

    fn __repr__(&self) -> String {
        format!("Wigner(k={}, l={}, eps={})", self.0.k(), self.0.l(), self.0.eps())
    }
}

/// Run a verification suite and return its report as JSON.
#[pyfunction]
#[pyo3(signature = (scope = "all", seed = 1))]
fn run_verify(py: Python<'_>, scope: &str, seed: u64) -> PyResult<String> {
    let suite: Suite = scope.parse().map_err(|e: hagedorn::Error| PyValueError::new_err(e.to_string()))?;
    Ok(py.detach(|| verify::run(suite, seed)).to_json())
}

#[pymodule]
fn hagedorn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HagedornError", m.py().get_type::<HagedornError>())?;
    m.add_class::<Frame>()?;
    m.add_class::<Polynomial>()?;
    m.add_class::<WavePacket>()?;
    m.add_class::<Wigner>()?;
    m.add_function(wrap_pyfunction!(ttrr, m)?)?;
    m.add_function(wrap_pyfunction!(ttrr_table, m)?)?;
    m.add_function(wrap_pyfunction!(genfunc, m)?)?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(overlap_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(recursion_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
