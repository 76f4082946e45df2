//! Generalised Hagedorn wave packets `φ_k^ε[Z, Y]` in position space.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{FramePair, LagrangianFrame};
use crate::linalg::{self, c, CMatrix, I};
use crate::polys::{ttrr_generate, MultiIndex, Polynomial};
use crate::quadrature::TensorRule;

pub const DEFAULT_EPS: f64 = 0.1;
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// Choice of the square root in the factor `det(Q)^{-1/2}` of the ground state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DetRoot {
    /// Principal branch of `det(Q)^{1/2}`.
    #[default]
    Principal,
    /// The other branch, `-det(Q)^{1/2}`.
    Flipped,
    /// `|det(Q)|^{1/2}`, dropping the phase entirely.
    Modulus,
}

impl DetRoot {
    fn root(self, q: &CMatrix) -> Complex64 {
        let s = linalg::principal_sqrt_det(q);
        match self {
            DetRoot::Principal => s,
            DetRoot::Flipped => -s,
            DetRoot::Modulus => c(s.norm(), 0.0),
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("ε must be positive, got {eps}")))
    }
}

/// `x^T A x` for real `x`.
fn quadratic_form(a: &CMatrix, x: &[f64]) -> Complex64 {
    let mut s = Complex64::default();
    for i in 0..x.len() {
        for j in 0..x.len() {
            s += a[(i, j)] * (x[i] * x[j]);
        }
    }
    s
}

/// `φ_0^ε[Z](x) = (πε)^{-d/4} det(Q)^{-1/2} exp(i/(2ε) x^T P Q^{-1} x)`.
pub fn ground_state(z: &LagrangianFrame, eps: f64, x: &[f64]) -> Result<Complex64> {
    check_eps(eps)?;
    if x.len() != z.dim() {
        return Err(Error::DimensionMismatch { expected: z.dim(), found: x.len() });
    }
    let d = z.dim() as f64;
    let pref = (PI * eps).powf(-d / 4.0) / DetRoot::Principal.root(z.q());
    Ok(pref * (I * quadratic_form(&z.width(), x) / (2.0 * eps)).exp())
}

/// A fully specified wave packet with everything needed for pointwise
/// evaluation precomputed.
#[derive(Debug, Clone)]
pub struct WavePacketSpec {
    pair: FramePair,
    k: MultiIndex,
    eps: f64,
    center: Vec<f64>,
    branch: DetRoot,
    width: CMatrix,
    argument: CMatrix,
    poly: Polynomial,
    ground_prefactor: Complex64,
}

impl WavePacketSpec {
    pub fn new(pair: FramePair, k: MultiIndex, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        let d = pair.dim();
        if k.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: k.dim() });
        }
        let poly = ttrr_generate(pair.m(), &k)?
            .into_polynomial(&k)
            .expect("table contains its upper corner");
        let argument = pair.b().adjoint() * pair.z().q_inv() * c(1.0 / eps.sqrt(), 0.0);
        // 1/√(2^{|k|} k!) in log space
        let ln_norm = -0.5 * (f64::from(k.total()) * 2f64.ln() + k.ln_factorial());
        let mut spec = WavePacketSpec {
            width: pair.z().width(),
            pair,
            k,
            eps,
            center: vec![0.0; 2 * d],
            branch: DetRoot::Principal,
            argument,
            poly: poly.scale(c(ln_norm.exp(), 0.0)),
            ground_prefactor: Complex64::default(),
        };
        spec.set_branch(DetRoot::Principal);
        Ok(spec)
    }

    /// The standard packet `φ_k^ε[Z] = φ_k^ε[Z, Z]`.
    pub fn standard(z: LagrangianFrame, k: MultiIndex, eps: f64) -> Result<Self> {
        Self::new(FramePair::diagonal(z), k, eps)
    }

    fn set_branch(&mut self, branch: DetRoot) {
        let d = self.dim() as f64;
        self.branch = branch;
        self.ground_prefactor = (PI * self.eps).powf(-d / 4.0) / branch.root(self.pair.z().q());
    }

    pub fn with_branch(mut self, branch: DetRoot) -> Self {
        self.set_branch(branch);
        self
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    pub fn pair(&self) -> &FramePair {
        &self.pair
    }

    pub fn k(&self) -> &MultiIndex {
        &self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn branch(&self) -> DetRoot {
        self.branch
    }

    /// The normalised prefactor `x ↦ q_k^M(B^* Q^{-1} x / √ε) / √(2^{|k|} k!)`
    /// in the scaled variable `B^* Q^{-1} x / √ε`.
    pub fn scaled_prefactor(&self) -> &Polynomial {
        &self.poly
    }

    /// `B^* Q^{-1} / √ε`.
    pub fn argument_map(&self) -> &CMatrix {
        &self.argument
    }

    /// Value of the packet centred at the origin.
    fn eval_centred(&self, x: &[f64]) -> Complex64 {
        let y = linalg::mat_vec_real(&self.argument, x);
        let gauss = (I * quadratic_form(&self.width, x) / (2.0 * self.eps)).exp();
        self.poly.evaluate_unchecked(&y) * self.ground_prefactor * gauss
    }

    /// `φ_k^ε[Z, Y]` translated by the Heisenberg–Weyl operator to the centre.
    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> Complex64 {
        let d = self.dim();
        let (q0, p0) = self.center.split_at(d);
        if q0.iter().chain(p0).all(|&v| v == 0.0) {
            return self.eval_centred(x);
        }
        let shifted: Vec<f64> = x.iter().zip(q0).map(|(a, b)| a - b).collect();
        let phase: f64 = p0.iter().zip(x.iter().zip(q0)).map(|(p, (x, q))| p * (x - q / 2.0)).sum();
        (I * phase / self.eps).exp() * self.eval_centred(&shifted)
    }
}

/// Pointwise value of `φ_k^ε[Z, Y](x)`, including any translation.
pub fn excited_state(spec: &WavePacketSpec, x: &[f64]) -> Result<Complex64> {
    spec.eval(x)
}

/// Returns the packet moved to phase-space centre `z0 = (q0, p0)`.
pub fn translate(spec: &WavePacketSpec, z0: &[f64]) -> Result<WavePacketSpec> {
    if z0.len() != 2 * spec.dim() {
        return Err(Error::DimensionMismatch { expected: 2 * spec.dim(), found: z0.len() });
    }
    if z0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite centre".into()));
    }
    let mut out = spec.clone();
    out.center = z0.to_vec();
    Ok(out)
}

/// The polynomial prefactor `p` with `φ_k^ε[Z, Y] = p · φ_0^ε[Z]`, built by
/// applying the raising operator `A^†[Y] = (i/√(2ε)) Y^* Ω ẑ` to `φ_0` directly.
///
/// On `p φ_0` the operator acts on the prefactor as
/// `p ↦ (i/√(2ε)) [(K^* - X^* P Q^{-1}) x p + iε X^* ∇p]`.
/// Neither the overlap matrix `B` nor the recursion matrix `M` enters.
pub fn prefactor_by_operator(
    z: &LagrangianFrame,
    y: &LagrangianFrame,
    k: &MultiIndex,
    eps: f64,
) -> Result<Polynomial> {
    check_eps(eps)?;
    let d = z.dim();
    if y.dim() != d || k.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: y.dim().min(k.dim()) });
    }
    let x_adj = y.q().adjoint();
    let linear = y.p().adjoint() - &x_adj * z.width();
    let outer = I / (2.0 * eps).sqrt();
    let apply = |p: &Polynomial, j: usize| -> Polynomial {
        let mut out = Polynomial::zero(d);
        for i in 0..d {
            out.add_scaled(&p.mul_var(i), linear[(j, i)] * outer);
            out.add_scaled(&p.derivative(i), x_adj[(j, i)] * I * eps * outer);
        }
        out
    };
    let mut p = Polynomial::one(d);
    for j in 0..d {
        for _ in 0..k.get(j) {
            p = apply(&p, j);
        }
    }
    Ok(p.scale(c((-0.5 * k.ln_factorial()).exp(), 0.0)))
}

/// Settings for tensor Gauss–Legendre quadrature of packet overlaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    /// Box half-width in units of `√(ε λ_max(QQ^*))`, before the degree factor.
    pub width: f64,
    pub tail_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { nodes: 150, width: 8.0, tail_tolerance: 1e-12 }
    }
}

fn packet_box(spec: &WavePacketSpec, degree: u32, width: f64) -> (Vec<f64>, Vec<f64>) {
    let d = spec.dim();
    let q = spec.pair().z().q();
    let sigma = (spec.eps() * linalg::hermitian_max_eigenvalue(&(q * q.adjoint()))).sqrt();
    let half = width * sigma * (1.0 + f64::from(degree) / 4.0);
    let centre = &spec.center()[..d];
    (
        centre.iter().map(|c| c - half).collect(),
        centre.iter().map(|c| c + half).collect(),
    )
}

/// Largest integrand magnitude over the box corners and face centres,
/// times the box volume.
pub(crate) fn boundary_tail<F: Fn(&[f64]) -> f64>(lower: &[f64], upper: &[f64], f: F) -> f64 {
    let d = lower.len();
    let volume: f64 = lower.iter().zip(upper).map(|(a, b)| b - a).product();
    let mid: Vec<f64> = lower.iter().zip(upper).map(|(a, b)| 0.5 * (a + b)).collect();
    let mut worst = 0.0f64;
    for code in 0..3usize.pow(d as u32) {
        let mut x = mid.clone();
        let mut rest = code;
        let mut on_boundary = false;
        for axis in 0..d {
            match rest % 3 {
                1 => {
                    x[axis] = lower[axis];
                    on_boundary = true;
                }
                2 => {
                    x[axis] = upper[axis];
                    on_boundary = true;
                }
                _ => {}
            }
            rest /= 3;
        }
        if on_boundary {
            worst = worst.max(f(&x));
        }
    }
    worst * volume
}

/// `⟨a, b⟩ = ∫ conj(a) b dx` by tensor Gauss–Legendre quadrature.
pub fn inner_product(a: &WavePacketSpec, b: &WavePacketSpec, quad: &QuadratureSpec) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if a.eps() != b.eps() || a.center() != b.center() {
        return Err(Error::InvalidInput("packets must share ε and centre".into()));
    }
    let degree = a.k().total().max(b.k().total());
    let (lower, upper) = packet_box(a, degree, quad.width);
    let (lb, ub) = packet_box(b, degree, quad.width);
    let lower: Vec<f64> = lower.iter().zip(&lb).map(|(x, y)| x.min(*y)).collect();
    let upper: Vec<f64> = upper.iter().zip(&ub).map(|(x, y)| x.max(*y)).collect();
    let integrand = |x: &[f64]| a.eval_unchecked(x).conj() * b.eval_unchecked(x);
    let tail = boundary_tail(&lower, &upper, |x| integrand(x).norm());
    if tail > quad.tail_tolerance {
        return Err(Error::QuadratureUnderResolved { tail, tolerance: quad.tail_tolerance });
    }
    Ok(TensorRule::new(&lower, &upper, quad.nodes).integrate(integrand))
}

/// Gram matrix `⟨φ_i, φ_j⟩` of a family sharing ε and centre, with each
/// packet evaluated once per quadrature node.
pub fn gram_matrix(packets: &[WavePacketSpec], quad: &QuadratureSpec) -> Result<CMatrix> {
    let Some(first) = packets.first() else {
        return Ok(CMatrix::zeros(0, 0));
    };
    let d = first.dim();
    if packets.iter().any(|p| p.dim() != d || p.eps() != first.eps() || p.center() != first.center()) {
        return Err(Error::InvalidInput("packets must share dimension, ε and centre".into()));
    }
    let degree = packets.iter().map(|p| p.k().total()).max().unwrap_or(0);
    let mut lower = vec![f64::INFINITY; d];
    let mut upper = vec![f64::NEG_INFINITY; d];
    for p in packets {
        let (l, u) = packet_box(p, degree, quad.width);
        for a in 0..d {
            lower[a] = lower[a].min(l[a]);
            upper[a] = upper[a].max(u[a]);
        }
    }
    let n = packets.len();
    let tail = boundary_tail(&lower, &upper, |x| {
        packets.iter().map(|p| p.eval_unchecked(x).norm_sqr()).sum::<f64>()
    });
    if tail > quad.tail_tolerance {
        return Err(Error::QuadratureUnderResolved { tail, tolerance: quad.tail_tolerance });
    }
    let rule = TensorRule::new(&lower, &upper, quad.nodes);
    let outer = rule.axes[0].0.len();
    let inner = rule.len() / outer;
    let partial: Vec<CMatrix> = (0..outer)
        .into_par_iter()
        .map(|i| {
            let mut x = vec![0.0; d];
            let mut acc = CMatrix::zeros(n, n);
            let mut vals = vec![Complex64::default(); n];
            for j in 0..inner {
                let w = rule.point(i * inner + j, &mut x);
                for (v, p) in vals.iter_mut().zip(packets) {
                    *v = p.eval_unchecked(&x);
                }
                for r in 0..n {
                    let a = vals[r].conj() * w;
                    for s in 0..n {
                        acc[(r, s)] += a * vals[s];
                    }
                }
            }
            acc
        })
        .collect();
    Ok(partial.into_iter().fold(CMatrix::zeros(n, n), |a, b| a + b))
}

/// A rectangular evaluation grid with `points[i]` equispaced nodes per axis,
/// endpoints included. Values are stored row-major (first axis slowest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridJob {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub points: Vec<usize>,
    #[serde(skip)]
    pub values: Vec<Complex64>,
}

impl GridJob {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, points: Vec<usize>) -> Result<Self> {
        let job = GridJob { lower, upper, points, values: Vec::new() };
        job.validate()?;
        Ok(job)
    }

    /// `[lo, hi]^d` with `n` points per axis.
    pub fn cube(d: usize, lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new(vec![lo; d], vec![hi; d], vec![n; d])
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.lower.len();
        if d == 0 || self.upper.len() != d || self.points.len() != d {
            return Err(Error::InvalidGrid("bounds and resolution must have equal, non-zero length".into()));
        }
        for a in 0..d {
            if !(self.lower[a].is_finite() && self.upper[a].is_finite() && self.lower[a] < self.upper[a]) {
                return Err(Error::InvalidGrid(format!("axis {a}: need lower < upper")));
            }
            if self.points[a] == 0 {
                return Err(Error::InvalidGrid(format!("axis {a}: need at least one point")));
            }
        }
        let total = self
            .points
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .unwrap_or(usize::MAX);
        if total > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge(total));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axis_coordinate(&self, axis: usize, i: usize) -> f64 {
        let n = self.points[axis];
        if n == 1 {
            return 0.5 * (self.lower[axis] + self.upper[axis]);
        }
        self.lower[axis] + (self.upper[axis] - self.lower[axis]) * i as f64 / (n - 1) as f64
    }

    /// Coordinates of node `idx` in row-major order.
    pub fn node(&self, mut idx: usize) -> Vec<f64> {
        let d = self.dim();
        let mut x = vec![0.0; d];
        for axis in (0..d).rev() {
            let n = self.points[axis];
            x[axis] = self.axis_coordinate(axis, idx % n);
            idx /= n;
        }
        x
    }

    /// Fills `values` with `f` at every node; nodes are evaluated in parallel.
    pub fn fill<F: Fn(&[f64]) -> Complex64 + Sync>(mut self, f: F) -> Result<Self> {
        self.validate()?;
        let values: Vec<Complex64> = (0..self.len()).into_par_iter().map(|i| f(&self.node(i))).collect();
        self.values = values;
        Ok(self)
    }
}

/// Evaluates the packet on every grid node.
pub fn grid_eval(spec: &WavePacketSpec, job: GridJob) -> Result<GridJob> {
    if job.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: job.dim() });
    }
    job.fill(|x| spec.eval_unchecked(x))
}
