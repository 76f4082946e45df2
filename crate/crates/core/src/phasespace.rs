//! Wigner transforms of Hagedorn wave packets.
//!
//! The Wigner function `W(φ_k[Z,Y], φ_ℓ[Z,Y])` on `R^{2d}` is itself a
//! Hagedorn wave packet of index `(k, ℓ)` for the lifted frames
//!
//! ```text
//! 𝒵 = ( ½ Z̄   ½ Z )      𝒴 = ( ½ Ȳ   ½ Y )
//!     ( Ω Z̄  -Ω Z )          ( Ω Ȳ  -Ω Y )
//! ```
//!
//! scaled by `(2πε)^{-d/2}`. [`wigner_closed`] evaluates that packet,
//! [`wigner_quadrature`] integrates the defining oscillatory integral
//! directly, and [`wigner_factorized`] uses the product-of-Laguerre form
//! available when `Y = Z`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{self, FramePair, LagrangianFrame, TOL_FRAME};
use crate::linalg::{self, c, conj, frobenius, hstack, identity, omega, CMatrix, I};
use crate::polys::{laguerre, MultiIndex};
use crate::quadrature::TensorRule;
use crate::wavepackets::{boundary_tail, DetRoot, GridJob, WavePacketSpec};

fn scaled_tol(m: &CMatrix) -> f64 {
    TOL_FRAME * frobenius(m).max(1.0)
}

/// `[[0, Id_d], [Id_d, 0]]`.
pub fn exchange_matrix(d: usize) -> CMatrix {
    let mut n = CMatrix::zeros(2 * d, 2 * d);
    for j in 0..d {
        n[(j, d + j)] = c(1.0, 0.0);
        n[(d + j, j)] = c(1.0, 0.0);
    }
    n
}

/// `(½ Z̄, ½ Z; Ω Z̄, -Ω Z)`, split into its position and momentum blocks.
pub fn lifted_blocks(z: &LagrangianFrame) -> (CMatrix, CMatrix) {
    let zz = z.z();
    let zbar = conj(&zz);
    let o = omega(z.dim());
    let q = hstack(&(&zbar * c(0.5, 0.0)), &(&zz * c(0.5, 0.0)));
    let p = hstack(&(&o * &zbar), &(-(&o * &zz)));
    (q, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftResiduals {
    /// isotropy and normalisation of the lifted frame
    pub isotropy: f64,
    pub normalisation: f64,
    /// `‖𝒫𝒬^{-1} - 2i G_Z‖`
    pub metric: f64,
    /// `‖𝒬^{-1} - i𝒫^*‖`
    pub inverse: f64,
    /// `‖𝒬^{-1}𝒬̄ - [[0, Id], [Id, 0]]‖`
    pub exchange: f64,
}

/// A frame lifted to phase space together with the residuals of its identities.
#[derive(Debug, Clone)]
pub struct LiftedFrame {
    base: LagrangianFrame,
    frame: LagrangianFrame,
    residuals: LiftResiduals,
}

impl LiftedFrame {
    pub fn base(&self) -> &LagrangianFrame {
        &self.base
    }

    /// The lifted frame `𝒵 = (𝒬; 𝒫)` as a frame of dimension `2d`.
    pub fn frame(&self) -> &LagrangianFrame {
        &self.frame
    }

    pub fn residuals(&self) -> LiftResiduals {
        self.residuals
    }
}

/// Lifts `Z` to phase space and checks parts 1, 2 and the exchange identity.
pub fn lift_frame(z: &LagrangianFrame) -> Result<LiftedFrame> {
    let d = z.dim();
    let (q, p) = lifted_blocks(z);
    let frame = frames::validate_frame(&q, &p, TOL_FRAME)
        .map_err(|e| match e {
            Error::NotIsotropic(r) | Error::NotNormalised(r) => Error::LiftInvariantViolation { part: 1, residual: r },
            other => other,
        })?;
    let g = linalg::to_complex(&frames::symplectic_metric(z));
    let metric = frobenius(&(frame.width() - &g * c(0.0, 2.0)));
    if metric > scaled_tol(&g) {
        return Err(Error::LiftInvariantViolation { part: 2, residual: metric });
    }
    let inverse = frobenius(&(frame.q_inv() - p.adjoint() * I));
    if inverse > scaled_tol(frame.q_inv()) {
        return Err(Error::LiftInvariantViolation { part: 2, residual: inverse });
    }
    let exchange = frobenius(&(frame.mixing_matrix() - exchange_matrix(d)));
    if exchange > TOL_FRAME {
        return Err(Error::LiftInvariantViolation { part: 5, residual: exchange });
    }
    let residuals = LiftResiduals {
        isotropy: frame.residuals().isotropy,
        normalisation: frame.residuals().normalisation,
        metric,
        inverse,
        exchange,
    };
    Ok(LiftedFrame { base: z.clone(), frame, residuals })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftPairResiduals {
    /// `‖ℬ - diag(B̄, B)‖`
    pub overlap: f64,
    /// `‖ℳ - block formula‖`
    pub recursion: f64,
    /// for `Y = Z`: `max(‖ℬ - Id‖, ‖ℳ - [[0, Id], [Id, 0]]‖)`
    pub diagonal: Option<f64>,
}

/// The lifted pair `(𝒵, 𝒴)` with `ℬ` and `ℳ`.
#[derive(Debug, Clone)]
pub struct LiftedPair {
    z: LiftedFrame,
    y: LiftedFrame,
    pair: FramePair,
    residuals: LiftPairResiduals,
}

impl LiftedPair {
    pub fn z(&self) -> &LiftedFrame {
        &self.z
    }

    pub fn y(&self) -> &LiftedFrame {
        &self.y
    }

    /// The lifted frames as a pair; its `b()` is `ℬ` and its `m()` is `ℳ`.
    pub fn pair(&self) -> &FramePair {
        &self.pair
    }

    pub fn residuals(&self) -> LiftPairResiduals {
        self.residuals
    }
}

/// `ℳ` by the block formula
/// `[[¼ Y^T G_Z Y, (B^* B)^T], [B^* B, ¼ conj(Y^T G_Z Y)]]`.
///
/// The top-left block carries a plus sign: `𝒴^T G_𝒵 𝒴 = diag(conj(Y^T G_Z Y), Y^T G_Z Y)`,
/// which follows from `𝒵^T Ω 𝒴 = diag(-Z^* Ω Ȳ, Z^T Ω Y)` and `𝒵^* Ω 𝒴 = -2iℬ`.
pub fn lifted_recursion_blocks(z: &LagrangianFrame, y: &LagrangianFrame) -> Result<CMatrix> {
    let d = z.dim();
    let b = frames::overlap_matrix(z, y)?;
    let g = linalg::to_complex(&frames::symplectic_metric(z));
    let yz = y.z();
    let ygy = yz.transpose() * g * &yz * c(0.25, 0.0);
    let bb = b.adjoint() * &b;
    let mut m = CMatrix::zeros(2 * d, 2 * d);
    m.view_mut((0, 0), (d, d)).copy_from(&ygy);
    m.view_mut((0, d), (d, d)).copy_from(&bb.transpose());
    m.view_mut((d, 0), (d, d)).copy_from(&bb);
    m.view_mut((d, d), (d, d)).copy_from(&conj(&ygy));
    Ok(m)
}

/// Lifts both frames and cross-checks `ℬ` and `ℳ` against their block forms.
pub fn lift_pair(z: &LagrangianFrame, y: &LagrangianFrame) -> Result<LiftedPair> {
    if z.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: z.dim(), found: y.dim() });
    }
    let d = z.dim();
    let lz = lift_frame(z)?;
    let ly = lift_frame(y)?;
    let pair = FramePair::new(lz.frame().clone(), ly.frame().clone())?;

    let b = frames::overlap_matrix(z, y)?;
    let mut expected_b = CMatrix::zeros(2 * d, 2 * d);
    expected_b.view_mut((0, 0), (d, d)).copy_from(&conj(&b));
    expected_b.view_mut((d, d), (d, d)).copy_from(&b);
    let overlap = frobenius(&(pair.b() - &expected_b));
    if overlap > scaled_tol(&expected_b) {
        return Err(Error::LiftInvariantViolation { part: 3, residual: overlap });
    }

    let blocks = lifted_recursion_blocks(z, y)?;
    let recursion = frobenius(&(pair.m() - &blocks));
    if recursion > scaled_tol(&blocks) {
        return Err(Error::LiftInvariantViolation { part: 4, residual: recursion });
    }

    let diagonal = if z.approx_eq(y, 0.0) {
        let r = frobenius(&(pair.b() - identity(2 * d))).max(frobenius(&(pair.m() - exchange_matrix(d))));
        if r > TOL_FRAME {
            return Err(Error::LiftInvariantViolation { part: 5, residual: r });
        }
        Some(r)
    } else {
        None
    };
    Ok(LiftedPair {
        z: lz,
        y: ly,
        pair,
        residuals: LiftPairResiduals { overlap, recursion, diagonal },
    })
}

/// Everything needed to evaluate `W^ε_{k,ℓ}[Z, Y]` in closed form.
#[derive(Debug, Clone)]
pub struct WignerSpec {
    pair: FramePair,
    k: MultiIndex,
    l: MultiIndex,
    eps: f64,
    center: Vec<f64>,
    lifted: LiftedPair,
    packet: WavePacketSpec,
    scale: f64,
}

impl WignerSpec {
    pub fn new(pair: FramePair, k: MultiIndex, l: MultiIndex, eps: f64) -> Result<Self> {
        let d = pair.dim();
        for idx in [&k, &l] {
            if idx.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: idx.dim() });
            }
        }
        let lifted = lift_pair(pair.z(), pair.y())?;
        // The ground state of 𝒵 enters with |det 𝒬|^{-1/2} = 2^{d/2}: the phase
        // of det(Q) cancels between the two packets in the Wigner integral.
        let packet = WavePacketSpec::new(lifted.pair().clone(), k.concat(&l), eps)?.with_branch(DetRoot::Modulus);
        let scale = (2.0 * PI * eps).powf(-(d as f64) / 2.0);
        Ok(WignerSpec { pair, k, l, eps, center: vec![0.0; 2 * d], lifted, packet, scale })
    }

    /// Wigner function of the two packets after both are moved to `z0`.
    pub fn with_center(mut self, z0: &[f64]) -> Result<Self> {
        if z0.len() != 2 * self.dim() {
            return Err(Error::DimensionMismatch { expected: 2 * self.dim(), found: z0.len() });
        }
        self.center = z0.to_vec();
        Ok(self)
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

    pub fn l(&self) -> &MultiIndex {
        &self.l
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn lifted(&self) -> &LiftedPair {
        &self.lifted
    }

    /// The phase-space packet `Φ_{(k,ℓ)}[𝒵, 𝒴]`.
    pub fn packet(&self) -> &WavePacketSpec {
        &self.packet
    }

    pub fn eval(&self, z: &[f64]) -> Result<Complex64> {
        if z.len() != 2 * self.dim() {
            return Err(Error::DimensionMismatch { expected: 2 * self.dim(), found: z.len() });
        }
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: &[f64]) -> Complex64 {
        if self.center.iter().all(|&v| v == 0.0) {
            return self.packet.eval_unchecked(z) * self.scale;
        }
        let shifted: Vec<f64> = z.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        self.packet.eval_unchecked(&shifted) * self.scale
    }
}

/// `W^ε_{k,ℓ}[Z, Y](z) = (2πε)^{-d/2} Φ_{(k,ℓ)}^ε[𝒵, 𝒴](z)`.
pub fn wigner_closed(spec: &WignerSpec, z: &[f64]) -> Result<Complex64> {
    spec.eval(z)
}

/// Node count and box for the `y`-integral of the Wigner transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatoryQuadrature {
    pub nodes: usize,
    /// box half-width in units of `√(ε λ_max(QQ^*))`, before the degree factor
    pub width: f64,
    /// minimum nodes per oscillation period of `e^{i(ξ - Re(PQ^{-1})x)·y/ε}`
    pub nodes_per_period: f64,
    pub max_nodes: usize,
    pub tail_tolerance: f64,
}

impl Default for OscillatoryQuadrature {
    fn default() -> Self {
        OscillatoryQuadrature { nodes: 200, width: 12.0, nodes_per_period: 8.0, max_nodes: 2000, tail_tolerance: 1e-12 }
    }
}

/// Direct quadrature of
/// `(2πε)^{-d} ∫ conj(φ(x + y/2)) ψ(x - y/2) e^{iξ·y/ε} dy` at `z = (x, ξ)`.
pub fn wigner_quadrature_packets(
    phi: &WavePacketSpec,
    psi: &WavePacketSpec,
    z: &[f64],
    quad: &OscillatoryQuadrature,
) -> Result<Complex64> {
    let d = phi.dim();
    if psi.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: psi.dim() });
    }
    if z.len() != 2 * d {
        return Err(Error::DimensionMismatch { expected: 2 * d, found: z.len() });
    }
    if d > 2 {
        return Err(Error::InvalidInput("direct Wigner quadrature is limited to d <= 2".into()));
    }
    if phi.eps() != psi.eps() || phi.center() != psi.center() {
        return Err(Error::InvalidInput("packets must share ε and centre".into()));
    }
    let eps = phi.eps();
    let (x, xi) = z.split_at(d);

    let q = phi.pair().z().q();
    let sigma = (eps * linalg::hermitian_max_eigenvalue(&(q * q.adjoint()))).sqrt();
    let degree = phi.k().total() + psi.k().total();
    let half = quad.width * sigma * (1.0 + f64::from(degree) / 4.0);

    // resolve the linear phase (ξ - Re(PQ^{-1}) x - p0)·y/ε
    let re_width = phi.pair().z().width().map(|v| v.re);
    let xs: Vec<f64> = x.iter().zip(&phi.center()[..d]).map(|(a, b)| a - b).collect();
    let drift: f64 = (0..d)
        .map(|i| {
            let s: f64 = (0..d).map(|j| re_width[(i, j)] * xs[j]).sum();
            (xi[i] - phi.center()[d + i] - s).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    let periods = drift / eps * 2.0 * half / (2.0 * PI) + f64::from(degree);
    let nodes = quad
        .nodes
        .max((quad.nodes_per_period * periods).ceil() as usize)
        .min(quad.max_nodes);

    let lower = vec![-half; d];
    let upper = vec![half; d];
    let integrand = |y: &[f64]| {
        let plus: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + 0.5 * b).collect();
        let minus: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - 0.5 * b).collect();
        let phase: f64 = xi.iter().zip(y).map(|(a, b)| a * b).sum();
        phi.eval_unchecked(&plus).conj() * psi.eval_unchecked(&minus) * (I * phase / eps).exp()
    };
    let tail = boundary_tail(&lower, &upper, |y| integrand(y).norm());
    if tail > quad.tail_tolerance {
        return Err(Error::QuadratureUnderResolved { tail, tolerance: quad.tail_tolerance });
    }
    let integral = TensorRule::new(&lower, &upper, nodes).integrate(integrand);
    Ok(integral * (2.0 * PI * eps).powf(-(d as f64)))
}

/// `W^ε(φ_k[Z, Y], φ_ℓ[Z, Y])(z)` by direct quadrature, independent of the lift.
#[allow(clippy::too_many_arguments)]
pub fn wigner_quadrature(
    z_frame: &LagrangianFrame,
    y_frame: &LagrangianFrame,
    k: &MultiIndex,
    l: &MultiIndex,
    eps: f64,
    z: &[f64],
    quad: &OscillatoryQuadrature,
) -> Result<Complex64> {
    let pair = FramePair::new(z_frame.clone(), y_frame.clone())?;
    let phi = WavePacketSpec::new(pair.clone(), k.clone(), eps)?;
    let psi = WavePacketSpec::new(pair, l.clone(), eps)?;
    wigner_quadrature_packets(&phi, &psi, z, quad)
}

/// `q^N_{(a,b)}(x_1, x_2)` for `N = [[0, 1], [1, 0]]` via its Laguerre form:
/// `(-1)^b b! 2^a x_1^{a-b} L^{(a-b)}_b(2 x_1 x_2)` for `a ≥ b`, symmetric otherwise.
pub fn exchange_polynomial(a: u32, b: u32, x1: Complex64, x2: Complex64) -> Complex64 {
    if a < b {
        return exchange_polynomial(b, a, x2, x1);
    }
    let sign = if b.is_multiple_of(2) { 1.0 } else { -1.0 };
    let lag = laguerre(b, a - b)
        .evaluate(&[x1 * x2 * 2.0])
        .expect("univariate");
    x1.powu(a - b) * lag * (sign * crate::polys::factorial(b) * 2f64.powi(a as i32))
}

/// `W^ε_{k,ℓ}[Z, Z](z)` as a product of `d` two-variable Laguerre factors
/// times the Gaussian `(πε)^{-d} e^{-z^T G_Z z / ε}`.
pub fn wigner_factorized(pair: &FramePair, k: &MultiIndex, l: &MultiIndex, eps: f64, z: &[f64]) -> Result<Complex64> {
    if !pair.is_diagonal(0.0) {
        return Err(Error::RequiresEqualFrames);
    }
    let frame = pair.z();
    let d = frame.dim();
    if k.dim() != d || l.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: k.dim().min(l.dim()) });
    }
    if z.len() != 2 * d {
        return Err(Error::DimensionMismatch { expected: 2 * d, found: z.len() });
    }
    // 𝒬^{-1} = i 𝒫^*
    let (_, p) = lifted_blocks(frame);
    let w: Vec<Complex64> = linalg::mat_vec_real(&(p.adjoint() * I), z)
        .into_iter()
        .map(|v| v / eps.sqrt())
        .collect();
    let mut poly = c(1.0, 0.0);
    for j in 0..d {
        poly *= exchange_polynomial(k.get(j), l.get(j), w[j], w[d + j]);
    }
    let g = frames::symplectic_metric(frame);
    let mut form = 0.0;
    for i in 0..2 * d {
        for j in 0..2 * d {
            form += z[i] * g[(i, j)] * z[j];
        }
    }
    let ln_norm = -0.5 * (f64::from(k.total() + l.total()) * 2f64.ln() + k.ln_factorial() + l.ln_factorial());
    let gauss = (PI * eps).powf(-(d as f64)) * (-form / eps).exp();
    Ok(poly * ln_norm.exp() * gauss)
}

/// Settings for the phase-space integral of a Wigner function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpaceQuadrature {
    /// Gauss–Legendre nodes per axis for `d = 1` (a 2-dimensional integral)
    pub nodes_d1: usize,
    /// nodes per axis for `d = 2`; the rule has `nodes_d2^4` points
    pub nodes_d2: usize,
    /// half-width of the box in whitened coordinates for the ground state;
    /// `(|k| + |ℓ|) / 4` is added for excited states
    pub width: f64,
    pub tail_tolerance: f64,
}

impl Default for PhaseSpaceQuadrature {
    fn default() -> Self {
        PhaseSpaceQuadrature { nodes_d1: 120, nodes_d2: 60, width: 6.0, tail_tolerance: 1e-12 }
    }
}

/// `∫ W_{k,ℓ}(z) dz`, which equals `⟨φ_k, φ_ℓ⟩`.
///
/// The integral runs over the whitened variable `w` with `z = √ε L^{-T} w`,
/// `G_Z = L L^T`, in which the envelope becomes `e^{-|w|²}`; `det L = 1`
/// because `G_Z` is symplectic.
pub fn wigner_integral(spec: &WignerSpec, quad: &PhaseSpaceQuadrature) -> Result<Complex64> {
    let d = spec.dim();
    if d > 2 {
        return Err(Error::InvalidInput("phase-space integration is limited to d <= 2".into()));
    }
    let g = frames::symplectic_metric(spec.pair().z());
    let chol = g.cholesky().ok_or(Error::InvalidInput("symplectic metric is not positive definite".into()))?;
    let map = chol.l().transpose().try_inverse().expect("Cholesky factor is invertible") * spec.eps().sqrt();
    let jacobian = map.determinant().abs();
    let degree = spec.k().total() + spec.l().total();
    let half = quad.width + f64::from(degree) / 4.0;
    let n = 2 * d;
    let to_z = |w: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| spec.center()[i] + (0..n).map(|j| map[(i, j)] * w[j]).sum::<f64>())
            .collect()
    };
    let lower = vec![-half; n];
    let upper = vec![half; n];
    let tail = boundary_tail(&lower, &upper, |w| spec.eval_unchecked(&to_z(w)).norm() * jacobian);
    if tail > quad.tail_tolerance {
        return Err(Error::QuadratureUnderResolved { tail, tolerance: quad.tail_tolerance });
    }
    let nodes = if d == 1 { quad.nodes_d1 } else { quad.nodes_d2 };
    let rule = TensorRule::new(&lower, &upper, nodes);
    Ok(rule.integrate(|w| spec.eval_unchecked(&to_z(w))) * jacobian)
}

/// Evaluates the closed-form Wigner function on a phase-space grid
/// (axes ordered `q_1..q_d, p_1..p_d`).
pub fn wigner_grid(spec: &WignerSpec, job: GridJob) -> Result<GridJob> {
    if job.dim() != 2 * spec.dim() {
        return Err(Error::DimensionMismatch { expected: 2 * spec.dim(), found: job.dim() });
    }
    job.fill(|z| spec.eval_unchecked(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::random::{random_frame, seeded};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn standard_frame_lift() {
        let lz = lift_frame(&LagrangianFrame::standard(1)).unwrap();
        let width = lz.frame().width();
        assert!(frobenius(&(width - identity(2) * c(0.0, 2.0))) < 1e-14);
    }

    #[test]
    fn lift_of_z2_uses_its_metric() {
        let lz = lift_frame(&fixtures::z2()).unwrap();
        let g = linalg::to_complex(&frames::symplectic_metric(&fixtures::z2()));
        assert!(frobenius(&(lz.frame().width() - g * c(0.0, 2.0))) < 1e-12);
    }

    #[test]
    fn random_lifts_are_sound() {
        let mut rng = seeded(71);
        for i in 0..20 {
            let z = random_frame(&mut rng, 1 + i % 3);
            let lz = lift_frame(&z).unwrap();
            let r = lz.residuals();
            assert!(r.isotropy < 1e-10 && r.normalisation < 1e-10 && r.exchange < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn diagonal_lift_pair() {
        let lp = lift_pair(&fixtures::z2(), &fixtures::z2()).unwrap();
        assert!(frobenius(&(lp.pair().b() - identity(4))) < 1e-12);
        assert!(frobenius(&(lp.pair().m() - exchange_matrix(2))) < 1e-12);
        let lp = lift_pair(&LagrangianFrame::standard(1), &LagrangianFrame::standard(1)).unwrap();
        assert!(frobenius(&(lp.pair().m() - exchange_matrix(1))) < 1e-15);
    }

    #[test]
    fn generalised_lift_pair_block_structure() {
        let lp = lift_pair(&fixtures::z2(), &fixtures::z3()).unwrap();
        assert!(lp.residuals().diagonal.is_none());
        let b = frames::overlap_matrix(&fixtures::z2(), &fixtures::z3()).unwrap();
        let m = lp.pair().m();
        let off = m.view((2, 0), (2, 2)).into_owned();
        assert!(frobenius(&(off - b.adjoint() * &b)) < 1e-12);
        let y = fixtures::z3().z();
        let g = linalg::to_complex(&frames::symplectic_metric(&fixtures::z2()));
        let ygy = y.transpose() * g * &y * c(0.25, 0.0);
        assert!(frobenius(&(m.view((0, 0), (2, 2)).into_owned() - &ygy)) < 1e-12);
        assert!(frobenius(&(m.view((2, 2), (2, 2)).into_owned() - conj(&ygy))) < 1e-12);
    }

    #[test]
    fn ground_state_wigner_values() {
        for (z, eps) in [(fixtures::z1(), 0.1), (fixtures::z3(), 0.25)] {
            let g = frames::symplectic_metric(&z);
            let spec = WignerSpec::new(FramePair::diagonal(z), [0, 0].into(), [0, 0].into(), eps).unwrap();
            let peak = (PI * eps).powi(-2);
            assert!(close(spec.eval(&[0.0; 4]).unwrap(), c(peak, 0.0), 1e-13));
            let pt = [0.1, -0.2, 0.05, 0.3];
            let form: f64 = (0..4).map(|i| (0..4).map(|j| pt[i] * g[(i, j)] * pt[j]).sum::<f64>()).sum();
            let w = spec.eval(&pt).unwrap();
            assert!(close(w, c(peak * (-form / eps).exp(), 0.0), 1e-12), "{w}");
        }
    }

    #[test]
    fn quadrature_of_standard_gaussian_peak() {
        let z = LagrangianFrame::standard(1);
        let w = wigner_quadrature(&z, &z, &[0].into(), &[0].into(), 1.0, &[0.0, 0.0], &OscillatoryQuadrature::default()).unwrap();
        assert!(close(w, c(1.0 / PI, 0.0), 1e-12), "{w}");
    }

    #[test]
    fn closed_form_matches_quadrature_in_one_dimension() {
        let mut rng = seeded(73);
        let z = random_frame(&mut rng, 1);
        let y = random_frame(&mut rng, 1);
        let pair = FramePair::new(z.clone(), y.clone()).unwrap();
        let quad = OscillatoryQuadrature::default();
        for (k, l) in [(0, 1), (2, 1), (3, 3)] {
            let spec = WignerSpec::new(pair.clone(), [k].into(), [l].into(), 0.2).unwrap();
            for pt in [[0.1, 0.2], [-0.3, 0.05]] {
                let closed = spec.eval(&pt).unwrap();
                let direct = wigner_quadrature(&z, &y, &[k].into(), &[l].into(), 0.2, &pt, &quad).unwrap();
                assert!(close(direct, closed, 1e-8), "k={k} l={l}: {direct} vs {closed}");
            }
        }
    }

    #[test]
    fn factorized_matches_closed_form() {
        let pair = FramePair::diagonal(fixtures::z2());
        let spec = WignerSpec::new(pair.clone(), [2, 1].into(), [0, 3].into(), 0.1).unwrap();
        for pt in [[0.1, -0.2, 0.3, 0.05], [0.0, 0.1, -0.1, 0.2]] {
            let f = wigner_factorized(&pair, &[2, 1].into(), &[0, 3].into(), 0.1, &pt).unwrap();
            assert!(close(f, spec.eval(&pt).unwrap(), 1e-10));
        }
        let gen = FramePair::new(fixtures::z2(), fixtures::z3()).unwrap();
        assert!(matches!(
            wigner_factorized(&gen, &[0, 0].into(), &[0, 0].into(), 0.1, &[0.0; 4]),
            Err(Error::RequiresEqualFrames)
        ));
    }

    #[test]
    fn exchange_polynomial_low_orders() {
        let (x1, x2) = (c(0.3, 0.1), c(-0.2, 0.5));
        assert_eq!(exchange_polynomial(0, 0, x1, x2), c(1.0, 0.0));
        assert!(close(exchange_polynomial(1, 0, x1, x2), x1 * 2.0, 1e-15));
        assert!(close(exchange_polynomial(1, 1, x1, x2), x1 * x2 * 4.0 - 2.0, 1e-14));
    }

    #[test]
    fn diagonal_wigner_is_real() {
        let spec = WignerSpec::new(FramePair::diagonal(fixtures::z3()), [2, 1].into(), [2, 1].into(), 0.1).unwrap();
        for pt in [[0.1, -0.2, 0.3, 0.05], [0.2, 0.1, -0.1, 0.2]] {
            let w = spec.eval(&pt).unwrap();
            assert!(w.im.abs() <= 1e-10 * w.norm().max(1e-300), "{w}");
        }
    }

    #[test]
    fn phase_space_mass_one_dimension() {
        let z = random_frame(&mut seeded(79), 1);
        let quad = PhaseSpaceQuadrature::default();
        for (k, l) in [(0, 0), (2, 2), (1, 2)] {
            let spec = WignerSpec::new(FramePair::diagonal(z.clone()), [k].into(), [l].into(), 0.1).unwrap();
            let mass = wigner_integral(&spec, &quad).unwrap();
            let expect = if k == l { 1.0 } else { 0.0 };
            assert!((mass - c(expect, 0.0)).norm() < 1e-8, "{k},{l}: {mass}");
        }
    }

    #[test]
    fn quadrature_fixes_sign_of_top_left_block() {
        let mut rng = seeded(83);
        let z = random_frame(&mut rng, 1);
        let y = random_frame(&mut rng, 1);
        let pair = FramePair::new(z.clone(), y.clone()).unwrap();
        let (k, l) = (MultiIndex::from([2]), MultiIndex::from([1]));
        let spec = WignerSpec::new(pair, k.clone(), l.clone(), 0.2).unwrap();
        let kl = k.concat(&l);
        let m = spec.lifted().pair().m().clone();
        let mut flipped = m.clone();
        flipped[(0, 0)] = -flipped[(0, 0)];
        let q = crate::polys::ttrr_generate(&m, &kl).unwrap().into_polynomial(&kl).unwrap();
        let q_flipped = crate::polys::ttrr_generate(&flipped, &kl).unwrap().into_polynomial(&kl).unwrap();
        let pt = [0.15, -0.1];
        let w = linalg::mat_vec_real(spec.packet().argument_map(), &pt);
        let closed = spec.eval(&pt).unwrap();
        let with_flip = closed * q_flipped.evaluate(&w).unwrap() / q.evaluate(&w).unwrap();
        let direct = wigner_quadrature(&z, &y, &k, &l, 0.2, &pt, &OscillatoryQuadrature::default()).unwrap();
        assert!(close(direct, closed, 1e-8));
        assert!((direct - with_flip).norm() > 1e-3 * direct.norm());
    }

    #[test]
    fn phase_space_integrals_in_two_dimensions() {
        let quad = PhaseSpaceQuadrature::default();
        let cross = WignerSpec::new(FramePair::diagonal(fixtures::z1()), [1, 0].into(), [0, 1].into(), 0.1).unwrap();
        assert!(wigner_integral(&cross, &quad).unwrap().norm() < 1e-6);
        let mass = WignerSpec::new(FramePair::diagonal(fixtures::z2()), [2, 1].into(), [2, 1].into(), 0.1).unwrap();
        assert!((wigner_integral(&mass, &quad).unwrap() - 1.0).norm() < 1e-6);
    }

    #[test]
    fn generalised_phase_space_integral_is_packet_overlap() {
        let mut rng = seeded(89);
        let pair = FramePair::new(random_frame(&mut rng, 1), random_frame(&mut rng, 1)).unwrap();
        let (k, l) = (MultiIndex::from([2]), MultiIndex::from([3]));
        let spec = WignerSpec::new(pair.clone(), k.clone(), l.clone(), 0.1).unwrap();
        let a = WavePacketSpec::new(pair.clone(), k, 0.1).unwrap();
        let b = WavePacketSpec::new(pair, l, 0.1).unwrap();
        let overlap = crate::wavepackets::inner_product(&a, &b, &Default::default()).unwrap();
        let mass = wigner_integral(&spec, &PhaseSpaceQuadrature::default()).unwrap();
        assert!((mass - overlap).norm() < 1e-9 * overlap.norm().max(1.0), "{mass} vs {overlap}");
    }

    #[test]
    fn z1_excited_wigner_at_origin() {
        let z = fixtures::z1();
        let (k, l) = (MultiIndex::from([1, 0]), MultiIndex::from([1, 0]));
        let spec = WignerSpec::new(FramePair::diagonal(z.clone()), k.clone(), l.clone(), 0.1).unwrap();
        let closed = spec.eval(&[0.0; 4]).unwrap();
        let direct = wigner_quadrature(&z, &z, &k, &l, 0.1, &[0.0; 4], &OscillatoryQuadrature::default()).unwrap();
        assert!(closed.im.abs() < 1e-12 * closed.norm());
        assert!(close(direct, closed, 1e-6));
    }

    #[test]
    fn high_index_factorisation() {
        let pair = FramePair::diagonal(fixtures::z2());
        let (k, l) = (MultiIndex::from([7, 6]), MultiIndex::from([2, 1]));
        let spec = WignerSpec::new(pair.clone(), k.clone(), l.clone(), 0.1).unwrap();
        let zs = crate::verify::phase_space_samples(&mut seeded(97), pair.z(), 0.1, 10).unwrap();
        let got: Vec<Complex64> = zs.iter().map(|p| wigner_factorized(&pair, &k, &l, 0.1, p).unwrap()).collect();
        let want: Vec<Complex64> = zs.iter().map(|p| spec.eval(p).unwrap()).collect();
        assert!(crate::verify::relative_error(&got, &want) < 1e-9);
    }

    #[test]
    fn single_factor_in_one_dimension() {
        let z = random_frame(&mut seeded(101), 1);
        let pair = FramePair::diagonal(z.clone());
        let spec = WignerSpec::new(pair.clone(), [1].into(), [0].into(), 0.1).unwrap();
        let pt = [0.2, -0.1];
        let f = wigner_factorized(&pair, &[1].into(), &[0].into(), 0.1, &pt).unwrap();
        assert!(close(f, spec.eval(&pt).unwrap(), 1e-12));
    }

    #[test]
    fn grids() {
        let ground = WignerSpec::new(FramePair::diagonal(fixtures::z3()), [0, 0].into(), [0, 0].into(), 0.1).unwrap();
        let job = wigner_grid(&ground, GridJob::cube(4, -1.0, 1.0, 5).unwrap()).unwrap();
        assert!(job.values.iter().all(|v| v.re > 0.0 && v.im.abs() <= 1e-14 * v.re));

        let diag = WignerSpec::new(FramePair::diagonal(fixtures::z3()), [1, 2].into(), [1, 2].into(), 0.1).unwrap();
        let job = wigner_grid(&diag, GridJob::cube(4, -0.6, 0.6, 5).unwrap()).unwrap();
        let peak = job.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(job.values.iter().all(|v| v.im.abs() <= 1e-10 * v.norm().max(1e-6 * peak)));

        let z = fixtures::z2();
        let (k, l) = (MultiIndex::from([1, 0]), MultiIndex::from([0, 0]));
        let spec = WignerSpec::new(FramePair::diagonal(z.clone()), k.clone(), l.clone(), 0.1).unwrap();
        let job = wigner_grid(&spec, GridJob::cube(4, -0.4, 0.4, 5).unwrap()).unwrap();
        for idx in [0, 111, 312, 500, 624] {
            let node = job.node(idx);
            let direct = wigner_quadrature(&z, &z, &k, &l, 0.1, &node, &OscillatoryQuadrature::default()).unwrap();
            assert!((job.values[idx] - direct).norm() <= 1e-6 * direct.norm().max(1e-6), "node {idx}");
        }
    }

    #[test]
    fn translated_closed_form() {
        let spec = WignerSpec::new(FramePair::diagonal(fixtures::z1()), [1, 0].into(), [0, 1].into(), 0.1).unwrap();
        let z0 = [0.3, -0.2, 0.5, 0.1];
        let moved = spec.clone().with_center(&z0).unwrap();
        let pt = [0.1, 0.2, -0.3, 0.4];
        let shifted: Vec<f64> = pt.iter().zip(&z0).map(|(a, b)| a - b).collect();
        assert_eq!(moved.eval(&pt).unwrap(), spec.eval(&shifted).unwrap());
        assert!(spec.with_center(&[0.0; 2]).is_err());
    }

    #[test]
    fn dimension_guards() {
        let z = LagrangianFrame::standard(3);
        let quad = OscillatoryQuadrature::default();
        let k = MultiIndex::zeros(3);
        assert!(wigner_quadrature(&z, &z, &k, &k, 0.1, &[0.0; 6], &quad).is_err());
        let spec = WignerSpec::new(FramePair::diagonal(z), k.clone(), k, 0.1).unwrap();
        assert!(spec.eval(&[0.0; 3]).is_err());
        assert!(wigner_grid(&spec, GridJob::cube(2, -1.0, 1.0, 3).unwrap()).is_err());
    }
}
