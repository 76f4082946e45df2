//! Normalised Lagrangian frames `Z = (Q; P)` and the matrices derived from them.
//!
//! A frame is a `2d x d` complex matrix with `Z^T Ω Z = 0` (isotropy) and
//! `(i/2) Z^* Ω Z = Id` (normalisation). Pairs of frames `(Z, Y)` determine the
//! overlap matrix `B = (i/2) Z^* Ω Y` and the symmetric recursion matrix `M`
//! of the polynomial prefactors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, conj, frobenius, identity, omega, CMatrix, RMatrix, I};

/// Default absolute tolerance for frame identities.
pub const TOL_FRAME: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameResiduals {
    pub isotropy: f64,
    pub normalisation: f64,
}

/// A validated normalised Lagrangian frame.
#[derive(Debug, Clone)]
pub struct LagrangianFrame {
    q: CMatrix,
    p: CMatrix,
    q_inv: CMatrix,
    residuals: FrameResiduals,
}

pub fn isotropy_residual(z: &CMatrix) -> f64 {
    let d = z.ncols();
    frobenius(&(z.transpose() * omega(d) * z))
}

pub fn normalisation_residual(z: &CMatrix) -> f64 {
    let d = z.ncols();
    frobenius(&(z.adjoint() * omega(d) * z * c(0.0, 0.5) - identity(d)))
}

/// Checks isotropy and normalisation of `(Q; P)` and returns the frame.
pub fn validate_frame(q: &CMatrix, p: &CMatrix, tol: f64) -> Result<LagrangianFrame> {
    let d = q.nrows();
    if d == 0 || !q.is_square() {
        return Err(Error::DimensionMismatch { expected: d, found: q.ncols() });
    }
    if p.shape() != q.shape() {
        return Err(Error::DimensionMismatch { expected: d, found: p.nrows() });
    }
    if !linalg::is_finite(q) {
        return Err(Error::NonFinite("Q"));
    }
    if !linalg::is_finite(p) {
        return Err(Error::NonFinite("P"));
    }
    let z = linalg::stack(q, p);
    let residuals = FrameResiduals {
        isotropy: isotropy_residual(&z),
        normalisation: normalisation_residual(&z),
    };
    if residuals.isotropy > tol {
        return Err(Error::NotIsotropic(residuals.isotropy));
    }
    if residuals.normalisation > tol {
        return Err(Error::NotNormalised(residuals.normalisation));
    }
    let q_inv = linalg::inverse(q, "Q")?;
    linalg::inverse(p, "P")?;
    Ok(LagrangianFrame {
        q: q.clone(),
        p: p.clone(),
        q_inv,
        residuals,
    })
}

impl LagrangianFrame {
    pub fn new(q: CMatrix, p: CMatrix) -> Result<Self> {
        validate_frame(&q, &p, TOL_FRAME)
    }

    /// The frame `(Id; i Id)` of the standard Gaussian.
    pub fn standard(d: usize) -> Self {
        Self::new(identity(d), identity(d) * I).expect("standard frame is valid")
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    pub fn q_inv(&self) -> &CMatrix {
        &self.q_inv
    }

    pub fn residuals(&self) -> FrameResiduals {
        self.residuals
    }

    /// The full `2d x d` matrix `(Q; P)`.
    pub fn z(&self) -> CMatrix {
        linalg::stack(&self.q, &self.p)
    }

    /// `P Q^{-1}`, the complex width matrix of the ground state.
    pub fn width(&self) -> CMatrix {
        &self.p * &self.q_inv
    }

    /// `‖Im(P Q^{-1}) - (Q Q^*)^{-1}‖_F`.
    pub fn ground_state_residual(&self) -> f64 {
        let im = self.width().map(|z| c(z.im, 0.0));
        match linalg::inverse(&(&self.q * self.q.adjoint()), "QQ*") {
            Ok(inv) => frobenius(&(im - inv)),
            Err(_) => f64::INFINITY,
        }
    }

    /// `Q^{-1} Q̄`, the recursion matrix of the standard wave packets.
    pub fn mixing_matrix(&self) -> CMatrix {
        &self.q_inv * conj(&self.q)
    }

    /// Right multiplication `Z U`; stays a normalised frame for unitary `U`.
    pub fn rotate(&self, u: &CMatrix) -> Result<Self> {
        validate_frame(&(&self.q * u), &(&self.p * u), TOL_FRAME)
    }

    /// Same-subspace equality of the underlying matrices, entrywise.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim()
            && frobenius(&(&self.q - &other.q)) <= tol
            && frobenius(&(&self.p - &other.p)) <= tol
    }
}

/// `G_Z = Ω^T Re(Z Z^*) Ω`.
pub fn symplectic_metric(z: &LagrangianFrame) -> RMatrix {
    let d = z.dim();
    let zz = z.z();
    let re: RMatrix = (&zz * zz.adjoint()).map(|v| v.re);
    let o = linalg::omega_real(d);
    o.transpose() * re * o
}

/// `B = (i/2) Z^* Ω Y`.
pub fn overlap_matrix(z: &LagrangianFrame, y: &LagrangianFrame) -> Result<CMatrix> {
    if z.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: z.dim(), found: y.dim() });
    }
    Ok(z.z().adjoint() * omega(z.dim()) * y.z() * c(0.0, 0.5))
}

/// `M = ¼ Y^* G_Z Ȳ + B^* Q^{-1} Q̄ B̄`.
///
/// The conjugation in the second summand distributes over `Q B`; for `Y = Z`
/// this reduces to `Q^{-1} Q̄`.
pub fn recursion_matrix(z: &LagrangianFrame, y: &LagrangianFrame) -> Result<CMatrix> {
    let b = overlap_matrix(z, y)?;
    let g = linalg::to_complex(&symplectic_metric(z));
    let yz = y.z();
    let first = yz.adjoint() * g * conj(&yz) * c(0.25, 0.0);
    let second = b.adjoint() * z.q_inv() * conj(z.q()) * conj(&b);
    let m = first + second;
    let residual = linalg::symmetry_residual(&m);
    if residual > TOL_FRAME * frobenius(&m).max(1.0) {
        return Err(Error::SymmetryViolation(residual));
    }
    Ok(m)
}

/// A pair of frames with cached overlap and recursion matrices.
#[derive(Debug, Clone)]
pub struct FramePair {
    z: LagrangianFrame,
    y: LagrangianFrame,
    b: CMatrix,
    m: CMatrix,
}

impl FramePair {
    pub fn new(z: LagrangianFrame, y: LagrangianFrame) -> Result<Self> {
        let b = overlap_matrix(&z, &y)?;
        let m = recursion_matrix(&z, &y)?;
        Ok(Self { z, y, b, m })
    }

    /// The pair `(Z, Z)` of standard Hagedorn wave packets.
    pub fn diagonal(z: LagrangianFrame) -> Self {
        let y = z.clone();
        Self::new(z, y).expect("a frame paired with itself is consistent")
    }

    pub fn z(&self) -> &LagrangianFrame {
        &self.z
    }

    pub fn y(&self) -> &LagrangianFrame {
        &self.y
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn m(&self) -> &CMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.z.approx_eq(&self.y, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::random::{random_frame, random_unitary, seeded};

    #[test]
    fn identity_frame_is_valid_with_zero_residuals() {
        let z = validate_frame(&identity(2), &(identity(2) * I), TOL_FRAME).unwrap();
        assert_eq!(z.residuals().isotropy, 0.0);
        assert_eq!(z.residuals().normalisation, 0.0);
    }

    #[test]
    fn real_momentum_block_is_not_normalised() {
        let err = validate_frame(&identity(2), &identity(2), TOL_FRAME).unwrap_err();
        assert!(matches!(err, Error::NotNormalised(r) if (r - 2f64.sqrt()).abs() < 1e-14));
    }

    #[test]
    fn non_isotropic_frame_is_rejected() {
        let mut p = identity(2) * I;
        p[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            validate_frame(&identity(2), &p, TOL_FRAME),
            Err(Error::NotIsotropic(_))
        ));
    }

    #[test]
    fn mismatched_shapes() {
        assert!(matches!(
            validate_frame(&identity(2), &identity(3), TOL_FRAME),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn metric_of_standard_frame_is_identity() {
        let g = symplectic_metric(&LagrangianFrame::standard(3));
        assert!(linalg::frobenius_real(&(g - RMatrix::identity(6, 6))) < 1e-15);
    }

    #[test]
    fn metric_of_z1_is_identity() {
        let g = symplectic_metric(&fixtures::z1());
        assert!(linalg::frobenius_real(&(g - RMatrix::identity(4, 4))) < 1e-14);
    }

    // Independent route: the block formula [[PP^*, -PQ^* + i], [-QP^* - i, QQ^*]].
    fn metric_by_blocks(z: &LagrangianFrame) -> RMatrix {
        let (q, p) = (z.q(), z.p());
        let d = z.dim();
        let id = identity(d) * I;
        let mut g = CMatrix::zeros(2 * d, 2 * d);
        g.view_mut((0, 0), (d, d)).copy_from(&(p * p.adjoint()));
        g.view_mut((0, d), (d, d)).copy_from(&(-(p * q.adjoint()) + &id));
        g.view_mut((d, 0), (d, d)).copy_from(&(-(q * p.adjoint()) - &id));
        g.view_mut((d, d), (d, d)).copy_from(&(q * q.adjoint()));
        assert!(g.iter().all(|v| v.im.abs() < 1e-12), "block formula is real");
        g.map(|v| v.re)
    }

    #[test]
    fn metric_matches_block_formula() {
        for z in [fixtures::z1(), fixtures::z2(), fixtures::z3()] {
            let diff = symplectic_metric(&z) - metric_by_blocks(&z);
            assert!(linalg::frobenius_real(&diff) < 1e-12);
        }
        let mut rng = seeded(11);
        for _ in 0..10 {
            let z = random_frame(&mut rng, 3);
            let diff = symplectic_metric(&z) - metric_by_blocks(&z);
            assert!(linalg::frobenius_real(&diff) < 1e-10);
        }
    }

    #[test]
    fn metric_is_symmetric_positive_symplectic() {
        let mut rng = seeded(3);
        for d in 1..=4 {
            let z = random_frame(&mut rng, d);
            let g = symplectic_metric(&z);
            assert!(linalg::frobenius_real(&(&g - g.transpose())) < TOL_FRAME);
            assert!(g.clone().cholesky().is_some());
            let o = linalg::omega_real(d);
            assert!(linalg::frobenius_real(&(&g * &o * g.transpose() - o)) < TOL_FRAME);
        }
    }

    #[test]
    fn metric_is_invariant_under_unitary_rotation() {
        let mut rng = seeded(5);
        for d in 1..=4 {
            let z = random_frame(&mut rng, d);
            let u = random_unitary(&mut rng, d);
            let zu = z.rotate(&u).unwrap();
            let diff = symplectic_metric(&z) - symplectic_metric(&zu);
            assert!(linalg::frobenius_real(&diff) < TOL_FRAME);
        }
    }

    #[test]
    fn ground_state_identity_holds_for_random_frames() {
        let mut rng = seeded(17);
        for d in 1..=5 {
            let z = random_frame(&mut rng, d);
            assert!(z.ground_state_residual() < TOL_FRAME);
        }
    }

    #[test]
    fn overlap_of_frame_with_itself_is_identity() {
        for z in [LagrangianFrame::standard(2), fixtures::z1(), fixtures::z3()] {
            let b = overlap_matrix(&z, &z).unwrap();
            assert!(frobenius(&(b - identity(2))) < 1e-12);
        }
        let err = overlap_matrix(&LagrangianFrame::standard(1), &LagrangianFrame::standard(2));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn recursion_matrix_reduces_to_mixing_matrix_on_diagonal() {
        let mut rng = seeded(23);
        for i in 0..20 {
            let z = random_frame(&mut rng, 1 + i % 4);
            let m = recursion_matrix(&z, &z).unwrap();
            assert!(frobenius(&(m - z.mixing_matrix())) < TOL_FRAME);
        }
    }

    // Independent route from the prefactor raising operator: M = X^* Q^{-T} B̄.
    #[test]
    fn recursion_matrix_matches_operator_form() {
        let mut rng = seeded(29);
        let pairs = vec![(fixtures::z2(), fixtures::z3()), (fixtures::z3(), fixtures::z1())];
        let random: Vec<_> = (0..8)
            .map(|i| (random_frame(&mut rng, 1 + i % 3), random_frame(&mut rng, 1 + i % 3)))
            .collect();
        for (z, y) in pairs.into_iter().chain(random) {
            let m = recursion_matrix(&z, &y).unwrap();
            let b = overlap_matrix(&z, &y).unwrap();
            let alt = y.q().adjoint() * z.q_inv().transpose() * conj(&b);
            assert!(frobenius(&(&m - alt)) < 1e-10 * frobenius(&m).max(1.0));
            assert!(linalg::symmetry_residual(&m) < 1e-10 * frobenius(&m).max(1.0));
        }
    }

    #[test]
    fn fixture_pair_z2_z3() {
        let pair = FramePair::new(fixtures::z2(), fixtures::z3()).unwrap();
        assert!(!pair.is_diagonal(1e-12));
        // B and M by direct block arithmetic from the raw fixture matrices.
        let (z, y) = (fixtures::z2().z(), fixtures::z3().z());
        let b = z.adjoint() * omega(2) * &y * c(0.0, 0.5);
        assert!(frobenius(&(pair.b() - &b)) < 1e-14);
        assert!(frobenius(&(pair.m() - pair.m().transpose())) < 1e-12);
        assert!(frobenius(&(pair.m() - fixtures::m2())) > 1e-3);
    }
}
