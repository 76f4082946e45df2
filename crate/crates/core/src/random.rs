//! Seeded random generators for frames, unitary and symmetric unitary matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::frames::LagrangianFrame;
use crate::linalg::{c, omega, CMatrix, RMatrix};

pub type TestRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn gaussian_real<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Haar-like random unitary from the QR factorisation of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let qr = gaussian_complex(rng, d, d).qr();
    let (q, r) = qr.unpack();
    // fix column phases so the distribution does not depend on the QR sign convention
    let mut q = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        if rjj.norm() > 0.0 {
            let phase = rjj / rjj.norm();
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// `U U^T` for a random unitary `U`: complex symmetric and unitary.
pub fn random_symmetric_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let u = random_unitary(rng, d);
    &u * u.transpose()
}

pub fn random_symmetric_real<R: Rng + ?Sized>(rng: &mut R, d: usize) -> RMatrix {
    let a = gaussian_real(rng, d, d);
    (&a + a.transpose()) * 0.5
}

pub fn random_spd<R: Rng + ?Sized>(rng: &mut R, d: usize) -> RMatrix {
    let a = gaussian_real(rng, d, d);
    &a * a.transpose() / (d as f64) + RMatrix::identity(d, d) * 0.5
}

/// A random normalised Lagrangian frame.
///
/// `P = (iW + S) Q` with real symmetric `S` and real SPD `W` makes `(Q; P)`
/// isotropic with `(i/2) Z^* Ω Z = Q^* W Q`; multiplying from the right by
/// the inverse adjoint Cholesky factor of that matrix normalises it.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, d: usize) -> LagrangianFrame {
    loop {
        let q = gaussian_complex(rng, d, d) * c(1.0 / (2.0f64).sqrt(), 0.0) + CMatrix::identity(d, d);
        let s = random_symmetric_real(rng, d).map(|v| c(v, 0.0));
        let w = random_spd(rng, d).map(|v| c(0.0, v));
        let p = (w + s) * &q;
        let z = crate::linalg::stack(&q, &p);
        let h = z.adjoint() * omega(d) * &z * c(0.0, 0.5);
        let h = (&h + h.adjoint()) * c(0.5, 0.0);
        let Some(chol) = h.cholesky() else { continue };
        let Some(l_inv_adj) = chol.l().adjoint().try_inverse() else { continue };
        if let Ok(frame) = LagrangianFrame::new(&q * &l_inv_adj, &p * &l_inv_adj) {
            return frame;
        }
    }
}
