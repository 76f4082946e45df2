//! Small dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Matrices with a 1-norm condition number above this are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The standard symplectic form `[[0, -Id], [Id, 0]]` of size `2d x 2d`.
pub fn omega(d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2 * d, 2 * d);
    for j in 0..d {
        m[(j, d + j)] = c(-1.0, 0.0);
        m[(d + j, j)] = c(1.0, 0.0);
    }
    m
}

pub fn omega_real(d: usize) -> RMatrix {
    omega(d).map(|z| z.re)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_real(m: &RMatrix) -> f64 {
    m.iter().map(|z| z * z).sum::<f64>().sqrt()
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn one_norm(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverts via LU with partial pivoting and refuses ill-conditioned input.
pub fn inverse(m: &CMatrix, which: &'static str) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let inv = m.clone().lu().try_inverse().ok_or(Error::Singular {
        which,
        condition: f64::INFINITY,
    })?;
    let condition = one_norm(m) * one_norm(&inv);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::Singular { which, condition });
    }
    Ok(inv)
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn hermitian_max_eigenvalue(m: &CMatrix) -> f64 {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Principal square root of `det(m)`, i.e. `det^{1/2}` with branch cut on the negative axis.
pub fn principal_sqrt_det(m: &CMatrix) -> Complex64 {
    m.clone().lu().determinant().sqrt()
}

/// Vertical concatenation `(top; bottom)`.
pub fn stack(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    out
}

/// Horizontal concatenation `(left, right)`.
pub fn hstack(left: &CMatrix, right: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(left.nrows(), left.ncols() + right.ncols());
    out.view_mut((0, 0), left.shape()).copy_from(left);
    out.view_mut((0, left.ncols()), right.shape()).copy_from(right);
    out
}

pub fn symmetry_residual(m: &CMatrix) -> f64 {
    frobenius(&(m - m.transpose()))
}

pub fn mat_vec_real(m: &CMatrix, x: &[f64]) -> Vec<Complex64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum())
        .collect()
}
