use num_complex::Complex64;

use super::table::{check_index, check_symmetric};
use super::{factorial, laguerre, raise, MultiIndex, Polynomial};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// `M[n,m]`: `M` with the entries `M_{nm}` and `M_{mn}` set to zero.
pub fn reduced_matrix(m: &CMatrix, n: usize, mm: usize) -> CMatrix {
    let mut r = m.clone();
    r[(n, mm)] = Complex64::default();
    r[(mm, n)] = Complex64::default();
    r
}

/// `q_k^M` as a Laguerre polynomial in the raising operators `c^†` of the
/// reduced matrix `M[n,m]`:
///
/// `q_k^M = (c^†)^{k - k_m(e_n+e_m)} (-2λ)^{k_m} k_m! L^{(k_n-k_m)}_{k_m}(c^†_n c^†_m / 2λ) 1`
///
/// for `k_n ≥ k_m`, `λ = M_{nm}`; the roles of `n` and `m` are swapped otherwise.
pub fn laguerre_reduce(m: &CMatrix, k: &MultiIndex, n: usize, mm: usize) -> Result<Polynomial> {
    check_symmetric(m)?;
    check_index(m, k)?;
    let d = m.nrows();
    for axis in [n, mm] {
        if axis >= d {
            return Err(Error::AxisOutOfRange { axis, dim: d });
        }
    }
    if n == mm {
        return Err(Error::InvalidInput(format!("reduction axes must differ, got ({n}, {mm})")));
    }
    let lambda = m[(n, mm)];
    if lambda == Complex64::default() {
        return Err(Error::ZeroOffdiagonal(n, mm));
    }
    let (n, mm) = if k.get(n) >= k.get(mm) { (n, mm) } else { (mm, n) };
    let low = k.get(mm);
    let alpha = k.get(n) - low;
    let reduced = reduced_matrix(m, n, mm);

    // (c^†)^{k - k_m(e_n + e_m)} 1
    let mut base = Polynomial::one(d);
    for axis in 0..d {
        let times = if axis == n || axis == mm { k.get(axis) - low } else { k.get(axis) };
        for _ in 0..times {
            base = raise(&reduced, &base, axis)?;
        }
    }

    let lag = laguerre(low, alpha);
    let inv_two_lambda = Complex64::new(1.0, 0.0) / (lambda * 2.0);
    let mut sum = Polynomial::zero(d);
    let mut power = base;
    let mut weight = Complex64::new(1.0, 0.0);
    for i in 0..=low {
        sum.add_scaled(&power, lag.coeff(&MultiIndex::new(vec![i])) * weight);
        if i < low {
            power = raise(&reduced, &raise(&reduced, &power, n)?, mm)?;
            weight *= inv_two_lambda;
        }
    }
    let prefactor = (-lambda * 2.0).powu(low) * factorial(low);
    Ok(sum.scale(prefactor))
}
