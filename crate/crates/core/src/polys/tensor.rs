use std::collections::HashMap;

use num_complex::Complex64;

use super::table::{check_index, check_symmetric};
use super::{factorial, univariate_hermite, MultiIndex, Polynomial};
use crate::error::Result;
use crate::linalg::CMatrix;

/// Expansion of `q_k^M` into tensor products of univariate `H^{M_ii}`.
///
/// With the non-zero off-diagonal pairs `(α_j, β_j)`, `λ_j = M_{α_j β_j}`,
/// and `E` the `d x n` incidence matrix of the pairs,
///
/// `q_k = Σ_ℓ k! / (k - Eℓ)! · Π_j (-2λ_j)^{ℓ_j} / ℓ_j! · Π_i H^{M_ii}_{k_i - (Eℓ)_i}(x_i)`.
///
/// Terms with a negative Hermite index vanish. For a single pair the weight is
/// `ℓ! C(k_α, ℓ) C(k_β, ℓ)`.
pub fn tensor_expand(m: &CMatrix, k: &MultiIndex) -> Result<Polynomial> {
    check_symmetric(m)?;
    check_index(m, k)?;
    let d = m.nrows();
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
        .filter(|&(a, b)| m[(a, b)] != Complex64::default())
        .collect();
    let bounds = MultiIndex::new(pairs.iter().map(|&(a, b)| k.get(a).min(k.get(b))).collect());

    let mut hermite: HashMap<(usize, u32), Polynomial> = HashMap::new();
    let kfact = k.factorial();
    let mut out = Polynomial::zero(d);
    for ell in MultiIndex::lower_set(&bounds) {
        let mut reduced: Vec<i64> = k.entries().iter().map(|&v| i64::from(v)).collect();
        for (&(a, b), &l) in pairs.iter().zip(ell.entries()) {
            reduced[a] -= i64::from(l);
            reduced[b] -= i64::from(l);
        }
        if reduced.iter().any(|&v| v < 0) {
            continue;
        }
        let reduced: Vec<u32> = reduced.into_iter().map(|v| v as u32).collect();
        let mut weight = Complex64::new(kfact, 0.0);
        for (&(a, b), &l) in pairs.iter().zip(ell.entries()) {
            weight *= (m[(a, b)] * -2.0).powu(l) / factorial(l);
        }
        weight /= reduced.iter().map(|&v| factorial(v)).product::<f64>();

        let mut product = Polynomial::constant(d, weight);
        for (i, &n) in reduced.iter().enumerate() {
            let h = hermite
                .entry((i, n))
                .or_insert_with(|| univariate_hermite(m[(i, i)], n).embed(d, &[i]));
            product = product.mul(h);
        }
        out.add_scaled(&product, Complex64::new(1.0, 0.0));
    }
    Ok(out)
}
