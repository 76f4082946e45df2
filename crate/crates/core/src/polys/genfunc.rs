use num_complex::Complex64;

use super::table::{check_index, check_symmetric};
use super::{factorial, MultiIndex, Polynomial};
use crate::error::Result;
use crate::linalg::CMatrix;

fn truncate(p: Polynomial, k: &MultiIndex) -> Polynomial {
    Polynomial::from_terms(p.dim(), p.terms().filter(|(m, _)| m.componentwise_le(k)).map(|(m, c)| (m.clone(), *c)))
}

/// `q_k^M` read off the generating function `exp(2 x^T t - t^T M t)`.
///
/// The series `exp(-t^T M t)` is expanded in `t` and truncated to exponents
/// `≤ k`; the `t^k` coefficient of the product with `exp(2 x^T t)` times `k!`
/// is `q_k`. No recursion in `k` is involved.
pub fn genfunc_coefficient(m: &CMatrix, k: &MultiIndex) -> Result<Polynomial> {
    check_symmetric(m)?;
    check_index(m, k)?;
    let d = m.nrows();

    // t^T M t as a polynomial in t
    let mut quad = Polynomial::zero(d);
    for i in 0..d {
        for j in 0..d {
            let mut e = MultiIndex::unit(d, i);
            e = e.raised(j);
            quad.add_term(e, -m[(i, j)]);
        }
    }
    let quad = truncate(quad, k);

    // exp(-t^T M t) = Σ_n (-t^T M t)^n / n!
    let mut series = Polynomial::one(d);
    let mut power = Polynomial::one(d);
    for n in 1..=k.total() / 2 {
        power = truncate(power.mul(&quad), k);
        if power.is_zero() {
            break;
        }
        series.add_scaled(&power, Complex64::new(1.0 / factorial(n), 0.0));
    }

    // coefficient of t^k in exp(2 x^T t) * series, times k!
    let kfact = k.factorial();
    let mut out = Polynomial::zero(d);
    for (mexp, coeff) in series.terms() {
        let rest: Vec<u32> = k.entries().iter().zip(mexp.entries()).map(|(a, b)| a - b).collect();
        let rest = MultiIndex::new(rest);
        let scale = 2f64.powi(rest.total() as i32) / rest.factorial() * kfact;
        out.add_term(rest, coeff * scale);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::c;
    use crate::polys::ttrr_generate;

    #[test]
    fn zero_index() {
        assert_eq!(genfunc_coefficient(&fixtures::m3(), &[0, 0].into()).unwrap(), Polynomial::one(2));
    }

    #[test]
    fn classical_third_hermite() {
        let m = CMatrix::from_element(1, 1, c(1.0, 0.0));
        let q = genfunc_coefficient(&m, &[3].into()).unwrap();
        let expect = Polynomial::from_terms(1, [([3].into(), c(8.0, 0.0)), ([1].into(), c(-12.0, 0.0))]);
        assert!(q.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn matches_recursion_for_m3() {
        let t = ttrr_generate(&fixtures::m3(), &[6, 5].into()).unwrap();
        for k in [[2, 2], [6, 5], [0, 3], [4, 1]] {
            let k = MultiIndex::from(k);
            let g = genfunc_coefficient(&fixtures::m3(), &k).unwrap();
            assert!(g.max_abs_diff(t.get(&k).unwrap()) <= 1e-12 * g.max_coeff().max(1.0), "{k}");
        }
    }
}
