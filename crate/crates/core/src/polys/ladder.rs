use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

fn check(m: &CMatrix, q: &Polynomial, j: usize) -> Result<()> {
    if q.dim() != m.nrows() || !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: q.dim() });
    }
    if j >= q.dim() {
        return Err(Error::AxisOutOfRange { axis: j, dim: q.dim() });
    }
    Ok(())
}

/// `(M ∇ q)_j = Σ_i M_{ji} ∂_i q`.
fn m_gradient(m: &CMatrix, q: &Polynomial, j: usize) -> Polynomial {
    let mut out = Polynomial::zero(q.dim());
    for i in 0..q.dim() {
        if m[(j, i)] != Complex64::default() {
            out.add_scaled(&q.derivative(i), m[(j, i)]);
        }
    }
    out
}

/// The raising operator `(2x - M∇)_j`, taking `q_k^M` to `q_{k+e_j}^M`.
pub fn raise(m: &CMatrix, q: &Polynomial, j: usize) -> Result<Polynomial> {
    check(m, q, j)?;
    let mut out = q.mul_var(j).scale(Complex64::new(2.0, 0.0));
    out.add_scaled(&m_gradient(m, q, j), Complex64::new(-1.0, 0.0));
    Ok(out)
}

/// `∂_j q / (2 k_j)`, which takes `q_k^M` to `q_{k-e_j}^M`; zero when `k_j = 0`.
pub fn gradient_lower(q: &Polynomial, k: &super::MultiIndex, j: usize) -> Result<Polynomial> {
    if j >= q.dim() || j >= k.dim() {
        return Err(Error::AxisOutOfRange { axis: j, dim: q.dim() });
    }
    let kj = k.get(j);
    if kj == 0 {
        return Ok(Polynomial::zero(q.dim()));
    }
    Ok(q.derivative(j).scale(Complex64::new(1.0 / (2.0 * f64::from(kj)), 0.0)))
}

/// `T_j q = q + 2 x_j ∂_j q - ∂_j (M∇q)_j`; `q_k^M` has eigenvalue `2k_j + 1`.
pub fn eigen_apply_t(m: &CMatrix, q: &Polynomial, j: usize) -> Result<Polynomial> {
    check(m, q, j)?;
    let dj = q.derivative(j);
    let mut out = q.clone();
    out.add_scaled(&dj.mul_var(j), Complex64::new(2.0, 0.0));
    out.add_scaled(&m_gradient(m, q, j).derivative(j), Complex64::new(-1.0, 0.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::c;
    use crate::polys::{ttrr_generate, MultiIndex};
    use crate::random::{random_symmetric_unitary, seeded};

    #[test]
    fn raise_constant() {
        let q = raise(&fixtures::m3(), &Polynomial::one(2), 0).unwrap();
        assert_eq!(q, Polynomial::monomial([1, 0].into(), c(2.0, 0.0)));
    }

    #[test]
    fn raise_to_mixed_index() {
        let m = fixtures::m2();
        let q10 = raise(&m, &Polynomial::one(2), 0).unwrap();
        let q11 = raise(&m, &q10, 1).unwrap();
        let expect = Polynomial::from_terms(2, [([1, 1].into(), c(4.0, 0.0)), ([0, 0].into(), c(-2.0, 0.0))]);
        assert_eq!(q11, expect);
    }

    #[test]
    fn raise_matches_table() {
        let m = fixtures::m3();
        let t = ttrr_generate(&m, &[4, 2].into()).unwrap();
        let r = raise(&m, t.get(&[3, 2].into()).unwrap(), 0).unwrap();
        assert!(r.max_abs_diff(t.get(&[4, 2].into()).unwrap()) < 1e-12 * r.max_coeff());
    }

    #[test]
    fn axis_errors() {
        let m = fixtures::m1();
        assert!(matches!(raise(&m, &Polynomial::one(2), 2), Err(Error::AxisOutOfRange { .. })));
        assert!(matches!(raise(&m, &Polynomial::one(3), 0), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(eigen_apply_t(&m, &Polynomial::one(2), 5), Err(Error::AxisOutOfRange { .. })));
    }

    #[test]
    fn gradient_lowers() {
        let one = Polynomial::one(2);
        assert!(gradient_lower(&one, &[0, 0].into(), 1).unwrap().is_zero());

        let m1 = CMatrix::from_element(1, 1, c(1.0, 0.0));
        let t1 = ttrr_generate(&m1, &[2].into()).unwrap();
        let low = gradient_lower(t1.get(&[2].into()).unwrap(), &[2].into(), 0).unwrap();
        assert_eq!(low, Polynomial::monomial([1].into(), c(2.0, 0.0)));

        let t = ttrr_generate(&fixtures::m3(), &[6, 5].into()).unwrap();
        let low = gradient_lower(t.get(&[6, 5].into()).unwrap(), &[6, 5].into(), 1).unwrap();
        assert!(low.max_abs_diff(t.get(&[6, 4].into()).unwrap()) < 1e-12 * low.max_coeff());
    }

    #[test]
    fn ladder_closure() {
        let mut rng = seeded(43);
        let m = random_symmetric_unitary(&mut rng, 3);
        let t = ttrr_generate(&m, &[2, 2, 2].into()).unwrap();
        for (k, q) in t.iter() {
            for j in 0..3 {
                let up = raise(&m, q, j).unwrap();
                let back = gradient_lower(&up, &k.raised(j), j).unwrap();
                assert!(back.max_abs_diff(q) <= 1e-12 * q.max_coeff());
            }
        }
    }

    #[test]
    fn eigenvalues_of_t() {
        let one = Polynomial::one(2);
        assert_eq!(eigen_apply_t(&fixtures::m1(), &one, 0).unwrap(), one);

        for (m, k, j, lambda) in [(fixtures::m1(), [2, 3], 1, 7.0), (fixtures::m3(), [4, 1], 0, 9.0)] {
            let k = MultiIndex::from(k);
            let t = ttrr_generate(&m, &k).unwrap();
            let q = t.get(&k).unwrap();
            let tq = eigen_apply_t(&m, q, j).unwrap();
            assert!(tq.max_abs_diff(&q.scale(c(lambda, 0.0))) <= 1e-12 * q.max_coeff());
        }
    }
}
