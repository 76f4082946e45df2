use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{MultiIndex, Polynomial};
use crate::error::{Error, Result};
use crate::frames::TOL_FRAME;
use crate::linalg::{frobenius, symmetry_residual, CMatrix};

pub const MAX_AXIS_INDEX: u32 = 32;
pub const MAX_TOTAL_INDEX: u32 = 40;

/// Rejects non-square or non-symmetric `M`.
pub fn check_symmetric(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let residual = symmetry_residual(m);
    if residual > TOL_FRAME * frobenius(m).max(1.0) {
        return Err(Error::AsymmetricM(residual));
    }
    Ok(())
}

pub(crate) fn check_index(m: &CMatrix, k: &MultiIndex) -> Result<()> {
    if k.dim() != m.nrows() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: k.dim() });
    }
    if k.entries().iter().any(|&v| v > MAX_AXIS_INDEX) || k.total() > MAX_TOTAL_INDEX {
        return Err(Error::IndexTooLarge(k.to_string()));
    }
    Ok(())
}

/// All `q_k^M` with `k ≤ kmax`, generated by the three-term recursion.
#[derive(Debug, Clone)]
pub struct PolynomialTable {
    m: CMatrix,
    kmax: MultiIndex,
    table: BTreeMap<MultiIndex, Polynomial>,
}

/// Builds `q_k^M` for every `k ≤ kmax` in graded order.
///
/// Each `q_k` is produced once, from its lexicographically smallest
/// predecessor `k - e_j` (the first axis with `k_j > 0`).
pub fn ttrr_generate(m: &CMatrix, kmax: &MultiIndex) -> Result<PolynomialTable> {
    check_symmetric(m)?;
    check_index(m, kmax)?;
    build(m, kmax.clone(), MultiIndex::lower_set(kmax))
}

/// Builds `q_k^M` for every `k` with `|k| ≤ total`.
pub fn ttrr_generate_total(m: &CMatrix, total: u32) -> Result<PolynomialTable> {
    check_symmetric(m)?;
    let kmax = MultiIndex(vec![total; m.nrows()]);
    if total > MAX_AXIS_INDEX {
        return Err(Error::IndexTooLarge(kmax.to_string()));
    }
    build(m, kmax, MultiIndex::up_to_total(m.nrows(), total))
}

// `indices` must be closed under lowering and sorted graded-lexicographically.
fn build(m: &CMatrix, kmax: MultiIndex, indices: Vec<MultiIndex>) -> Result<PolynomialTable> {
    let d = m.nrows();
    let two = Complex64::new(2.0, 0.0);
    let mut table: BTreeMap<MultiIndex, Polynomial> = BTreeMap::new();
    for k in indices {
        let Some(j) = k.entries().iter().position(|&v| v > 0) else {
            table.insert(k, Polynomial::one(d));
            continue;
        };
        let prev = k.lowered(j).expect("k_j > 0");
        let mut q = table[&prev].mul_var(j).scale(two);
        for i in 0..d {
            let ki = prev.get(i);
            if ki == 0 || m[(j, i)] == Complex64::default() {
                continue;
            }
            let lower = prev.lowered(i).expect("k_i > 0");
            q.add_scaled(&table[&lower], m[(j, i)] * (-2.0 * f64::from(ki)));
        }
        table.insert(k, q);
    }
    Ok(PolynomialTable { m: m.clone(), kmax, table })
}

impl PolynomialTable {
    pub fn m(&self) -> &CMatrix {
        &self.m
    }

    /// Per-axis bound of the generated indices.
    pub fn kmax(&self) -> &MultiIndex {
        &self.kmax
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, k: &MultiIndex) -> Option<&Polynomial> {
        self.table.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn into_polynomial(mut self, k: &MultiIndex) -> Option<Polynomial> {
        self.table.remove(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::c;
    use crate::polys::raise;
    use crate::random::{random_symmetric_unitary, seeded};

    fn poly(dim: usize, terms: &[(&[u32], f64)]) -> Polynomial {
        Polynomial::from_terms(dim, terms.iter().map(|(k, v)| (MultiIndex::new(k.to_vec()), c(*v, 0.0))))
    }

    #[test]
    fn total_table_agrees_with_box_table() {
        let m = fixtures::m3();
        let total = ttrr_generate_total(&m, 5).unwrap();
        let boxed = ttrr_generate(&m, &[5, 5].into()).unwrap();
        assert_eq!(total.len(), 21);
        for (k, q) in total.iter() {
            assert_eq!(q, boxed.get(k).unwrap());
        }
    }

    #[test]
    fn zero_index_is_one() {
        let t = ttrr_generate(&fixtures::m3(), &[0, 0].into()).unwrap();
        assert_eq!(t.get(&[0, 0].into()).unwrap(), &Polynomial::one(2));
    }

    #[test]
    fn one_dimensional_second_order() {
        let lambda = c(0.7, -0.2);
        let m = CMatrix::from_element(1, 1, lambda);
        let t = ttrr_generate(&m, &[2].into()).unwrap();
        let mut expect = poly(1, &[(&[2], 4.0)]);
        expect.add_term([0].into(), lambda * -2.0);
        assert_eq!(t.get(&[2].into()).unwrap(), &expect);
    }

    #[test]
    fn offdiagonal_first_mixed_index() {
        let t = ttrr_generate(&fixtures::m2(), &[1, 1].into()).unwrap();
        let expect = poly(2, &[(&[1, 1], 4.0), (&[0, 0], -2.0)]);
        assert_eq!(t.get(&[1, 1].into()).unwrap(), &expect);
    }

    #[test]
    fn degree_and_leading_coefficient() {
        let t = ttrr_generate(&fixtures::m3(), &[5, 4].into()).unwrap();
        for (k, q) in t.iter() {
            assert_eq!(q.degree(), Some(k.total()));
            let lead = q.coeff(k);
            assert!((lead - c(2f64.powi(k.total() as i32), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_asymmetric_and_oversized() {
        let mut m = fixtures::m2();
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(ttrr_generate(&m, &[1, 1].into()), Err(Error::AsymmetricM(_))));
        assert!(matches!(
            ttrr_generate(&fixtures::m1(), &[33, 0].into()),
            Err(Error::IndexTooLarge(_))
        ));
        assert!(matches!(
            ttrr_generate(&fixtures::m1(), &[30, 11].into()),
            Err(Error::IndexTooLarge(_))
        ));
        assert!(matches!(
            ttrr_generate(&fixtures::m1(), &[1, 1, 1].into()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn path_independence() {
        let mut rng = seeded(41);
        for d in [2, 3] {
            let m = random_symmetric_unitary(&mut rng, d);
            let t = ttrr_generate(&m, &MultiIndex::new(vec![3; d])).unwrap();
            for (k, q) in t.iter().filter(|(k, _)| k.total() <= 4) {
                for j in 0..d {
                    for jj in 0..d {
                        let a = raise(&m, &raise(&m, q, j).unwrap(), jj).unwrap();
                        let b = raise(&m, &raise(&m, q, jj).unwrap(), j).unwrap();
                        assert!(a.max_abs_diff(&b) <= 1e-12 * a.max_coeff(), "k={k} j={j} jj={jj}");
                    }
                }
            }
        }
    }
}
