//! Sparse multivariate polynomials over `C` and the family `q_k^M`.
//!
//! The family is generated by the three-term recursion
//! `q_{k+e_j} = 2 x_j q_k - 2 Σ_i M_{ji} k_i q_{k-e_i}` (see [`ttrr_generate`]).
//! The other constructors in this module (generating function, Laguerre
//! reduction, tensor expansion, raising operator) reach the same polynomials
//! along unrelated code paths and serve as oracles for each other.

mod genfunc;
mod ladder;
mod laguerre;
mod table;
mod tensor;
mod univariate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub use genfunc::genfunc_coefficient;
pub use ladder::{eigen_apply_t, gradient_lower, raise};
pub use laguerre::{laguerre_reduce, reduced_matrix};
pub use table::{check_symmetric, ttrr_generate, ttrr_generate_total, PolynomialTable, MAX_AXIS_INDEX, MAX_TOTAL_INDEX};
pub use tensor::tensor_expand;
pub use univariate::{laguerre, univariate_hermite};

/// A multi-index `k ∈ N^d`, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, j: usize) -> Self {
        let mut k = Self::zeros(d);
        k.0[j] = 1;
        k
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|k| = Σ k_j`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn raised(&self, j: usize) -> Self {
        let mut k = self.clone();
        k.0[j] += 1;
        k
    }

    pub fn lowered(&self, j: usize) -> Option<Self> {
        let mut k = self.clone();
        k.0[j] = k.0[j].checked_sub(1)?;
        Some(k)
    }

    /// Componentwise partial order.
    pub fn componentwise_le(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn concat(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `k! = Π k_j!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n)).product()
    }

    /// `ln k!`, for normalisations that overflow in linear space.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&n| ln_factorial(n)).sum()
    }

    /// All indices `ℓ ≤ kmax` in graded-lexicographic order.
    pub fn lower_set(kmax: &MultiIndex) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zeros(kmax.dim())];
        for (axis, &limit) in kmax.0.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (limit as usize + 1));
            for k in &out {
                for v in 0..=limit {
                    let mut k = k.clone();
                    k.0[axis] = v;
                    next.push(k);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// All indices of dimension `d` with `|k| ≤ total`, graded-lexicographic.
    pub fn up_to_total(d: usize, total: u32) -> Vec<MultiIndex> {
        let mut all = Self::lower_set(&MultiIndex(vec![total; d]));
        all.retain(|k| k.total() <= total);
        all
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

pub fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|v| f64::from(v).ln()).sum()
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// One exported coefficient, `{"k": [...], "re": .., "im": ..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub k: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// A polynomial in `d` variables stored as a sparse map from exponents to
/// coefficients. Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    pub fn constant(dim: usize, value: Complex64) -> Self {
        Self::monomial(MultiIndex::zeros(dim), value)
    }

    pub fn monomial(k: MultiIndex, coeff: Complex64) -> Self {
        let mut p = Polynomial::zero(k.dim());
        p.add_term(k, coeff);
        p
    }

    /// The coordinate function `x_j`.
    pub fn variable(dim: usize, j: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, j), Complex64::new(1.0, 0.0))
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Self {
        let mut p = Polynomial::zero(dim);
        for (k, c) in terms {
            assert_eq!(k.dim(), dim, "term dimension");
            p.add_term(k, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::total).max()
    }

    pub fn coeff(&self, k: &MultiIndex) -> Complex64 {
        self.terms.get(k).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, k: MultiIndex, coeff: Complex64) {
        debug_assert_eq!(k.dim(), self.dim);
        if coeff == Complex64::default() {
            return;
        }
        let entry = self.terms.entry(k);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + coeff;
                if sum == Complex64::default() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, factor: Complex64) {
        assert_eq!(self.dim, other.dim, "polynomial dimensions differ");
        if factor == Complex64::default() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: Complex64) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        out.add_scaled(self, factor);
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, other.dim, "polynomial dimensions differ");
        let mut out = Polynomial::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let k = MultiIndex(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                out.add_term(k, ca * cb);
            }
        }
        out
    }

    /// Multiplication by the coordinate `x_j`.
    pub fn mul_var(&self, j: usize) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (k.raised(j), *c)).collect(),
        }
    }

    /// `∂ / ∂x_j`.
    pub fn derivative(&self, j: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (k, c) in &self.terms {
            let power = k.get(j);
            if power > 0 {
                out.add_term(k.lowered(j).expect("positive power"), c * f64::from(power));
            }
        }
        out
    }

    /// Embeds a polynomial into `dim` variables, sending variable `i` to `axes[i]`.
    pub fn embed(&self, dim: usize, axes: &[usize]) -> Polynomial {
        assert_eq!(axes.len(), self.dim);
        let mut out = Polynomial::zero(dim);
        for (k, c) in &self.terms {
            let mut e = MultiIndex::zeros(dim);
            for (i, &axis) in axes.iter().enumerate() {
                e.0[axis] += k.get(i);
            }
            out.add_term(e, *c);
        }
        out
    }

    /// The polynomial `x ↦ p(L x)` for a `dim x n` matrix `L`.
    pub fn compose_linear(&self, l: &CMatrix) -> Result<Polynomial> {
        if l.nrows() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: l.nrows() });
        }
        let n = l.ncols();
        let rows: Vec<Polynomial> = (0..self.dim)
            .map(|i| Polynomial::from_terms(n, (0..n).map(|j| (MultiIndex::unit(n, j), l[(i, j)]))))
            .collect();
        let max_deg = self.terms.keys().flat_map(|k| k.0.iter().copied()).max().unwrap_or(0);
        let powers: Vec<Vec<Polynomial>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![Polynomial::one(n)];
                for p in 1..=max_deg as usize {
                    let next = v[p - 1].mul(r);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Polynomial::zero(n);
        for (k, c) in &self.terms {
            let mut term = Polynomial::constant(n, *c);
            for (i, &e) in k.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize]);
                }
            }
            out.add_scaled(&term, Complex64::new(1.0, 0.0));
        }
        Ok(out)
    }

    /// Evaluates at a complex point using per-axis power tables.
    pub fn evaluate(&self, x: &[Complex64]) -> Result<Complex64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[Complex64]) -> Complex64 {
        let mut max_pow = vec![0usize; self.dim];
        for k in self.terms.keys() {
            for (m, &e) in max_pow.iter_mut().zip(&k.0) {
                *m = (*m).max(e as usize);
            }
        }
        let powers: Vec<Vec<Complex64>> = x
            .iter()
            .zip(&max_pow)
            .map(|(&xi, &m)| {
                let mut v = Vec::with_capacity(m + 1);
                v.push(Complex64::new(1.0, 0.0));
                for p in 1..=m {
                    v.push(v[p - 1] * xi);
                }
                v
            })
            .collect();
        self.terms
            .iter()
            .map(|(k, c)| {
                k.0.iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &e)| acc * powers[i][e as usize])
            })
            .sum()
    }

    pub fn evaluate_real(&self, x: &[f64]) -> Result<Complex64> {
        let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.evaluate(&xc)
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max_k |a_k - b_k|` over the union of supports.
    pub fn max_abs_diff(&self, other: &Polynomial) -> f64 {
        assert_eq!(self.dim, other.dim, "polynomial dimensions differ");
        let mut worst = 0.0f64;
        for (k, c) in &self.terms {
            worst = worst.max((c - other.coeff(k)).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// Coefficient-wise distance relative to the larger coefficient scale.
    pub fn rel_diff(&self, other: &Polynomial) -> f64 {
        self.max_abs_diff(other) / self.max_coeff().max(other.max_coeff()).max(f64::MIN_POSITIVE)
    }

    /// Terms sorted graded-lexicographically for export.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            // `+ 0.0` turns a signed zero into 0.0 so exports do not print `-0.0`
            .map(|(k, c)| TermRecord { k: k.0.clone(), re: c.re + 0.0, im: c.im + 0.0 })
            .collect()
    }

    pub fn from_records(dim: usize, records: &[TermRecord]) -> Result<Polynomial> {
        let mut p = Polynomial::zero(dim);
        for r in records {
            if r.k.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.k.len() });
            }
            p.add_term(MultiIndex(r.k.clone()), Complex64::new(r.re, r.im));
        }
        Ok(p)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)x^{}", c.re, c.im, k)?;
        }
        Ok(())
    }
}
