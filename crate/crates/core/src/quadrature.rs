//! Gauss–Legendre rules and tensor-product quadrature on boxes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        (
            self.nodes.iter().map(|x| mid + half * x).collect(),
            self.weights.iter().map(|w| w * half).collect(),
        )
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let (x, w) = self.on_interval(a, b);
        x.iter().zip(&w).map(|(x, w)| w * f(*x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A tensor Gauss–Legendre rule on an axis-aligned box.
#[derive(Debug, Clone)]
pub struct TensorRule {
    pub axes: Vec<(Vec<f64>, Vec<f64>)>,
}

impl TensorRule {
    pub fn new(lower: &[f64], upper: &[f64], nodes: usize) -> Self {
        let rule = GaussLegendre::new(nodes);
        TensorRule {
            axes: lower.iter().zip(upper).map(|(&a, &b)| rule.on_interval(a, b)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|(x, _)| x.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node and weight of flat index `idx` (first axis slowest).
    pub fn point(&self, mut idx: usize, x: &mut [f64]) -> f64 {
        let mut w = 1.0;
        for axis in (0..self.dim()).rev() {
            let (nodes, weights) = &self.axes[axis];
            let i = idx % nodes.len();
            idx /= nodes.len();
            x[axis] = nodes[i];
            w *= weights[i];
        }
        w
    }

    /// `Σ w_i f(x_i)`, split over the first axis in parallel and reduced in
    /// index order so the result does not depend on thread scheduling.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let d = self.dim();
        let outer = self.axes[0].0.len();
        let inner = self.len() / outer;
        let partial: Vec<Complex64> = (0..outer)
            .into_par_iter()
            .map(|i| {
                let mut x = vec![0.0; d];
                let mut s = Complex64::default();
                for j in 0..inner {
                    let w = self.point(i * inner + j, &mut x);
                    s += f(&x) * w;
                }
                s
            })
            .collect();
        partial.into_iter().sum()
    }
}
