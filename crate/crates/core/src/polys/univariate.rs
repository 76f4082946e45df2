use num_complex::Complex64;

use super::{binomial, factorial, MultiIndex, Polynomial};

/// `H^λ_n` from `H_{n+1} = 2x H_n - 2λn H_{n-1}`, `H_0 = 1`, `H_{-1} = 0`.
pub fn univariate_hermite(lambda: Complex64, n: u32) -> Polynomial {
    let mut prev = Polynomial::zero(1);
    let mut cur = Polynomial::one(1);
    for m in 0..n {
        let mut next = cur.mul_var(0).scale(Complex64::new(2.0, 0.0));
        next.add_scaled(&prev, lambda * (-2.0 * f64::from(m)));
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalised Laguerre polynomial `L_n^(α)(x) = Σ_j C(n+α, n-j) (-x)^j / j!`.
pub fn laguerre(n: u32, alpha: u32) -> Polynomial {
    Polynomial::from_terms(
        1,
        (0..=n).map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let coeff = sign * binomial(n + alpha, n - j) / factorial(j);
            (MultiIndex::new(vec![j]), Complex64::new(coeff, 0.0))
        }),
    )
}
