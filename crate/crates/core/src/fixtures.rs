//! Built-in example matrices `M^(1..3)` and frames `Z_1..Z_3` with
//! `Q_j^{-1} Q̄_j = M^(j)`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::frames::LagrangianFrame;
use crate::linalg::{c, CMatrix};

fn m2x2(entries: [(f64, f64); 4]) -> CMatrix {
    CMatrix::from_row_iterator(2, 2, entries.into_iter().map(|(re, im)| c(re, im)))
}

/// `Id_2`.
pub fn m1() -> CMatrix {
    m2x2([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])
}

/// `[[0, 1], [1, 0]]`.
pub fn m2() -> CMatrix {
    m2x2([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])
}

/// `(1/√2) [[1, 1], [1, -1]]`.
pub fn m3() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    m2x2([(h, 0.0), (h, 0.0), (h, 0.0), (-h, 0.0)])
}

/// `(1/√2) (1, 1; 1, -1; i, i; i, -i)`, a rotated standard Gaussian.
pub fn z1() -> LagrangianFrame {
    let h = FRAC_1_SQRT_2;
    let q = m2x2([(h, 0.0), (h, 0.0), (h, 0.0), (-h, 0.0)]);
    let p = m2x2([(0.0, h), (0.0, h), (0.0, h), (0.0, -h)]);
    LagrangianFrame::new(q, p).expect("Z1 is a normalised frame")
}

/// `Q = ½ (1+i, 1-i; 1-i, 1+i)`, `P = ((i-1)/2, (i+1)/2; (i+1)/2, (i-1)/2)`.
///
/// The overall factor ½ belongs to the position block only; applying it to
/// the momentum block as well halves `(i/2) Z^* Ω Z`.
pub fn z2() -> LagrangianFrame {
    let q = m2x2([(0.5, 0.5), (0.5, -0.5), (0.5, -0.5), (0.5, 0.5)]);
    let p = m2x2([(-0.5, 0.5), (0.5, 0.5), (0.5, 0.5), (-0.5, 0.5)]);
    LagrangianFrame::new(q, p).expect("Z2 is a normalised frame")
}

/// `Q = (i, -i(1+√2); 1, √2-1)`,
/// `P = ((1-√2)/(2√2), 1/(2√2); i(1+√2)/(2√2), i/(2√2))`.
pub fn z3() -> LagrangianFrame {
    let s = SQRT_2;
    let t = 2.0 * SQRT_2;
    let q = m2x2([(0.0, 1.0), (0.0, -(1.0 + s)), (1.0, 0.0), (s - 1.0, 0.0)]);
    let p = m2x2([((1.0 - s) / t, 0.0), (1.0 / t, 0.0), (0.0, (1.0 + s) / t), (0.0, 1.0 / t)]);
    LagrangianFrame::new(q, p).expect("Z3 is a normalised frame")
}

pub const MATRIX_NAMES: [&str; 3] = ["M1", "M2", "M3"];
pub const FRAME_NAMES: [&str; 3] = ["Z1", "Z2", "Z3"];

pub fn matrix(name: &str) -> Option<CMatrix> {
    match name.to_ascii_uppercase().as_str() {
        "M1" => Some(m1()),
        "M2" => Some(m2()),
        "M3" => Some(m3()),
        _ => None,
    }
}

pub fn frame(name: &str) -> Option<LagrangianFrame> {
    match name.to_ascii_uppercase().as_str() {
        "Z1" => Some(z1()),
        "Z2" => Some(z2()),
        "Z3" => Some(z3()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;

    #[test]
    fn frames_generate_their_matrices() {
        for (z, m) in [(z1(), m1()), (z2(), m2()), (z3(), m3())] {
            let r = z.residuals();
            assert!(r.isotropy <= 1e-12 && r.normalisation <= 1e-12, "{r:?}");
            let diff = z.mixing_matrix() - m;
            assert!(diff.iter().all(|v| v.norm() <= 1e-12), "{diff}");
        }
    }

    #[test]
    fn matrices_are_symmetric_unitary() {
        for m in [m1(), m2(), m3()] {
            assert!(frobenius(&(&m - m.transpose())) == 0.0);
            assert!(frobenius(&(m.adjoint() * &m - CMatrix::identity(2, 2))) < 1e-15);
        }
    }

    #[test]
    fn lookup_by_name() {
        assert!(frame("z2").is_some());
        assert!(matrix("M4").is_none());
    }
}
