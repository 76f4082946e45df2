//! JSON and CSV formats.
//!
//! * matrices: row-major nested arrays with complex entries as `[re, im]`;
//! * frames: `{"Q": matrix, "P": matrix}`;
//! * polynomials: arrays of `{"k": [..], "re": .., "im": ..}` in graded-lexicographic order;
//! * grids: CSV with one node per row, row-major, header `x1,..,xd,re,im,abs`
//!   (or `q1,..,qd,p1,..,pd,re,im,abs` on phase space).
//!
//! Floats are written in Rust's shortest round-trip form (`{:?}`, scientific
//! notation for very small or large magnitudes), so output is byte-identical
//! across runs and parses back to the same bits.

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::LagrangianFrame;
use crate::linalg::CMatrix;
use crate::polys::{MultiIndex, Polynomial, PolynomialTable, TermRecord};
use crate::wavepackets::GridJob;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if n == 0 || cols == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
    }
    Ok(CMatrix::from_fn(n, cols, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameJson {
    #[serde(rename = "Q")]
    pub q: MatrixJson,
    #[serde(rename = "P")]
    pub p: MatrixJson,
}

impl FrameJson {
    pub fn from_frame(z: &LagrangianFrame) -> Self {
        FrameJson { q: matrix_to_json(z.q()), p: matrix_to_json(z.p()) }
    }

    /// The raw blocks, unvalidated.
    pub fn blocks(&self) -> Result<(CMatrix, CMatrix)> {
        Ok((matrix_from_json(&self.q)?, matrix_from_json(&self.p)?))
    }

    pub fn to_frame(&self) -> Result<LagrangianFrame> {
        let (q, p) = self.blocks()?;
        LagrangianFrame::new(q, p)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    matrix_from_json(&parse(text)?)
}

pub fn parse_frame(text: &str) -> Result<FrameJson> {
    parse(text)
}

pub fn polynomial_to_json(p: &Polynomial) -> String {
    serde_json::to_string(&p.to_records()).expect("records serialise")
}

pub fn parse_polynomial(dim: usize, text: &str) -> Result<Polynomial> {
    let records: Vec<TermRecord> = parse(text)?;
    Polynomial::from_records(dim, &records)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableEntry {
    pub k: MultiIndex,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableJson {
    #[serde(rename = "M")]
    pub m: MatrixJson,
    pub kmax: MultiIndex,
    pub entries: Vec<TableEntry>,
}

pub fn table_to_json(table: &PolynomialTable) -> TableJson {
    TableJson {
        m: matrix_to_json(table.m()),
        kmax: table.kmax().clone(),
        entries: table
            .iter()
            .map(|(k, q)| TableEntry { k: k.clone(), terms: q.to_records() })
            .collect(),
    }
}

/// Column names `x1..xd`.
pub fn position_header(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).collect()
}

/// Column names `q1..qd,p1..pd`.
pub fn phase_space_header(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("q{i}")).chain((1..=d).map(|i| format!("p{i}"))).collect()
}

pub fn write_grid_csv<W: Write>(job: &GridJob, axes: &[String], out: &mut W) -> Result<()> {
    if axes.len() != job.dim() {
        return Err(Error::DimensionMismatch { expected: job.dim(), found: axes.len() });
    }
    if job.values.len() != job.len() {
        return Err(Error::InvalidGrid("grid has not been evaluated".into()));
    }
    let mut buf = String::with_capacity(64 * (job.len() + 1));
    buf.push_str(&axes.join(","));
    buf.push_str(",re,im,abs\n");
    for (i, v) in job.values.iter().enumerate() {
        for x in job.node(i) {
            write!(buf, "{:?},", x + 0.0).expect("string write");
        }
        writeln!(buf, "{:?},{:?},{:?}", v.re + 0.0, v.im + 0.0, v.norm()).expect("string write");
    }
    out.write_all(buf.as_bytes())
        .map_err(|e| Error::InvalidInput(format!("write failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::frobenius;
    use crate::polys::ttrr_generate;

    #[test]
    fn frame_round_trip() {
        let z = fixtures::z3();
        let text = serde_json::to_string(&FrameJson::from_frame(&z)).unwrap();
        assert!(text.starts_with("{\"Q\":[[["));
        let back = parse_frame(&text).unwrap().to_frame().unwrap();
        assert!(back.approx_eq(&z, 0.0));
    }

    #[test]
    fn matrix_format() {
        let m = parse_matrix("[[[0,0],[1,0]],[[1,0],[0,0]]]").unwrap();
        assert_eq!(frobenius(&(m - fixtures::m2())), 0.0);
        assert!(parse_matrix("[[[0,0],[1,0]],[[1,0]]]").is_err());
        assert!(parse_matrix("[]").is_err());
        assert!(parse_matrix("{").is_err());
    }

    #[test]
    fn polynomial_records_are_graded() {
        let q = ttrr_generate(&fixtures::m2(), &[1, 1].into()).unwrap().into_polynomial(&[1, 1].into()).unwrap();
        let text = polynomial_to_json(&q);
        assert_eq!(text, r#"[{"k":[0,0],"re":-2.0,"im":0.0},{"k":[1,1],"re":4.0,"im":0.0}]"#);
        assert_eq!(parse_polynomial(2, &text).unwrap(), q);
    }

    #[test]
    fn grid_csv_layout() {
        let job = GridJob::cube(1, -1.0, 1.0, 3).unwrap().fill(|x| Complex64::new(x[0], 1.0)).unwrap();
        let mut out = Vec::new();
        write_grid_csv(&job, &position_header(1), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x1,re,im,abs");
        assert_eq!(lines[1], format!("-1.0,-1.0,1.0,{:?}", 2f64.sqrt()));
        assert_eq!(lines.len(), 4);
        assert_eq!(phase_space_header(2).join(","), "q1,q2,p1,p2");
    }

    #[test]
    fn unevaluated_grid_is_rejected() {
        let job = GridJob::cube(1, -1.0, 1.0, 3).unwrap();
        assert!(write_grid_csv(&job, &position_header(1), &mut Vec::new()).is_err());
    }
}
