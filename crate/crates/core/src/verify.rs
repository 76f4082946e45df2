//! Numerical checks that compare independent routes to the same objects.
//!
//! Each check reports its worst residual against a tolerance. [`run`] groups
//! them into suites for the command-line `verify` command; the acceptance
//! tests call the individual checks directly.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::frames::{self, FramePair, LagrangianFrame};
use crate::linalg::{frobenius, frobenius_real, identity, omega_real, CMatrix, RMatrix};
use crate::phasespace::{
    lift_frame, lift_pair, wigner_factorized, wigner_integral, wigner_quadrature, wigner_quadrature_packets,
    OscillatoryQuadrature, PhaseSpaceQuadrature, WignerSpec,
};
use crate::polys::{
    eigen_apply_t, genfunc_coefficient, laguerre, laguerre_reduce, tensor_expand, ttrr_generate, ttrr_generate_total,
    MultiIndex, Polynomial, PolynomialTable,
};
use crate::random::{random_frame, random_symmetric_unitary, seeded, TestRng};
use crate::wavepackets::{gram_matrix, ground_state, prefactor_by_operator, translate, GridJob, QuadratureSpec, WavePacketSpec};

/// Values below this fraction of the largest sampled magnitude are compared
/// against that floor instead of their own size.
pub const RELATIVE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    pub fn new(residual: f64, tolerance: f64) -> Self {
        Check { residual, tolerance, pass: residual <= tolerance, error: None }
    }

    pub fn from_result(result: Result<f64>, tolerance: f64) -> Self {
        match result {
            Ok(r) => Check::new(r, tolerance),
            Err(e) => Check { residual: f64::INFINITY, tolerance, pass: false, error: Some(e.to_string()) },
        }
    }
}

/// Named checks, serialised as `{name: {residual, tolerance, pass}}`.
#[derive(Debug, Clone, Default, Serialize)]
#[serde(transparent)]
pub struct Report {
    checks: BTreeMap<String, Check>,
}

impl Report {
    pub fn add(&mut self, name: impl Into<String>, check: Check) {
        self.checks.insert(name.into(), check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Check)> {
        self.checks.iter()
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Frames,
    Polys,
    Packets,
    Wigner,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "frames" => Ok(Suite::Frames),
            "polys" => Ok(Suite::Polys),
            "packets" => Ok(Suite::Packets),
            "wigner" => Ok(Suite::Wigner),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidInput(format!("unknown suite '{other}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Frames => "frames",
            Suite::Polys => "polys",
            Suite::Packets => "packets",
            Suite::Wigner => "wigner",
            Suite::All => "all",
        };
        f.write_str(name)
    }
}

/// `max_i |got_i - want_i| / max(|want_i|, RELATIVE_FLOOR · max_j |want_j|)`.
pub fn relative_error(got: &[Complex64], want: &[Complex64]) -> f64 {
    assert_eq!(got.len(), want.len());
    let scale = want.iter().map(|w| w.norm()).fold(0.0, f64::max) * RELATIVE_FLOOR;
    got.iter()
        .zip(want)
        .map(|(g, w)| (g - w).norm() / w.norm().max(scale).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn lower_cholesky(m: &RMatrix) -> Result<RMatrix> {
    m.clone()
        .cholesky()
        .map(|c| c.l())
        .ok_or_else(|| Error::InvalidInput("matrix is not positive definite".into()))
}

fn uniform_box<R: Rng + ?Sized>(rng: &mut R, n: usize, half: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-half..half)).collect()
}

/// Points `x = √ε C u` with `C C^T = QQ^*` and `u` uniform in `[-2, 2]^d`,
/// so samples sit where the packet of `z` is not negligible.
pub fn position_samples<R: Rng + ?Sized>(rng: &mut R, z: &LagrangianFrame, eps: f64, n: usize) -> Result<Vec<Vec<f64>>> {
    let d = z.dim();
    let cov: RMatrix = (z.q() * z.q().adjoint()).map(|v| v.re);
    let c = lower_cholesky(&cov)? * eps.sqrt();
    Ok((0..n).map(|_| (&c * RMatrix::from_vec(d, 1, uniform_box(rng, d, 2.0))).as_slice().to_vec()).collect())
}

/// Points `z = √ε L^{-T} u` with `G_Z = L L^T` and `u` uniform in `[-1.5, 1.5]^{2d}`.
pub fn phase_space_samples<R: Rng + ?Sized>(rng: &mut R, z: &LagrangianFrame, eps: f64, n: usize) -> Result<Vec<Vec<f64>>> {
    let d2 = 2 * z.dim();
    let l = lower_cholesky(&frames::symplectic_metric(z))?;
    let map = l.transpose().try_inverse().expect("Cholesky factor is invertible") * eps.sqrt();
    Ok((0..n).map(|_| (&map * RMatrix::from_vec(d2, 1, uniform_box(rng, d2, 1.5))).as_slice().to_vec()).collect())
}

/// The three fixture frames: isotropy, normalisation and `Q_j^{-1} Q̄_j = M^(j)` entrywise.
pub fn fixture_frames() -> f64 {
    let pairs = [
        (fixtures::z1(), fixtures::m1()),
        (fixtures::z2(), fixtures::m2()),
        (fixtures::z3(), fixtures::m3()),
    ];
    pairs
        .iter()
        .map(|(z, m)| {
            let r = z.residuals();
            let entry = (z.mixing_matrix() - m).iter().map(|v| v.norm()).fold(0.0, f64::max);
            r.isotropy.max(r.normalisation).max(entry)
        })
        .fold(0.0, f64::max)
}

/// Random frames: validation residuals, `G_Z` symmetric positive definite and
/// symplectic, and the recursion matrix of `(Z, Z)` equal to `Q^{-1} Q̄`.
pub fn random_frame_identities(rng: &mut TestRng, count: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..count {
        let z = random_frame(rng, 1 + i % 3);
        let d = z.dim();
        let r = z.residuals();
        let g = frames::symplectic_metric(&z);
        let o = omega_real(d);
        let symplectic = frobenius_real(&(g.transpose() * &o * &g - &o));
        let symmetric = frobenius_real(&(&g - g.transpose()));
        if g.clone().cholesky().is_none() {
            return Err(Error::InvalidInput("symplectic metric is not positive definite".into()));
        }
        let m = frames::recursion_matrix(&z, &z)?;
        let mixing = frobenius(&(m - z.mixing_matrix()));
        worst = worst.max(r.isotropy).max(r.normalisation).max(symplectic).max(symmetric).max(mixing);
    }
    Ok(worst)
}

/// The fixture matrices followed by `extra` random symmetric unitary `d × d` matrices.
pub fn oracle_matrices(rng: &mut TestRng, extra: usize, d: usize) -> Vec<CMatrix> {
    let mut ms = vec![fixtures::m1(), fixtures::m2(), fixtures::m3()];
    ms.extend((0..extra).map(|_| random_symmetric_unitary(rng, d)));
    ms
}

fn first_coupling(m: &CMatrix) -> Option<(usize, usize)> {
    let d = m.nrows();
    (0..d)
        .flat_map(|n| (n + 1..d).map(move |j| (n, j)))
        .find(|&(n, j)| m[(n, j)].norm() > 1e-14)
}

/// Recursion table vs generating-function coefficients vs tensor expansion,
/// and vs the Laguerre reduction along the first nonzero coupling.
/// Residuals are relative to the largest coefficient of each polynomial.
pub fn polynomial_oracles(ms: &[CMatrix], total: u32) -> Result<f64> {
    let mut worst = 0.0f64;
    for m in ms {
        let table = ttrr_generate_total(m, total)?;
        let coupling = first_coupling(m);
        for (k, q) in table.iter() {
            worst = worst.max(q.rel_diff(&genfunc_coefficient(m, k)?));
            worst = worst.max(q.rel_diff(&tensor_expand(m, k)?));
            if let Some((n, j)) = coupling {
                worst = worst.max(q.rel_diff(&laguerre_reduce(m, k, n, j)?));
            }
        }
    }
    Ok(worst)
}

type Route<'a> = (&'static str, f64, Box<dyn Fn(&MultiIndex, &Polynomial) -> Result<f64> + 'a>);

/// Every entry of `table` against the generating function, the tensor
/// expansion, the Laguerre reduction (when `M` has a nonzero coupling) and
/// the eigen relation for `T_j`.
pub fn table_checks(table: &PolynomialTable) -> Report {
    let m = table.m();
    let coupling = first_coupling(m);
    let routes: Vec<Route> = vec![
        ("poly.genfunc", 1e-10, Box::new(|k, q| Ok(q.rel_diff(&genfunc_coefficient(m, k)?)))),
        ("poly.tensor", 1e-10, Box::new(|k, q| Ok(q.rel_diff(&tensor_expand(m, k)?)))),
        (
            "poly.laguerre",
            1e-10,
            Box::new(move |k, q| match coupling {
                Some((n, j)) => Ok(q.rel_diff(&laguerre_reduce(m, k, n, j)?)),
                None => Ok(0.0),
            }),
        ),
        (
            "poly.eigen_relation",
            1e-12,
            Box::new(|k, q| {
                let mut worst = 0.0f64;
                for j in 0..k.dim() {
                    let expected = q.scale(Complex64::new(f64::from(2 * k.get(j) + 1), 0.0));
                    worst = worst.max(eigen_apply_t(m, q, j)?.max_abs_diff(&expected) / q.max_coeff());
                }
                Ok(worst)
            }),
        ),
    ];
    let mut report = Report::default();
    for (name, tol, route) in routes {
        let worst = table
            .iter()
            .try_fold(0.0f64, |acc, (k, q)| Ok::<f64, Error>(acc.max(route(k, q)?)));
        record(&mut report, name, worst, tol);
    }
    report
}

/// `q_{(7,6)}` for `M = [[0, 1], [1, 0]]` against `6! 2^7 x_1 L^{(1)}_6(2 x_1 x_2)`,
/// relative to the leading coefficient.
pub fn exchange_laguerre_identity() -> Result<f64> {
    let k = MultiIndex::from([7, 6]);
    let q = ttrr_generate(&fixtures::m2(), &k)?.into_polynomial(&k).expect("corner");
    let lag = laguerre(6, 1);
    let scale = 720.0 * 128.0;
    let expected = Polynomial::from_terms(
        2,
        lag.terms().map(|(j, c)| {
            let j = j.get(0);
            (MultiIndex::from([j + 1, j]), c * scale * 2f64.powi(j as i32))
        }),
    );
    let leading = q.coeff(&MultiIndex::from([7, 6])).norm();
    Ok(q.max_abs_diff(&expected) / leading)
}

/// `T_j q_k = (2k_j + 1) q_k` for every table entry, relative to the largest coefficient.
pub fn eigen_relation(ms: &[CMatrix], total: u32) -> Result<f64> {
    let mut worst = 0.0f64;
    for m in ms {
        let table = ttrr_generate_total(m, total)?;
        for (k, q) in table.iter() {
            for j in 0..k.dim() {
                let t = eigen_apply_t(m, q, j)?;
                let expected = q.scale(Complex64::new(f64::from(2 * k.get(j) + 1), 0.0));
                worst = worst.max(t.max_abs_diff(&expected) / q.max_coeff());
            }
        }
    }
    Ok(worst)
}

/// `max |⟨φ_k, φ_ℓ⟩ - δ_{kℓ}|` over all `|k|, |ℓ| ≤ total`.
pub fn orthonormality(z: &LagrangianFrame, eps: f64, total: u32, quad: &QuadratureSpec) -> Result<f64> {
    let packets = MultiIndex::up_to_total(z.dim(), total)
        .into_iter()
        .map(|k| WavePacketSpec::standard(z.clone(), k, eps))
        .collect::<Result<Vec<_>>>()?;
    let gram = gram_matrix(&packets, quad)?;
    Ok((gram - identity(packets.len())).iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// Recursion-matrix packets against the literal raising-operator construction
/// at sampled points.
pub fn operator_route(rng: &mut TestRng, pairs: &[FramePair], total: u32, points: usize, eps: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for pair in pairs {
        let xs = position_samples(rng, pair.z(), eps, points)?;
        let ground: Vec<Complex64> = xs.iter().map(|x| ground_state(pair.z(), eps, x)).collect::<Result<_>>()?;
        for k in MultiIndex::up_to_total(pair.dim(), total) {
            let spec = WavePacketSpec::new(pair.clone(), k.clone(), eps)?;
            let p = prefactor_by_operator(pair.z(), pair.y(), &k, eps)?;
            let got: Vec<Complex64> = xs.iter().map(|x| spec.eval(x)).collect::<Result<_>>()?;
            let want: Vec<Complex64> = xs
                .iter()
                .zip(&ground)
                .map(|(x, g)| Ok(p.evaluate_real(x)? * g))
                .collect::<Result<_>>()?;
            worst = worst.max(relative_error(&got, &want));
        }
    }
    Ok(worst)
}

/// Closed-form Wigner function against direct quadrature of the defining
/// integral, for all `k, ℓ ≤ kmax` (componentwise).
pub fn wigner_closed_vs_quadrature(
    rng: &mut TestRng,
    pairs: &[FramePair],
    kmax: u32,
    points: usize,
    eps: f64,
    quad: &OscillatoryQuadrature,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for pair in pairs {
        let d = pair.dim();
        let zs = phase_space_samples(rng, pair.z(), eps, points)?;
        let box_ = MultiIndex::lower_set(&MultiIndex::new(vec![kmax; d]));
        for k in &box_ {
            for l in &box_ {
                worst = worst.max(wigner_pair_error(pair, k, l, eps, &zs, quad)?);
            }
        }
    }
    Ok(worst)
}

/// Closed form against quadrature for one `(k, ℓ)` at the given points.
pub fn wigner_pair_error(
    pair: &FramePair,
    k: &MultiIndex,
    l: &MultiIndex,
    eps: f64,
    zs: &[Vec<f64>],
    quad: &OscillatoryQuadrature,
) -> Result<f64> {
    let spec = WignerSpec::new(pair.clone(), k.clone(), l.clone(), eps)?;
    let got: Vec<Complex64> = zs.iter().map(|z| spec.eval(z)).collect::<Result<_>>()?;
    let want: Vec<Complex64> = zs
        .iter()
        .map(|z| wigner_quadrature(pair.z(), pair.y(), k, l, eps, z, quad))
        .collect::<Result<_>>()?;
    Ok(relative_error(&got, &want))
}

/// Lift identities for each frame and for consecutive pairs. Returns the worst
/// residual of parts 1–4 and, separately, of part 5.
pub fn lift_identities(frames_: &[LagrangianFrame]) -> Result<(f64, f64)> {
    let mut parts = 0.0f64;
    let mut diagonal = 0.0f64;
    for (i, z) in frames_.iter().enumerate() {
        let r = lift_frame(z)?.residuals();
        parts = parts.max(r.isotropy).max(r.normalisation).max(r.metric).max(r.inverse);
        diagonal = diagonal.max(r.exchange);
        let same = lift_pair(z, z)?.residuals();
        diagonal = diagonal.max(same.diagonal.unwrap_or(f64::INFINITY));
        if let Some(y) = frames_[i + 1..].iter().find(|y| y.dim() == z.dim()) {
            let r = lift_pair(z, y)?.residuals();
            parts = parts.max(r.overlap).max(r.recursion);
        }
    }
    Ok((parts, diagonal))
}

/// Product-of-Laguerre evaluation against the closed form for `Y = Z`,
/// all `k, ℓ ≤ kmax` componentwise.
pub fn factorisation(rng: &mut TestRng, z: &LagrangianFrame, kmax: u32, points: usize, eps: f64) -> Result<f64> {
    let pair = FramePair::diagonal(z.clone());
    let zs = phase_space_samples(rng, z, eps, points)?;
    let box_ = MultiIndex::lower_set(&MultiIndex::new(vec![kmax; z.dim()]));
    let mut worst = 0.0f64;
    for k in &box_ {
        for l in &box_ {
            let spec = WignerSpec::new(pair.clone(), k.clone(), l.clone(), eps)?;
            let got: Vec<Complex64> = zs.iter().map(|p| wigner_factorized(&pair, k, l, eps, p)).collect::<Result<_>>()?;
            let want: Vec<Complex64> = zs.iter().map(|p| spec.eval(p)).collect::<Result<_>>()?;
            worst = worst.max(relative_error(&got, &want));
        }
    }
    Ok(worst)
}

/// `max |∫ W_{k,ℓ} dz - δ_{kℓ}|` over `k, ℓ ≤ kmax` componentwise.
pub fn phase_space_mass(z: &LagrangianFrame, kmax: u32, eps: f64, quad: &PhaseSpaceQuadrature) -> Result<f64> {
    let pair = FramePair::diagonal(z.clone());
    let box_ = MultiIndex::lower_set(&MultiIndex::new(vec![kmax; z.dim()]));
    let mut worst = 0.0f64;
    for k in &box_ {
        for l in &box_ {
            let spec = WignerSpec::new(pair.clone(), k.clone(), l.clone(), eps)?;
            let delta = if k == l { 1.0 } else { 0.0 };
            worst = worst.max((wigner_integral(&spec, quad)? - delta).norm());
        }
    }
    Ok(worst)
}

/// `W_{k,k}` is real: worst `|Im W| / |W|` over the sampled points.
pub fn wigner_realness(rng: &mut TestRng, z: &LagrangianFrame, k: &MultiIndex, points: usize, eps: f64) -> Result<f64> {
    let spec = WignerSpec::new(FramePair::diagonal(z.clone()), k.clone(), k.clone(), eps)?;
    let zs = phase_space_samples(rng, z, eps, points)?;
    let vals: Vec<Complex64> = zs.iter().map(|p| spec.eval(p)).collect::<Result<_>>()?;
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max) * RELATIVE_FLOOR;
    Ok(vals.iter().map(|v| v.im.abs() / v.norm().max(scale)).fold(0.0, f64::max))
}

/// Wigner function of two packets moved to `z0`, by quadrature, against the
/// closed form evaluated at `z - z0`.
pub fn translation_covariance(
    rng: &mut TestRng,
    pair: &FramePair,
    k: &MultiIndex,
    l: &MultiIndex,
    z0: &[f64],
    points: usize,
    eps: f64,
) -> Result<f64> {
    let phi = translate(&WavePacketSpec::new(pair.clone(), k.clone(), eps)?, z0)?;
    let psi = translate(&WavePacketSpec::new(pair.clone(), l.clone(), eps)?, z0)?;
    let spec = WignerSpec::new(pair.clone(), k.clone(), l.clone(), eps)?;
    let quad = OscillatoryQuadrature::default();
    let zs: Vec<Vec<f64>> = phase_space_samples(rng, pair.z(), eps, points)?
        .into_iter()
        .map(|p| p.iter().zip(z0).map(|(a, b)| a + b).collect())
        .collect();
    let got: Vec<Complex64> = zs.iter().map(|p| wigner_quadrature_packets(&phi, &psi, p, &quad)).collect::<Result<_>>()?;
    let want: Vec<Complex64> = zs
        .iter()
        .map(|p| {
            let shifted: Vec<f64> = p.iter().zip(z0).map(|(a, b)| a - b).collect();
            spec.eval(&shifted)
        })
        .collect::<Result<_>>()?;
    Ok(relative_error(&got, &want))
}

/// Number of sign changes of a sampled function that is real up to a slowly
/// varying phase: a simple zero shows up as a phase jump of about `π` between
/// neighbouring samples. Exact zeros are skipped.
pub fn count_sign_changes(values: &[Complex64]) -> usize {
    let nonzero: Vec<Complex64> = values.iter().copied().filter(|v| v.norm() > 0.0).collect();
    nonzero
        .windows(2)
        .filter(|w| (w[1] * w[0].conj()).arg().abs() > PI / 2.0)
        .count()
}

/// Sign changes of `φ_{(4,6)}^{0.1}[Z_1]` along its two principal axes
/// `x ∥ (1, 1)` and `x ∥ (1, -1)`, read off the diagonals of a
/// `n × n` grid on `[-2, 2]^2` (`n` odd so the diagonals pass through grid nodes).
pub fn z1_nodal_counts(n: usize) -> Result<(usize, usize)> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidGrid("need an odd number of points per axis".into()));
    }
    let spec = WavePacketSpec::standard(fixtures::z1(), [4, 6].into(), 0.1)?;
    let grid = crate::wavepackets::grid_eval(&spec, GridJob::cube(2, -2.0, 2.0, n)?)?;
    let diagonal: Vec<Complex64> = (0..n).map(|i| grid.values[i * n + i]).collect();
    let anti: Vec<Complex64> = (0..n).map(|i| grid.values[i * n + (n - 1 - i)]).collect();
    Ok((count_sign_changes(&diagonal), count_sign_changes(&anti)))
}

/// Radial sign changes of `φ_{(7,6)}^{0.1}[Z_2]` on an `n`-point ray from the
/// origin (excluded) to radius 2 at angle `theta`.
pub fn z2_radial_zeros(n: usize, theta: f64) -> Result<usize> {
    let spec = WavePacketSpec::standard(fixtures::z2(), [7, 6].into(), 0.1)?;
    let (s, c) = theta.sin_cos();
    let vals: Vec<Complex64> = (1..=n)
        .map(|i| {
            let r = 2.0 * i as f64 / n as f64;
            spec.eval(&[r * c, r * s])
        })
        .collect::<Result<_>>()?;
    Ok(count_sign_changes(&vals))
}

fn random_pairs(rng: &mut TestRng, d: usize, count: usize) -> Result<Vec<FramePair>> {
    (0..count)
        .map(|_| {
            let z = random_frame(rng, d);
            let y = random_frame(rng, d);
            FramePair::new(z, y)
        })
        .collect()
}

fn record(report: &mut Report, name: &str, result: Result<f64>, tolerance: f64) {
    report.add(name, Check::from_result(result, tolerance));
}

pub fn frames_suite(seed: u64) -> Report {
    let mut rng = seeded(seed);
    let mut report = Report::default();
    report.add("frames.fixtures", Check::new(fixture_frames(), 1e-12));
    record(&mut report, "frames.random_identities", random_frame_identities(&mut rng, 20), 1e-10);
    let b = frames::overlap_matrix(&fixtures::z2(), &fixtures::z2()).map(|b| frobenius(&(b - identity(2))));
    record(&mut report, "frames.overlap_diagonal", b, 1e-12);
    report
}

pub fn polys_suite(seed: u64) -> Report {
    let mut rng = seeded(seed);
    let mut report = Report::default();
    let ms = oracle_matrices(&mut rng, 5, 3);
    record(&mut report, "polys.oracle_equivalence", polynomial_oracles(&ms, 6), 1e-10);
    record(&mut report, "polys.exchange_laguerre", exchange_laguerre_identity(), 1e-9);
    record(&mut report, "polys.eigen_relation", eigen_relation(&ms, 6), 1e-12);
    report
}

pub fn packets_suite(seed: u64) -> Report {
    let mut rng = seeded(seed);
    let mut report = Report::default();
    let quad = QuadratureSpec::default();
    record(&mut report, "packets.orthonormality_z1", orthonormality(&fixtures::z1(), 0.1, 3, &quad), 1e-8);
    record(&mut report, "packets.orthonormality_z2", orthonormality(&fixtures::z2(), 0.1, 3, &quad), 1e-8);
    let r = random_pairs(&mut rng, 2, 5).and_then(|pairs| operator_route(&mut rng, &pairs, 4, 50, 0.1));
    record(&mut report, "packets.operator_route", r, 1e-9);
    report
}

pub fn wigner_suite(seed: u64) -> Report {
    let mut rng = seeded(seed);
    let mut report = Report::default();
    let quad = OscillatoryQuadrature::default();
    let r = random_pairs(&mut rng, 1, 5).and_then(|pairs| wigner_closed_vs_quadrature(&mut rng, &pairs, 3, 20, 0.1, &quad));
    record(&mut report, "wigner.closed_vs_quadrature_d1", r, 1e-6);

    let r = FramePair::new(fixtures::z2(), fixtures::z3()).and_then(|pair| {
        let zs = phase_space_samples(&mut rng, pair.z(), 0.1, 5)?;
        wigner_pair_error(&pair, &[1, 1].into(), &[0, 1].into(), 0.1, &zs, &quad)
    });
    record(&mut report, "wigner.closed_vs_quadrature_d2_spot", r, 1e-6);

    let frames_: Vec<LagrangianFrame> = (0..20).map(|i| random_frame(&mut rng, 1 + i % 3)).collect();
    match lift_identities(&frames_) {
        Ok((parts, diagonal)) => {
            report.add("wigner.lift_parts_1_4", Check::new(parts, 1e-10));
            report.add("wigner.lift_part_5", Check::new(diagonal, 1e-12));
        }
        Err(e) => {
            record(&mut report, "wigner.lift_parts_1_4", Err(e.clone()), 1e-10);
            record(&mut report, "wigner.lift_part_5", Err(e), 1e-12);
        }
    }
    record(&mut report, "wigner.factorisation", factorisation(&mut rng, &fixtures::z2(), 3, 20, 0.1), 1e-9);
    let z = random_frame(&mut rng, 1);
    record(&mut report, "wigner.phase_space_mass", phase_space_mass(&z, 3, 0.1, &PhaseSpaceQuadrature::default()), 1e-6);
    record(&mut report, "wigner.realness", wigner_realness(&mut rng, &fixtures::z3(), &[2, 1].into(), 20, 0.1), 1e-10);
    let r = random_pairs(&mut rng, 1, 1).and_then(|pairs| {
        translation_covariance(&mut rng, &pairs[0], &[2].into(), &[1].into(), &[0.4, -0.7], 10, 0.1)
    });
    record(&mut report, "wigner.translation_covariance", r, 1e-9);
    report
}

/// Runs one suite (or all of them) with a fixed seed.
pub fn run(suite: Suite, seed: u64) -> Report {
    match suite {
        Suite::Frames => frames_suite(seed),
        Suite::Polys => polys_suite(seed),
        Suite::Packets => packets_suite(seed),
        Suite::Wigner => wigner_suite(seed),
        Suite::All => {
            let mut report = frames_suite(seed);
            report.extend(polys_suite(seed));
            report.extend(packets_suite(seed));
            report.extend(wigner_suite(seed));
            report
        }
    }
}

/// `(πε)^{-d}`, the peak of the ground-state Wigner function.
pub fn ground_wigner_peak(d: usize, eps: f64) -> f64 {
    (PI * eps).powf(-(d as f64))
}
