//! `hagedorn` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a validation or verification check fails,
//! 2 on usage errors (bad flags, unreadable or malformed input).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hagedorn::frames::{self, FramePair, LagrangianFrame, TOL_FRAME};
use hagedorn::io as hio;
use hagedorn::linalg::{frobenius_real, omega_real, CMatrix};
use hagedorn::phasespace::{wigner_grid, wigner_quadrature, OscillatoryQuadrature, WignerSpec};
use hagedorn::polys::{ttrr_generate, MultiIndex};
use hagedorn::random::{random_frame, seeded};
use hagedorn::verify::{self, Check, Report, Suite};
use hagedorn::wavepackets::{grid_eval, translate, GridJob, WavePacketSpec, DEFAULT_EPS};
use hagedorn::{fixtures, Error};

#[derive(Parser, Debug)]
#[command(name = "hagedorn", version, about = "Hagedorn wave packets and their Wigner transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a frame is a normalised Lagrangian frame and report its residuals.
    Validate(ValidateArgs),
    /// Export the polynomial table q_k^M for all k <= kmax as JSON.
    Poly(PolyArgs),
    /// Evaluate a wave packet on a grid and write CSV.
    Packet(PacketArgs),
    /// Evaluate a Wigner function on a phase-space grid (CSV) or at one point (JSON).
    Wigner(WignerArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Fixture frame: Z1, Z2 or Z3.
    #[arg(long, conflicts_with_all = ["frame", "random"])]
    fixture: Option<String>,
    /// JSON file with {"Q": .., "P": ..}.
    #[arg(long, conflicts_with = "random")]
    frame: Option<PathBuf>,
    /// Generate a random frame of this dimension.
    #[arg(long)]
    random: Option<usize>,
    /// Seed for --random.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance.
    #[arg(long, default_value_t = TOL_FRAME)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Fixture matrix: M1, M2 or M3.
    #[arg(long, conflicts_with = "matrix")]
    fixture: Option<String>,
    /// JSON file with a complex matrix.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Upper corner kmax of the table.
    #[arg(long, num_args = 1.., required = true)]
    k: Vec<u32>,
    /// Output file for the table (stdout if omitted and --check is not given).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Compare every entry against the other constructions and print a report.
    #[arg(long)]
    check: bool,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Lower corner of the grid (one value per axis, or one value for all axes).
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    lower: Option<Vec<f64>>,
    /// Upper corner of the grid.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    upper: Option<Vec<f64>>,
    /// Points per axis.
    #[arg(long, num_args = 1..)]
    points: Option<Vec<usize>>,
    /// Output CSV file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PacketArgs {
    /// Frame Z: fixture name or JSON file.
    #[arg(long = "Z")]
    z: String,
    /// Frame Y for generalised packets (defaults to Z).
    #[arg(long = "Y")]
    y: Option<String>,
    #[arg(long, num_args = 1.., required = true)]
    k: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Phase-space centre (q, p).
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    center: Option<Vec<f64>>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args, Debug)]
struct WignerArgs {
    #[arg(long = "Z")]
    z: String,
    #[arg(long = "Y")]
    y: Option<String>,
    #[arg(long, num_args = 1.., required = true)]
    k: Vec<u32>,
    #[arg(long, num_args = 1.., required = true)]
    l: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Evaluate at a single phase-space point (q, p) instead of a grid.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    at: Option<Vec<f64>>,
    /// With --at: also integrate the defining integral directly and compare.
    #[arg(long, requires = "at")]
    oracle: bool,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// frames, polys, packets, wigner or all.
    #[arg(default_value = "all")]
    scope: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

enum Failure {
    /// A check ran and failed.
    Check(String),
    /// Bad input.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::QuadratureUnderResolved { .. }
            | Error::NotIsotropic(_)
            | Error::NotNormalised(_)
            | Error::SymmetryViolation(_)
            | Error::LiftInvariantViolation { .. } => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> CliResult {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Usage(format!("cannot write to stdout: {e}"))),
    }
}

/// A fixture name (`Z1`..`Z3`) or a path to a frame JSON file.
fn load_frame(source: &str) -> Result<LagrangianFrame, Failure> {
    if let Some(z) = fixtures::frame(source) {
        return Ok(z);
    }
    let text = read(Path::new(source))?;
    Ok(hio::parse_frame(&text)?.to_frame()?)
}

fn load_pair(z: &str, y: Option<&str>) -> Result<FramePair, Failure> {
    let z = load_frame(z)?;
    match y {
        Some(y) => Ok(FramePair::new(z, load_frame(y)?)?),
        None => Ok(FramePair::diagonal(z)),
    }
}

fn expand(values: Option<&[f64]>, d: usize, default: f64, name: &str) -> Result<Vec<f64>, Failure> {
    match values {
        None => Ok(vec![default; d]),
        Some([v]) => Ok(vec![*v; d]),
        Some(v) if v.len() == d => Ok(v.to_vec()),
        Some(v) => Err(Failure::Usage(format!("--{name} needs 1 or {d} values, got {}", v.len()))),
    }
}

fn grid_job(args: &GridArgs, d: usize, default_points: usize) -> Result<GridJob, Failure> {
    let lower = expand(args.lower.as_deref(), d, -2.0, "lower")?;
    let upper = expand(args.upper.as_deref(), d, 2.0, "upper")?;
    let points = match args.points.as_deref() {
        None => vec![default_points; d],
        Some([n]) => vec![*n; d],
        Some(v) if v.len() == d => v.to_vec(),
        Some(v) => return Err(Failure::Usage(format!("--points needs 1 or {d} values, got {}", v.len()))),
    };
    Ok(GridJob::new(lower, upper, points)?)
}

fn print_report(report: &Report) -> CliResult {
    println!("{}", report.to_json());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check("one or more checks failed".into()))
    }
}

fn cmd_validate(args: &ValidateArgs) -> CliResult {
    let (q, p) = if let Some(name) = &args.fixture {
        let z = fixtures::frame(name).ok_or_else(|| Failure::Usage(format!("unknown fixture '{name}'")))?;
        (z.q().clone(), z.p().clone())
    } else if let Some(path) = &args.frame {
        hio::parse_frame(&read(path)?)?.blocks()?
    } else if let Some(d) = args.random {
        if d == 0 {
            return Err(Failure::Usage("--random needs a positive dimension".into()));
        }
        let z = random_frame(&mut seeded(args.seed), d);
        (z.q().clone(), z.p().clone())
    } else {
        return Err(Failure::Usage("give one of --fixture, --frame or --random".into()));
    };

    let mut report = Report::default();
    if q.shape() != p.shape() || !q.is_square() {
        return Err(Failure::Usage(format!("Q and P must be square of equal size, got {:?} and {:?}", q.shape(), p.shape())));
    }
    let z = hagedorn::linalg::stack(&q, &p);
    report.add("isotropy", Check::new(frames::isotropy_residual(&z), args.tolerance));
    report.add("normalisation", Check::new(frames::normalisation_residual(&z), args.tolerance));
    match frames::validate_frame(&q, &p, args.tolerance) {
        Ok(frame) => {
            let g = frames::symplectic_metric(&frame);
            let o = omega_real(frame.dim());
            let scale = frobenius_real(&g).max(1.0);
            report.add("metric_symmetric", Check::new(frobenius_real(&(&g - g.transpose())), args.tolerance * scale));
            report.add(
                "metric_symplectic",
                Check::new(frobenius_real(&(g.transpose() * &o * &g - &o)), args.tolerance * scale * scale),
            );
            let min_eig = g.symmetric_eigenvalues().min();
            // residual: how far the smallest eigenvalue is below zero
            let positive = Check { residual: (-min_eig).max(0.0), tolerance: 0.0, pass: min_eig > 0.0, error: None };
            report.add("metric_positive_definite", positive);
        }
        Err(e) => {
            report.add("frame", Check { residual: f64::NAN, tolerance: args.tolerance, pass: false, error: Some(e.to_string()) });
        }
    }
    print_report(&report)
}

fn load_matrix(args: &PolyArgs) -> Result<CMatrix, Failure> {
    match (&args.fixture, &args.matrix) {
        (Some(name), _) => fixtures::matrix(name).ok_or_else(|| Failure::Usage(format!("unknown fixture '{name}'"))),
        (None, Some(path)) => Ok(hio::parse_matrix(&read(path)?)?),
        (None, None) => Err(Failure::Usage("give --fixture or --matrix".into())),
    }
}

fn cmd_poly(args: &PolyArgs) -> CliResult {
    let m = load_matrix(args)?;
    let kmax = MultiIndex::new(args.k.clone());
    let table = ttrr_generate(&m, &kmax)?;
    let json = serde_json::to_string_pretty(&hio::table_to_json(&table)).expect("table serialises");
    if args.out.is_some() || !args.check {
        write_output(args.out.as_deref(), (json + "\n").as_bytes())?;
    }
    if args.check {
        print_report(&verify::table_checks(&table))?;
    }
    Ok(())
}

fn cmd_packet(args: &PacketArgs) -> CliResult {
    let pair = load_pair(&args.z, args.y.as_deref())?;
    let d = pair.dim();
    let mut spec = WavePacketSpec::new(pair, MultiIndex::new(args.k.clone()), args.eps)?;
    if let Some(c) = &args.center {
        spec = translate(&spec, c)?;
    }
    let job = grid_eval(&spec, grid_job(&args.grid, d, 101)?)?;
    let mut buf = Vec::new();
    hio::write_grid_csv(&job, &hio::position_header(d), &mut buf)?;
    write_output(args.grid.out.as_deref(), &buf)
}

fn cmd_wigner(args: &WignerArgs) -> CliResult {
    let pair = load_pair(&args.z, args.y.as_deref())?;
    let d = pair.dim();
    let (k, l) = (MultiIndex::new(args.k.clone()), MultiIndex::new(args.l.clone()));
    let spec = WignerSpec::new(pair.clone(), k.clone(), l.clone(), args.eps)?;

    let Some(at) = &args.at else {
        let default_points = if d == 1 { 101 } else { 21 };
        let job = wigner_grid(&spec, grid_job(&args.grid, 2 * d, default_points)?)?;
        let mut buf = Vec::new();
        hio::write_grid_csv(&job, &hio::phase_space_header(d), &mut buf)?;
        return write_output(args.grid.out.as_deref(), &buf);
    };

    let w = spec.eval(at)?;
    let mut out = serde_json::json!({ "z": at, "re": w.re + 0.0, "im": w.im + 0.0, "abs": w.norm() });
    let mut failure = None;
    if args.oracle {
        let q = wigner_quadrature(pair.z(), pair.y(), &k, &l, args.eps, at, &OscillatoryQuadrature::default())?;
        let rel = verify::relative_error(&[w], &[q]);
        let check = Check::new(rel, 1e-6);
        if !check.pass {
            failure = Some(Failure::Check(format!("closed form and quadrature differ by {rel:.3e}")));
        }
        out["quadrature"] = serde_json::json!({ "re": q.re + 0.0, "im": q.im + 0.0 });
        out["check"] = serde_json::to_value(check).expect("check serialises");
    }
    let text = serde_json::to_string_pretty(&out).expect("value serialises") + "\n";
    write_output(args.grid.out.as_deref(), text.as_bytes())?;
    failure.map_or(Ok(()), Err)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult {
    let suite: Suite = args.scope.parse()?;
    print_report(&verify::run(suite, args.seed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Poly(a) => cmd_poly(a),
        Command::Packet(a) => cmd_packet(a),
        Command::Wigner(a) => cmd_wigner(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("hagedorn: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("hagedorn: {msg}");
            ExitCode::from(2)
        }
    }
}
