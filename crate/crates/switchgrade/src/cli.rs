//! Command-line interface: reproduction harness and data exporter.
//!
//! Four subcommands wrap the library's pipelines:
//!
//! * `compute-lambda` — estimate the top Lyapunov exponent of a built-in
//!   family by the angular method, the product search, or both, and check
//!   the two methods against each other and against the quarter-turn
//!   cycle rate `log(4)/π`.
//! * `verify-paper` — run the ordered verification checklist behind the
//!   built-in 4-dimensional construction (irreducibility rank, Hurwitz
//!   certificates, product identities, marginal stability, extremal-norm
//!   certificates, flat-segment probe), with PASS/FAIL lines and a
//!   machine-readable JSON report.
//! * `ball` — export the unit-ball boundary polyline of one of the planar
//!   norms (closed-form, polar-table, or the classical spiral example) as
//!   CSV or JSON.
//! * `trajectory` — integrate a schedule file against a built-in family
//!   and export the sampled trajectory as CSV.
//!
//! Conventions: every command is deterministic given its flags (fixed
//! seeds, fixed grids); the `SWITCHGRADE_THREADS` environment variable
//! caps the worker-thread count; CSV uses `.` as the decimal separator
//! and `\n` line endings; JSON is UTF-8 with floats printed at 17
//! significant digits, so re-reading a report reproduces every numeric
//! field bit-identically. Exit codes: 0 success, 1 a check failed or a
//! computation error occurred, 2 usage error.

use crate::barabanov::{
    cgm_ball_polyline, flatness_check, norm_a, norm_b_build, FiniteHorizonNorm, NormModel,
};
use crate::error::{Error, Result};
use crate::lyapunov::{
    default_duration_grid, lambda_lower_product_search, lambda_planar_angular, lambda_singleton,
    lambda_upper_extremal, LyapunovEstimate,
};
use crate::matexp::{expm, kron, opnorm, Mat};
use crate::models;
use crate::sampling::simplex_points;
use crate::spectral::{algebra_closure_rank, spectral_abscissa};
use crate::system::{evolve, EvolveOptions, Schedule, SwitchingSystem};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

/// Default product-search horizon for `compute-lambda`. The raw pair's
/// finite-horizon overshoot decays like `log(R_max/R_min)/T ≈ 0.1283/T`
/// (the radius oscillation of its extremal ball over one period), so the
/// default horizon must exceed `0.1283/2e−3 ≈ 64.2` for the two methods
/// to agree within the default tolerance; `24π ≈ 75.4` leaves headroom.
const DEFAULT_PRODUCT_HORIZON: f64 = 24.0 * PI;
/// Default agreement tolerance between the two methods.
const DEFAULT_AGREEMENT_TOL: f64 = 2e-3;
/// Exponent lower-bound slack for the `compute-lambda` exit check.
const BOUND_SLACK: f64 = 1e-9;
/// verify-paper: horizon and beam for the marginal-stability product
/// search on the shifted pair.
const VERIFY_MARGINAL_HORIZON: f64 = 20.0;
const VERIFY_MARGINAL_BEAM: usize = 64;
/// verify-paper: finite-horizon norm budget for the flat-segment probe.
const VERIFY_FLATNESS_HORIZON: f64 = 40.0;
const VERIFY_FLATNESS_BEAM: usize = 64;
const VERIFY_FLATNESS_SAMPLES: usize = 21;
const VERIFY_FLATNESS_TOL: f64 = 1e-2;
/// verify-paper: sphere samples per extremal certificate.
const VERIFY_CERT_SAMPLES: usize = 200;
/// verify-paper: sampled hull points for the Hurwitz sweep.
const VERIFY_HULL_SAMPLES: usize = 50;
const VERIFY_HULL_SEED: u64 = 7;
/// verify-paper: polar-table resolution.
const VERIFY_TABLE_RESOLUTION: usize = 4096;

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Parses `std::env::args` and runs the selected subcommand, returning
/// the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Testable entry point: parse the given arguments and run.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(code) = configure_threads() {
        return code;
    }
    match exec(&cli) {
        Ok(code) => code,
        Err(CliFailure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliFailure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Applies `SWITCHGRADE_THREADS` to the global worker pool. Invalid
/// values are usage errors (exit 2); a pool that is already built (e.g.
/// in tests) is left untouched.
fn configure_threads() -> std::result::Result<(), i32> {
    if let Ok(raw) = std::env::var("SWITCHGRADE_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!(
                    "error: SWITCHGRADE_THREADS must be a positive integer, got {raw:?}"
                );
                return Err(2);
            }
        }
    }
    Ok(())
}

#[derive(Debug)]
enum CliFailure {
    /// Bad flag values discovered after parsing (exit 2).
    Usage(String),
    /// Computation or I/O failure (exit 1).
    Runtime(Error),
}

impl From<Error> for CliFailure {
    fn from(e: Error) -> Self {
        CliFailure::Runtime(e)
    }
}

type ExecResult = std::result::Result<i32, CliFailure>;

// ---------------------------------------------------------------------------
// Flags
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "switchgrade",
    version,
    about = "Lyapunov exponents and extremal norms for linear switching systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the top Lyapunov exponent of a built-in family
    ComputeLambda(ComputeLambdaArgs),
    /// Run the verification checklist for the built-in 4D construction
    VerifyPaper(VerifyPaperArgs),
    /// Export the unit-ball boundary polyline of a planar norm
    Ball(BallArgs),
    /// Integrate a schedule file and export the trajectory as CSV
    Trajectory(TrajectoryArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Angular method and product search, cross-checked (default)
    Both,
    /// Planar angular method only
    Angular,
    /// Beam product search only
    Product,
    /// Spectral abscissa of a single generator (needs --generator)
    Singleton,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SystemArg {
    /// The raw rotation pair (exponent λ ≈ 0.4839)
    #[value(name = "raw")]
    Raw,
    /// The freeze/decay pair 𝖠
    #[value(name = "A")]
    A,
    /// The shifted rotation pair 𝖡 (exponent 0)
    #[value(name = "B")]
    B,
    /// 𝖡 plus the zero generator (hull 𝖡₀)
    #[value(name = "B0")]
    B0,
    /// The 4-dimensional tensor family 𝖷
    #[value(name = "X")]
    X,
}

impl SystemArg {
    fn build(self) -> Result<SwitchingSystem> {
        match self {
            SystemArg::Raw => Ok(models::raw_rotation_pair()),
            SystemArg::A => Ok(models::sys_a()),
            SystemArg::B => Ok(models::sys_b()),
            SystemArg::B0 => Ok(models::sys_b0()),
            SystemArg::X => models::sys_x(),
        }
    }
}

#[derive(Args)]
struct ComputeLambdaArgs {
    /// Estimation method
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    /// Family to analyze
    #[arg(long, value_enum, default_value_t = SystemArg::Raw)]
    system: SystemArg,
    /// Generator index for --method singleton
    #[arg(long)]
    generator: Option<usize>,
    /// Comma-separated duration grid for the product search
    /// (default: j·π/64 for j = 1…64)
    #[arg(long, allow_negative_numbers = true)]
    grid: Option<String>,
    /// Beam width for the product search
    #[arg(long, default_value_t = 64)]
    beam: usize,
    /// Product-search horizon
    #[arg(long, default_value_t = DEFAULT_PRODUCT_HORIZON)]
    horizon: f64,
    /// Agreement tolerance between the two methods
    #[arg(long, default_value_t = DEFAULT_AGREEMENT_TOL)]
    tol: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyPaperArgs {
    /// Perturb the computed exponent by this amount before shifting
    /// (demonstrates the failure detectors; ±0.05 break different items)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda_perturb: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BallSystem {
    /// Closed-form extremal norm of the freeze/decay pair
    #[value(name = "A")]
    A,
    /// Polar-table extremal norm of the shifted rotation pair
    #[value(name = "B")]
    B,
    /// Classical spiral example at its tangency constant
    #[value(name = "cgm")]
    Cgm,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct BallArgs {
    /// Which unit ball to export
    #[arg(long, value_enum)]
    system: BallSystem,
    /// Boundary sample count (angles for A/B; arc samples for cgm,
    /// whose output is the convex-hull vertex list)
    #[arg(long, default_value_t = 3600)]
    samples: usize,
    /// Output file path
    #[arg(long)]
    output: PathBuf,
    /// Output format: csv (theta,x,y) or json ([[x,y], …])
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct TrajectoryArgs {
    /// Family whose generators the schedule weighs
    #[arg(long, value_enum, default_value_t = SystemArg::A)]
    system: SystemArg,
    /// Schedule file: JSON array of {"duration": s, "weights": [w…]}
    #[arg(long)]
    schedule: PathBuf,
    /// Comma-separated initial state
    #[arg(long, allow_hyphen_values = true)]
    x0: String,
    /// Truncate the schedule at this time
    #[arg(long)]
    horizon: Option<f64>,
    /// Sample step of the CSV output
    #[arg(long, default_value_t = 1e-2)]
    step: f64,
    /// Output CSV path
    #[arg(long)]
    output: PathBuf,
}

fn exec(cli: &Cli) -> ExecResult {
    match &cli.command {
        Command::ComputeLambda(args) => cmd_compute_lambda(args),
        Command::VerifyPaper(args) => cmd_verify_paper(args),
        Command::Ball(args) => cmd_ball(args),
        Command::Trajectory(args) => cmd_trajectory(args),
    }
}

// ---------------------------------------------------------------------------
// JSON with 17-significant-digit floats
// ---------------------------------------------------------------------------

/// JSON formatter printing every finite float with 17 significant digits
/// (`d.16 more digits e±exp`), the smallest count that round-trips every
/// f64 exactly. Non-finite floats serialize as null upstream.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidInput(format!("JSON serialization failed: {e}")))?;
    String::from_utf8(buf).map_err(|e| Error::InvalidInput(format!("non-UTF-8 JSON: {e}")))
}

/// Writes `content` to `path`, surfacing I/O errors with path context.
fn write_output(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

/// Emits a JSON report: to `--output` when given, to stdout otherwise.
fn emit_json(report: &impl Serialize, output: Option<&PathBuf>) -> Result<()> {
    let json = to_json_string(report)?;
    match output {
        Some(path) => write_output(path, &json)?,
        None => println!("{json}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// compute-lambda
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ComputeLambdaReport {
    system: String,
    method: String,
    quarter_turn_rate: f64,
    bound_slack: f64,
    agreement_tolerance: f64,
    horizon: f64,
    beam: usize,
    grid: Vec<f64>,
    angular: Option<LyapunovEstimate>,
    product: Option<LyapunovEstimate>,
    singleton: Option<f64>,
    agreement_gap: Option<f64>,
    bound_check: Option<bool>,
    agreement_check: Option<bool>,
    passed: bool,
}

fn parse_grid(raw: Option<&str>) -> std::result::Result<Vec<f64>, CliFailure> {
    match raw {
        None => Ok(default_duration_grid()),
        Some(text) => {
            let mut grid = Vec::new();
            for part in text.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let d: f64 = part.parse().map_err(|_| {
                    CliFailure::Usage(format!("--grid entry {part:?} is not a number"))
                })?;
                if !d.is_finite() || d <= 0.0 {
                    return Err(CliFailure::Usage(format!(
                        "--grid durations must be positive and finite, got {d}"
                    )));
                }
                grid.push(d);
            }
            if grid.is_empty() {
                return Err(CliFailure::Usage(
                    "--grid is empty: the product search needs at least one duration".into(),
                ));
            }
            Ok(grid)
        }
    }
}

fn cmd_compute_lambda(args: &ComputeLambdaArgs) -> ExecResult {
    let sys = args.system.build()?;
    let quarter_turn_rate = 4.0f64.ln() / PI;
    let grid = parse_grid(args.grid.as_deref())?;
    let is_raw = args.system == SystemArg::Raw;

    let mut report = ComputeLambdaReport {
        system: sys.label().to_string(),
        method: String::new(),
        quarter_turn_rate,
        bound_slack: BOUND_SLACK,
        agreement_tolerance: args.tol,
        horizon: args.horizon,
        beam: args.beam,
        grid: grid.clone(),
        angular: None,
        product: None,
        singleton: None,
        agreement_gap: None,
        bound_check: None,
        agreement_check: None,
        passed: true,
    };

    match args.method {
        MethodArg::Singleton => {
            report.method = "singleton".into();
            let idx = args.generator.ok_or_else(|| {
                CliFailure::Usage("--method singleton needs --generator <index>".into())
            })?;
            if idx >= sys.n_generators() {
                return Err(CliFailure::Usage(format!(
                    "--generator {idx} out of range: system {} has {} generators",
                    sys.label(),
                    sys.n_generators()
                )));
            }
            let est = lambda_singleton(sys.generator(idx))?;
            println!(
                "singleton generator {idx} of {}: lambda = {:.16e}",
                sys.label(),
                est.lower
            );
            report.singleton = Some(est.lower);
        }
        MethodArg::Angular => {
            report.method = "angular".into();
            let est = lambda_planar_angular(&sys)?;
            print_angular(&est);
            if is_raw {
                let ok = est.lower >= quarter_turn_rate - BOUND_SLACK;
                print_bound_line(est.lower, quarter_turn_rate, ok);
                report.bound_check = Some(ok);
                report.passed = ok;
            }
            report.angular = Some(est);
        }
        MethodArg::Product => {
            report.method = "product".into();
            let est = lambda_lower_product_search(&sys, args.horizon, &grid, args.beam)?;
            print_product(&est);
            if is_raw {
                let ok = est.lower >= quarter_turn_rate - BOUND_SLACK;
                print_bound_line(est.lower, quarter_turn_rate, ok);
                report.bound_check = Some(ok);
                report.passed = ok;
            }
            report.product = Some(est);
        }
        MethodArg::Both => {
            report.method = "both".into();
            let angular = lambda_planar_angular(&sys)?;
            let product = lambda_lower_product_search(&sys, args.horizon, &grid, args.beam)?;
            print_angular(&angular);
            print_product(&product);
            let gap = (angular.lower - product.lower).abs();
            let agree = gap <= args.tol;
            println!(
                "agreement |angular − product| = {:.3e} (tolerance {:.1e}): {}",
                gap,
                args.tol,
                if agree { "ok" } else { "FAILED" }
            );
            let bound_ok = if is_raw {
                let ok = angular.lower >= quarter_turn_rate - BOUND_SLACK;
                print_bound_line(angular.lower, quarter_turn_rate, ok);
                report.bound_check = Some(ok);
                ok
            } else {
                true
            };
            report.agreement_gap = Some(gap);
            report.agreement_check = Some(agree);
            report.angular = Some(angular);
            report.product = Some(product);
            report.passed = agree && bound_ok;
        }
    }

    emit_json(&report, args.output.as_ref())?;
    Ok(if report.passed { 0 } else { 1 })
}

fn print_angular(est: &LyapunovEstimate) {
    println!("angular method:  lambda = {:.16e}", est.lower);
}

fn print_product(est: &LyapunovEstimate) {
    println!(
        "product search:  lambda >= {:.16e} (effective horizon {:.6}, beam {})",
        est.lower, est.budget.horizon, est.budget.beam_width
    );
}

fn print_bound_line(lambda: f64, rate: f64, ok: bool) {
    println!(
        "quarter-turn cycle rate log(4)/pi = {:.16e}; lambda >= rate - 1e-9: {}",
        rate,
        if ok { "ok" } else { "FAILED" }
    );
    if ok {
        println!("margin above the cycle rate: {:.6e}", lambda - rate);
    }
}

// ---------------------------------------------------------------------------
// verify-paper
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ChecklistItem {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyReport {
    lambda_base: f64,
    lambda_perturbation: f64,
    lambda_used: f64,
    quarter_turn_rate: f64,
    marginal_horizon: f64,
    marginal_beam: usize,
    flatness_horizon: f64,
    flatness_beam: usize,
    flatness_samples: usize,
    flatness_tolerance: f64,
    certificate_samples: usize,
    hull_samples: usize,
    table_resolution: usize,
    items: Vec<ChecklistItem>,
    passed: bool,
}

/// The rotation pair shifted by an arbitrary exponent (the library's
/// `models::sys_b` fixes the computed λ; verification also needs the
/// deliberately mis-shifted variants).
fn shifted_pair(lambda: f64, label: &str) -> Result<SwitchingSystem> {
    let shift = Mat::identity(2).scale(lambda);
    SwitchingSystem::new(
        vec![models::c0().sub(&shift), models::c1().sub(&shift)],
        label,
    )
}

fn shifted_hull0(lambda: f64) -> Result<SwitchingSystem> {
    let shift = Mat::identity(2).scale(lambda);
    SwitchingSystem::new(
        vec![
            Mat::zeros(2),
            models::c0().sub(&shift),
            models::c1().sub(&shift),
        ],
        "B0",
    )
}

/// The 4-dimensional tensor family assembled from a given shift.
fn tensor_family(lambda: f64) -> Result<SwitchingSystem> {
    let b = shifted_pair(lambda, "B")?;
    let eye = Mat::identity(2);
    let a0_part = kron(&models::a0(), &eye)?;
    let x0 = a0_part.add(&kron(&eye, b.generator(0))?);
    let x1 = a0_part.add(&kron(&eye, b.generator(1))?);
    let x2 = kron(&models::a1(), &eye)?;
    SwitchingSystem::new(vec![x0, x1, x2], "X")
}

fn cmd_verify_paper(args: &VerifyPaperArgs) -> ExecResult {
    let lambda_base = models::lambda();
    let lambda_used = lambda_base + args.lambda_perturb;
    let mut items: Vec<ChecklistItem> = Vec::new();
    let push = |items: &mut Vec<ChecklistItem>, name: &'static str, passed: bool, detail: String| {
        println!("{} {:32} {}", if passed { "PASS" } else { "FAIL" }, name, detail);
        items.push(ChecklistItem { name, passed, detail });
    };

    // 1. Build the tensor family from the (possibly perturbed) exponent.
    let sys_x = tensor_family(lambda_used)?;
    push(
        &mut items,
        "build_tensor_family",
        true,
        format!(
            "3 generators of dimension 4 at shift {:.16e}{}",
            lambda_used,
            if args.lambda_perturb != 0.0 {
                format!(" (perturbed by {:+.2e})", args.lambda_perturb)
            } else {
                String::new()
            }
        ),
    );

    // 2. Irreducibility via the closure rank of the generated algebra.
    let rank = algebra_closure_rank(&sys_x)?;
    push(
        &mut items,
        "algebra_closure_rank",
        rank == 16,
        format!("rank {rank} of 16 (full matrix algebra ⇒ irreducible)"),
    );

    // 3. Hurwitz at the vertices and across sampled hull points.
    {
        let mut worst = f64::NEG_INFINITY;
        let mut count = 0usize;
        for i in 0..sys_x.n_generators() {
            worst = worst.max(spectral_abscissa(sys_x.generator(i))?);
            count += 1;
        }
        for w in simplex_points(sys_x.n_generators(), VERIFY_HULL_SAMPLES, VERIFY_HULL_SEED)? {
            worst = worst.max(spectral_abscissa(&sys_x.combine(&w)?)?);
            count += 1;
        }
        push(
            &mut items,
            "hurwitz_vertices_and_hull",
            worst < 0.0,
            format!("{count} hull matrices, spectral abscissa <= {worst:.6e}"),
        );
    }

    // 4. Quarter-turn product identity: ‖Pⁿ‖ = 4ⁿ for the raw half-turn
    //    product P = e^{(π/2)C₀} e^{(π/2)C₁}.
    {
        let p = expm(&models::c0(), PI / 2.0)?.mul(&expm(&models::c1(), PI / 2.0)?);
        let mut power = Mat::identity(2);
        let mut max_defect: f64 = 0.0;
        for n in 1..=10u32 {
            power = p.mul(&power);
            let expected = 4.0f64.powi(n as i32);
            max_defect = max_defect.max((opnorm(&power) - expected).abs() / expected);
        }
        push(
            &mut items,
            "quarter_turn_products",
            max_defect <= 1e-9,
            format!("max relative defect {max_defect:.3e} over n = 1…10"),
        );
    }

    // 5. Marginal stability of the shifted pair: the best product rate
    //    over the horizon must be nonnegative (subadditivity) yet inside
    //    the transient band log(R_max/R_min)/T̃ predicted by the
    //    unperturbed extremal ball's radius oscillation.
    {
        let band = {
            let table = match norm_b_build(&models::sys_b(), 1024)? {
                NormModel::PolarTable(t) => t,
                other => {
                    return Err(CliFailure::Runtime(Error::InvalidInput(format!(
                        "unexpected norm model {}",
                        other.label()
                    ))))
                }
            };
            let (mut r_min, mut r_max) = (f64::INFINITY, f64::NEG_INFINITY);
            for (_, r) in table.nodes() {
                r_min = r_min.min(r);
                r_max = r_max.max(r);
            }
            (r_max / r_min).ln()
        };
        let sys_b = shifted_pair(lambda_used, "B")?;
        let est = lambda_lower_product_search(
            &sys_b,
            VERIFY_MARGINAL_HORIZON,
            &default_duration_grid(),
            VERIFY_MARGINAL_BEAM,
        )?;
        let rate = est.lower;
        let t_eff = est.budget.horizon;
        let upper = band / t_eff + 1e-4;
        let (passed, detail) = if rate > upper {
            (
                false,
                format!(
                    "product-norm growth detected: a_T/T = {rate:.4e} > {upper:.4e} \
                     (marginal stability violated, exponent >= {:.3e})",
                    rate - band / t_eff
                ),
            )
        } else if rate < -1e-9 {
            (
                false,
                format!(
                    "best product decays (a_T/T = {rate:.4e} < 0): \
                     inconsistent with a zero exponent"
                ),
            )
        } else {
            (
                true,
                format!("a_T/T = {rate:.4e} within the marginal band [-1e-9, {upper:.4e}]"),
            )
        };
        push(&mut items, "marginal_stability_products", passed, detail);
    }

    // 6. Extremal certificate for the closed-form norm on the
    //    freeze/decay pair (unaffected by the shift).
    {
        let cert = lambda_upper_extremal(&models::sys_a(), |v| norm_a(v), 0.0, VERIFY_CERT_SAMPLES)?;
        push(
            &mut items,
            "extremal_certificate_norm_a",
            cert.passed,
            format!("max increase {:.3e} over {} samples", cert.max_increase, cert.samples),
        );
    }

    // 7. Polar-table construction and extremal certificate for the
    //    shifted pair (and its hull with the zero generator). A wrong
    //    shift is caught here: the radius profile cannot close.
    {
        let sys_b = shifted_pair(lambda_used, "B")?;
        match norm_b_build(&sys_b, VERIFY_TABLE_RESOLUTION) {
            Err(e) => push(&mut items, "extremal_certificate_norm_b", false, e.to_string()),
            Ok(model) => {
                let mut worst = f64::NEG_INFINITY;
                let mut all = true;
                for sys in [sys_b, shifted_hull0(lambda_used)?] {
                    let cert =
                        lambda_upper_extremal(&sys, |v| model.value(v), 0.0, VERIFY_CERT_SAMPLES)?;
                    all &= cert.passed;
                    worst = worst.max(cert.max_increase);
                }
                let closure = match &model {
                    NormModel::PolarTable(t) => t.closure_residual(),
                    _ => unreachable!("norm_b_build returns a polar table"),
                };
                push(
                    &mut items,
                    "extremal_certificate_norm_b",
                    all,
                    format!(
                        "closure residual {closure:.3e}; max increase {worst:.3e} \
                         across both hulls"
                    ),
                );
            }
        }
    }

    // 8. Flat-segment probe of the finite-horizon norm on the 4D family.
    {
        let norm = NormModel::FiniteHorizon(FiniteHorizonNorm::build(
            &sys_x,
            VERIFY_FLATNESS_HORIZON,
            VERIFY_FLATNESS_BEAM,
        )?);
        let report = flatness_check(&norm, 1.0, &[1.0, 0.0], VERIFY_FLATNESS_SAMPLES)?;
        push(
            &mut items,
            "flatness_4d_segment",
            report.max_rel_deviation <= VERIFY_FLATNESS_TOL,
            format!(
                "max relative deviation {:.3e} over {} probes (midpoint norm {:.6})",
                report.max_rel_deviation, report.samples, report.midpoint_value
            ),
        );
    }

    let passed = items.iter().all(|i| i.passed);
    let report = VerifyReport {
        lambda_base,
        lambda_perturbation: args.lambda_perturb,
        lambda_used,
        quarter_turn_rate: 4.0f64.ln() / PI,
        marginal_horizon: VERIFY_MARGINAL_HORIZON,
        marginal_beam: VERIFY_MARGINAL_BEAM,
        flatness_horizon: VERIFY_FLATNESS_HORIZON,
        flatness_beam: VERIFY_FLATNESS_BEAM,
        flatness_samples: VERIFY_FLATNESS_SAMPLES,
        flatness_tolerance: VERIFY_FLATNESS_TOL,
        certificate_samples: VERIFY_CERT_SAMPLES,
        hull_samples: VERIFY_HULL_SAMPLES,
        table_resolution: VERIFY_TABLE_RESOLUTION,
        items,
        passed,
    };
    emit_json(&report, args.output.as_ref())?;
    if !passed {
        let failing: Vec<&str> = report
            .items
            .iter()
            .filter(|i| !i.passed)
            .map(|i| i.name)
            .collect();
        eprintln!("verification failed: {}", failing.join(", "));
        return Ok(1);
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// ball
// ---------------------------------------------------------------------------

fn cmd_ball(args: &BallArgs) -> ExecResult {
    if args.samples < 8 {
        return Err(CliFailure::Usage(format!(
            "--samples must be at least 8, got {}",
            args.samples
        )));
    }
    // Rows of (theta, x, y) on the unit-ball boundary.
    let rows: Vec<[f64; 3]> = match args.system {
        BallSystem::A => (0..args.samples)
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / args.samples as f64;
                let v = [theta.cos(), theta.sin()];
                let n = norm_a(&v);
                [theta, v[0] / n, v[1] / n]
            })
            .collect(),
        BallSystem::B => {
            let table = match norm_b_build(&models::sys_b(), VERIFY_TABLE_RESOLUTION)? {
                NormModel::PolarTable(t) => t,
                other => {
                    return Err(CliFailure::Runtime(Error::InvalidInput(format!(
                        "unexpected norm model {}",
                        other.label()
                    ))))
                }
            };
            (0..args.samples)
                .map(|k| {
                    let theta = 2.0 * PI * k as f64 / args.samples as f64;
                    let r = table.radius_at(theta);
                    [theta, r * theta.cos(), r * theta.sin()]
                })
                .collect()
        }
        BallSystem::Cgm => {
            let mut rows: Vec<[f64; 3]> = cgm_ball_polyline(args.samples)?
                .into_iter()
                .map(|[x, y]| [y.atan2(x).rem_euclid(2.0 * PI), x, y])
                .collect();
            rows.sort_by(|a, b| a[0].total_cmp(&b[0]));
            rows
        }
    };

    let content = match args.format {
        FormatArg::Csv => {
            let mut out = String::from("theta,x,y\n");
            for [theta, x, y] in &rows {
                out.push_str(&format!("{theta:.16e},{x:.16e},{y:.16e}\n"));
            }
            out
        }
        FormatArg::Json => {
            let pairs: Vec<[f64; 2]> = rows.iter().map(|r| [r[1], r[2]]).collect();
            to_json_string(&pairs)?
        }
    };
    write_output(&args.output, &content)?;
    println!(
        "wrote {} boundary points for system {} to {}",
        rows.len(),
        match args.system {
            BallSystem::A => "A",
            BallSystem::B => "B",
            BallSystem::Cgm => "cgm",
        },
        args.output.display()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// trajectory
// ---------------------------------------------------------------------------

#[derive(serde::Deserialize)]
struct SchedulePieceFile {
    duration: f64,
    weights: Vec<f64>,
}

/// Tolerance for schedule-file weights: entries may be off the simplex by
/// this much and are renormalized before use.
const SCHEDULE_FILE_SIMPLEX_TOL: f64 = 1e-9;

fn parse_schedule_file(path: &Path, n_weights: usize) -> Result<Schedule> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    let pieces: Vec<SchedulePieceFile> = serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: format!("{}: {}", path.display(), e),
    })?;
    if pieces.is_empty() {
        return Err(Error::invalid(format!(
            "{}: schedule file contains no pieces",
            path.display()
        )));
    }
    let mut schedule = Schedule::new(n_weights);
    for (i, piece) in pieces.iter().enumerate() {
        if piece.weights.len() != n_weights {
            return Err(Error::dims(format!(
                "schedule piece {i}: {} weights for a {n_weights}-generator family",
                piece.weights.len()
            )));
        }
        let sum: f64 = piece.weights.iter().sum();
        if (sum - 1.0).abs() > SCHEDULE_FILE_SIMPLEX_TOL
            || piece.weights.iter().any(|w| *w < -SCHEDULE_FILE_SIMPLEX_TOL || !w.is_finite())
        {
            return Err(Error::invalid(format!(
                "schedule piece {i}: weights {:?} are not on the probability simplex \
                 (tolerance {SCHEDULE_FILE_SIMPLEX_TOL:.0e})",
                piece.weights
            )));
        }
        // Renormalize exactly onto the simplex before the strict
        // library-level validation.
        let cleaned: Vec<f64> = piece.weights.iter().map(|w| w.max(0.0) / sum).collect();
        schedule.push(piece.duration, &cleaned).map_err(|e| {
            Error::invalid(format!("schedule piece {i}: {e}"))
        })?;
    }
    Ok(schedule)
}

fn parse_x0(raw: &str) -> std::result::Result<Vec<f64>, CliFailure> {
    let mut x0 = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v: f64 = part
            .parse()
            .map_err(|_| CliFailure::Usage(format!("--x0 entry {part:?} is not a number")))?;
        if !v.is_finite() {
            return Err(CliFailure::Usage("--x0 entries must be finite".into()));
        }
        x0.push(v);
    }
    if x0.is_empty() {
        return Err(CliFailure::Usage("--x0 is empty".into()));
    }
    Ok(x0)
}

fn cmd_trajectory(args: &TrajectoryArgs) -> ExecResult {
    let sys = args.system.build()?;
    let x0 = parse_x0(&args.x0)?;
    if x0.len() != sys.dim() {
        return Err(CliFailure::Usage(format!(
            "--x0 has {} entries but system {} has dimension {}",
            x0.len(),
            sys.label(),
            sys.dim()
        )));
    }
    let mut schedule = parse_schedule_file(&args.schedule, sys.n_generators())?;
    if let Some(t) = args.horizon {
        schedule = schedule.truncated(t)?;
    }
    let opts = EvolveOptions {
        sample_step: Some(args.step),
    };
    let traj = evolve(&sys, &schedule, &x0, &opts)?;

    let mut out = String::from("t");
    for i in 1..=sys.dim() {
        out.push_str(&format!(",x{i}"));
    }
    out.push('\n');
    for i in 0..traj.len() {
        out.push_str(&format!("{:.16e}", traj.times()[i]));
        for &c in traj.state(i) {
            out.push_str(&format!(",{c:.16e}"));
        }
        out.push('\n');
    }
    write_output(&args.output, &out)?;
    println!(
        "wrote {} samples over [0, {:.6}] to {}",
        traj.len(),
        schedule.total_duration(),
        args.output.display()
    );
    Ok(0)
}
