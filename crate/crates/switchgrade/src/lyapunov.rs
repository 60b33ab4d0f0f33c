//! Estimation of the top Lyapunov exponent of a linear switching system.
//!
//! The top exponent Λ of a generator family is the worst-case exponential
//! growth rate over all measurable switching laws. Three complementary
//! estimators live here:
//!
//! * **Product search** ([`lambda_lower_product_search`]): by the
//!   product-form characterization of Λ, the rate is the limit over growing
//!   horizons `T` of the best value `(1/T)·log‖e^{t_k A_{i_k}} ⋯ e^{t_1
//!   A_{i_1}}‖` over vertex schedules with `Σ t_j = T`. We search that
//!   space with a beam search over products whose segment durations come
//!   from a finite grid, bucketing partial products by accumulated time.
//!   For finite `T` the searched maximum can land on *either* side of Λ:
//!   it underestimates by grid/beam quantization, and overestimates by the
//!   transient `(1/T)·log(R_max/R_min)` where `R` is the radius profile of
//!   an extremal norm (the value `sup_T` of the exact maximum is reached
//!   from above). Both effects shrink like `1/T`.
//!
//! * **Planar angular reduction** ([`lambda_planar_angular`]): for a pair
//!   of 2×2 generators that both rotate the plane strictly in the same
//!   direction, pass to polar coordinates. Writing `ρ_u(θ)` and `ω_u(θ)`
//!   for the radial and angular rates of generator `u`,
//!
//!   ```text
//!   F(λ) = ∮ max_u (ρ_u(θ) − λ) / ω_u(θ) dθ
//!   ```
//!
//!   is strictly decreasing in λ, and Λ is its unique root: θ(t) is
//!   monotone for every admissible control, log-radius gain per unit angle
//!   equals (ρ−λ)/ω, and the pointwise vertex maximization is optimal
//!   because the gain is a ratio of functions affine in the control weight,
//!   hence monotone in it. The root is bracketed and bisected to 1e−10
//!   with composite-Simpson quadrature.
//!
//! * **Extremal-norm certificates** ([`lambda_upper_extremal`]): a norm
//!   with `e^{−μt}·norm(x(t))` non-increasing along every trajectory
//!   certifies Λ ≤ μ. By the vertex-wise criterion it suffices to check
//!   monotonicity along the flows of the generators alone; the check runs
//!   over a deterministic sphere sample and a fixed time grid and returns
//!   a witness on failure instead of an error.
//!
//! [`lambda_calculus_checks`] cross-validates the searches against the
//! calculus of exponents (monotonicity under inclusion, union maxima, and
//! subadditivity of sums for commuting families).

use crate::error::{Error, Result};
use crate::matexp::{expm, opnorm, Mat};
use crate::sampling::sphere_points;
use crate::system::{Schedule, SwitchingSystem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Bisection stops when the bracketing interval is narrower than this.
const ANGULAR_BISECTION_TOL: f64 = 1e-10;
/// Composite-Simpson intervals for each evaluation of `F(λ)` (so 2¹⁴ + 1
/// quadrature nodes).
const ANGULAR_QUADRATURE_INTERVALS: usize = 1 << 14;
/// Grid size for validating strict positivity of the angular rates.
const OMEGA_POSITIVITY_GRID: usize = 10_000;
/// Time horizon of the per-generator monotonicity scan in certificates.
const EXTREMAL_T_MAX: f64 = 5.0;
/// Time step of that scan.
const EXTREMAL_T_STEP: f64 = 1e-2;
/// Allowed increase per step before a certificate counts as violated.
const EXTREMAL_SLACK: f64 = 1e-9;
/// Relative tolerance when snapping grid durations to multiples of the gcd.
const GRID_COMMENSURABILITY_TOL: f64 = 1e-9;
/// Upper bound on the number of time buckets a search may allocate.
const MAX_BUCKETS: usize = 2_000_000;
/// Horizon used by [`lambda_calculus_checks`] for its internal searches.
const CALCULUS_HORIZON: f64 = 8.0 * PI;
/// Beam width used by [`lambda_calculus_checks`].
const CALCULUS_BEAM: usize = 24;
/// Agreement slack for the calculus cross-checks (search methods carry
/// finite-horizon transients of roughly `log(R_max/R_min)/T`).
pub const CALCULUS_SLACK: f64 = 5e-3;

/// Which estimator produced a [`LyapunovEstimate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ProductSearch,
    PlanarAngular,
    ExtremalCertificate,
    Singleton,
}

/// Search/quadrature parameters actually spent producing an estimate.
/// Fields irrelevant to a method are zero/empty.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchBudget {
    /// Effective total product duration searched (product search). When the
    /// requested horizon is not an exact multiple of the grid gcd this is
    /// the largest achievable duration below it.
    pub horizon: f64,
    /// Beam width (product search).
    pub beam_width: usize,
    /// Segment durations searched over (product search).
    pub duration_grid: Vec<f64>,
    /// Quadrature nodes per integral evaluation (angular method).
    pub quadrature_nodes: usize,
    /// Root/scan tolerance the method iterated to.
    pub tolerance: f64,
    /// Matrix products examined (search) or norm evaluations (certificate).
    pub products_examined: u64,
}

/// Two-sided (or half-open) bracket on the top Lyapunov exponent.
#[derive(Clone, Debug, Serialize)]
pub struct LyapunovEstimate {
    /// Best certified-from-below value (`−∞` for pure upper bounds).
    pub lower: f64,
    /// Best certified-from-above value (`+∞` when the method provides none).
    pub upper: f64,
    /// Which estimator produced this value.
    pub method: Method,
    /// Parameters spent.
    pub budget: SearchBudget,
}

impl LyapunovEstimate {
    fn new(lower: f64, upper: f64, method: Method, budget: SearchBudget) -> Self {
        debug_assert!(
            lower <= upper + 1e-9,
            "estimate bracket inverted: lower {lower} > upper {upper}"
        );
        LyapunovEstimate {
            lower,
            upper,
            method,
            budget,
        }
    }
}

/// Exact exponent of a single-matrix system: its spectral abscissa.
pub fn lambda_singleton(a: &Mat) -> Result<LyapunovEstimate> {
    let mu = crate::spectral::spectral_abscissa(a)?;
    Ok(LyapunovEstimate::new(
        mu,
        mu,
        Method::Singleton,
        SearchBudget::default(),
    ))
}

// ---------------------------------------------------------------------------
// Polar reduction
// ---------------------------------------------------------------------------

/// Radial and angular rates of a planar generator family in polar form.
///
/// For a generator `A` and the unit vector `r(θ) = (cos θ, sin θ)ᵀ`,
///
/// ```text
/// ρ(θ) = ⟨A r(θ), r(θ)⟩         (log-radius rate)
/// ω(θ) = ⟨A r(θ), r(θ + π/2)⟩   (angular rate)
/// ```
///
/// Both are quadratic forms in `(cos θ, sin θ)`, stored per generator as
/// coefficients of the basis `{1, cos²θ, sin²θ, sinθ·cosθ}`; both are
/// π-periodic by construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolarField {
    rho: Vec<[f64; 4]>,
    omega: Vec<[f64; 4]>,
}

impl PolarField {
    /// Extracts the polar rates of every generator of a planar system.
    pub fn from_system(sys: &SwitchingSystem) -> Result<Self> {
        if sys.dim() != 2 {
            return Err(Error::dims(format!(
                "polar reduction needs 2×2 generators, got dimension {}",
                sys.dim()
            )));
        }
        let mut rho = Vec::new();
        let mut omega = Vec::new();
        for g in sys.generators() {
            let (a11, a12, a21, a22) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
            rho.push([0.0, a11, a22, a12 + a21]);
            omega.push([0.0, a21, -a12, a22 - a11]);
        }
        Ok(PolarField { rho, omega })
    }

    /// Number of generators covered.
    pub fn n_generators(&self) -> usize {
        self.rho.len()
    }

    fn eval(coeffs: &[f64; 4], theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        coeffs[0] + coeffs[1] * c * c + coeffs[2] * s * s + coeffs[3] * s * c
    }

    /// Radial rate of generator `u` at angle `theta`.
    pub fn rho(&self, u: usize, theta: f64) -> f64 {
        Self::eval(&self.rho[u], theta)
    }

    /// Angular rate of generator `u` at angle `theta`.
    pub fn omega(&self, u: usize, theta: f64) -> f64 {
        Self::eval(&self.omega[u], theta)
    }

    /// Verifies `ω_u(θ) > 0` for every generator on a dense angle grid —
    /// the standing hypothesis of the angular method (all controls rotate
    /// the plane the same way).
    pub fn validate_positive_rotation(&self) -> Result<()> {
        for u in 0..self.n_generators() {
            for k in 0..OMEGA_POSITIVITY_GRID {
                let theta = 2.0 * PI * k as f64 / OMEGA_POSITIVITY_GRID as f64;
                let w = self.omega(u, theta);
                if w <= 0.0 {
                    return Err(Error::MethodInapplicable(format!(
                        "angular rate of generator {u} is {w:.3e} ≤ 0 at θ = {theta:.6}; \
                         the angular method needs uniformly positive rotation"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Composite Simpson rule with `n` (even) intervals on `[a, b]`.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Exact-to-tolerance exponent of a two-generator planar system with
/// uniformly positive rotation, via the polar (angular) reduction.
///
/// Solves `F(λ) = ∮ max_u (ρ_u − λ)/ω_u dθ = 0` by bisection; `F` is
/// strictly decreasing, so the root is unique. Returns a two-sided
/// estimate `lower = upper = λ*`.
pub fn lambda_planar_angular(sys: &SwitchingSystem) -> Result<LyapunovEstimate> {
    if sys.dim() != 2 || sys.n_generators() != 2 {
        return Err(Error::invalid(format!(
            "angular method handles exactly two 2×2 generators, got {} of dimension {}",
            sys.n_generators(),
            sys.dim()
        )));
    }
    let field = PolarField::from_system(sys)?;
    field.validate_positive_rotation()?;

    let f = |lambda: f64| {
        simpson(
            &|theta| {
                (0..2)
                    .map(|u| (field.rho(u, theta) - lambda) / field.omega(u, theta))
                    .fold(f64::NEG_INFINITY, f64::max)
            },
            0.0,
            2.0 * PI,
            ANGULAR_QUADRATURE_INTERVALS,
        )
    };

    // |ρ_u| ≤ ‖A_u‖ pointwise, so the root lies strictly inside this bracket.
    let bound = sys.max_generator_norm() + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(Error::Inconclusive(format!(
            "F(λ) does not bracket a root on [{lo}, {hi}]"
        )));
    }
    while hi - lo >= ANGULAR_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    Ok(LyapunovEstimate::new(
        lambda,
        lambda,
        Method::PlanarAngular,
        SearchBudget {
            quadrature_nodes: ANGULAR_QUADRATURE_INTERVALS + 1,
            tolerance: ANGULAR_BISECTION_TOL,
            ..SearchBudget::default()
        },
    ))
}

// ---------------------------------------------------------------------------
// Product search
// ---------------------------------------------------------------------------

/// The default segment-duration grid `{π/64 · j : j = 1…64}`. It contains
/// `π/2` exactly, so the quarter-turn witness products of the built-in
/// rotation pair are representable.
pub fn default_duration_grid() -> Vec<f64> {
    (1..=64).map(|j| j as f64 * PI / 64.0).collect()
}

/// Euclid's algorithm on positive reals with an absolute floor; returns a
/// value `g` such that every input is (approximately) an integer multiple
/// of `g`.
fn float_gcd(values: &[f64]) -> f64 {
    let mut g = values[0];
    for &v in &values[1..] {
        let mut a = g.max(v);
        let mut b = g.min(v);
        while b > GRID_COMMENSURABILITY_TOL {
            let r = (a - b * (a / b).round()).abs();
            a = b;
            b = r;
        }
        g = a;
    }
    g
}

/// Validates a duration grid and reduces it to (gcd, sorted unique
/// multipliers of the gcd).
fn parse_duration_grid(durations: &[f64]) -> Result<(f64, Vec<usize>)> {
    if durations.is_empty() {
        return Err(Error::invalid("duration grid is empty"));
    }
    for &d in durations {
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::invalid(format!(
                "duration grid entries must be positive and finite, got {d}"
            )));
        }
    }
    let g = float_gcd(durations);
    if g <= 1e-7 {
        return Err(Error::invalid(
            "duration grid entries have no usable common divisor (are they commensurable?)",
        ));
    }
    let mut mults: Vec<usize> = Vec::with_capacity(durations.len());
    for &d in durations {
        let m = (d / g).round();
        if (d - m * g).abs() > GRID_COMMENSURABILITY_TOL * d.max(1.0) {
            return Err(Error::invalid(format!(
                "duration {d} is not a multiple of the grid gcd {g}"
            )));
        }
        mults.push(m as usize);
    }
    mults.sort_unstable();
    mults.dedup();
    Ok((g, mults))
}

/// One partial product kept in a beam bucket. The matrix is stored
/// normalized to unit operator norm; `log_norm` carries the accumulated
/// `log‖product‖` (the telescoping is exact, and it keeps long expanding
/// products away from overflow).
#[derive(Clone)]
struct BeamEntry {
    mat: Mat,
    log_norm: f64,
    parent_bucket: u32,
    parent_index: u32,
    generator: u16,
    multiplier: u32,
}

const ROOT_GENERATOR: u16 = u16::MAX;

/// Full state of one beam-search run: every bucket's kept entries (for
/// witness backtracking and product extraction).
struct BeamSearchRun {
    kept: Vec<Vec<BeamEntry>>,
    base: f64,
    n_target: usize,
    mults: Vec<usize>,
    products_examined: u64,
    /// True when some bucket had more candidates than the beam kept — the
    /// searched maximum is then only a lower envelope of the grid maximum.
    pruned: bool,
}

impl BeamSearchRun {
    fn effective_t(&self) -> f64 {
        self.n_target as f64 * self.base
    }
}

/// The beam-search DP shared by the estimate API and the finite-horizon
/// norm construction.
///
/// Partial products are bucketed by accumulated duration in integer units
/// of the grid gcd; each bucket keeps the `beam` candidates of largest
/// operator norm. Runs of one generator are decomposed canonically
/// (maximal segments first), so the same product matrix is not searched
/// under several segmentations. Candidate order is deterministic and the
/// parallel norm evaluation preserves it, so results are reproducible
/// regardless of thread count.
fn run_beam_search(
    sys: &SwitchingSystem,
    t_end: f64,
    durations: &[f64],
    beam: usize,
) -> Result<BeamSearchRun> {
    if beam == 0 {
        return Err(Error::invalid("beam width must be at least 1"));
    }
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::invalid(format!("horizon must be positive, got {t_end}")));
    }
    let (base, mults) = parse_duration_grid(durations)?;
    let n_target = (t_end / base + 1e-9).floor() as usize;
    if n_target == 0 {
        return Err(Error::invalid(format!(
            "horizon {t_end} is shorter than the smallest grid duration {base}"
        )));
    }
    if n_target > MAX_BUCKETS {
        return Err(Error::invalid(format!(
            "horizon/grid combination needs {n_target} buckets (limit {MAX_BUCKETS})"
        )));
    }
    let max_mult = *mults.last().expect("grid is nonempty");
    let n_gens = sys.n_generators();

    // Segment bank: e^{m·g·A_i} computed directly per (generator, multiplier)
    // so segment matrices carry one expm error each, not m of them.
    let mut segments: Vec<Vec<Mat>> = Vec::with_capacity(n_gens);
    for i in 0..n_gens {
        let mut per_gen = Vec::with_capacity(mults.len());
        for &m in &mults {
            per_gen.push(expm(sys.generator(i), m as f64 * base)?);
        }
        segments.push(per_gen);
    }

    let root = BeamEntry {
        mat: Mat::identity(sys.dim()),
        log_norm: 0.0,
        parent_bucket: 0,
        parent_index: 0,
        generator: ROOT_GENERATOR,
        multiplier: 0,
    };
    let mut kept: Vec<Vec<BeamEntry>> = vec![Vec::new(); n_target + 1];
    kept[0] = vec![root];
    let mut products_examined: u64 = 0;
    let mut pruned = false;

    for bucket in 1..=n_target {
        // Deterministic candidate order: multiplier ascending, source-entry
        // order, generator ascending.
        let mut candidates: Vec<BeamEntry> = Vec::new();
        for (mi, &m) in mults.iter().enumerate() {
            if m > bucket {
                break;
            }
            let src = bucket - m;
            for (idx, e) in kept[src].iter().enumerate() {
                for i in 0..n_gens {
                    let extends_run = e.generator == i as u16;
                    if extends_run && (e.multiplier as usize) != max_mult {
                        continue; // canonical run decomposition
                    }
                    candidates.push(BeamEntry {
                        mat: segments[i][mi].mul(&e.mat),
                        log_norm: e.log_norm, // parent's share; own factor added below
                        parent_bucket: src as u32,
                        parent_index: idx as u32,
                        generator: i as u16,
                        multiplier: m as u32,
                    });
                }
            }
        }
        if candidates.is_empty() {
            continue;
        }
        products_examined += candidates.len() as u64;
        pruned |= candidates.len() > beam;

        // ‖segment · (P/‖P‖)‖ = ‖segment · P‖ / ‖P‖, so adding log of the
        // child's own norm to the parent's accumulated log telescopes to
        // log‖full product‖ exactly.
        let norms: Vec<f64> = if candidates.len() >= 256 {
            candidates.par_iter().map(|c| opnorm(&c.mat)).collect()
        } else {
            candidates.iter().map(|c| opnorm(&c.mat)).collect()
        };
        let mut order: Vec<usize> = (0..candidates.len()).collect();
        order.sort_by(|&a, &b| {
            let va = candidates[a].log_norm + norms[a].ln();
            let vb = candidates[b].log_norm + norms[b].ln();
            vb.total_cmp(&va).then(a.cmp(&b))
        });
        order.truncate(beam);
        kept[bucket] = order
            .into_iter()
            .map(|idx| {
                let mut e = candidates[idx].clone();
                e.log_norm += norms[idx].ln();
                e.mat = e.mat.scale(1.0 / norms[idx]);
                e
            })
            .collect();
    }

    Ok(BeamSearchRun {
        kept,
        base,
        n_target,
        mults,
        products_examined,
        pruned,
    })
}

/// Lower-bound estimate for Λ by beam search over vertex-schedule products,
/// together with the best schedule found (earliest segment first).
pub fn lambda_lower_product_search_with_witness(
    sys: &SwitchingSystem,
    t_end: f64,
    durations: &[f64],
    beam: usize,
) -> Result<(LyapunovEstimate, Schedule)> {
    let run = run_beam_search(sys, t_end, durations, beam)?;
    let effective_t = run.effective_t();
    let best = run.kept[run.n_target].first().ok_or_else(|| {
        Error::Inconclusive(format!(
            "no product of total duration {effective_t} is expressible with the given grid"
        ))
    })?;
    let lower = best.log_norm / effective_t;

    // Backtrack the winning sequence (stored child → parent, i.e. reverse
    // chronological order).
    let mut segments_rev: Vec<(f64, usize)> = Vec::new();
    let (mut b, mut i) = (run.n_target, 0usize);
    while b > 0 {
        let e = &run.kept[b][i];
        segments_rev.push((e.multiplier as f64 * run.base, e.generator as usize));
        let (pb, pi) = (e.parent_bucket as usize, e.parent_index as usize);
        b = pb;
        i = pi;
    }
    segments_rev.reverse();
    let witness = Schedule::from_vertices(sys.n_generators(), &segments_rev)?;

    let estimate = LyapunovEstimate::new(
        lower,
        f64::INFINITY,
        Method::ProductSearch,
        SearchBudget {
            horizon: effective_t,
            beam_width: beam,
            duration_grid: run.mults.iter().map(|&m| m as f64 * run.base).collect(),
            products_examined: run.products_examined,
            ..SearchBudget::default()
        },
    );
    Ok((estimate, witness))
}

/// Final-bucket products of a beam search, denormalized back to actual
/// product matrices. Used by the finite-horizon norm construction, which
/// needs the matrices themselves rather than their norms.
pub(crate) struct ProductBank {
    pub mats: Vec<Mat>,
    pub effective_t: f64,
    /// True when any bucket overflowed the beam: the bank spans only part
    /// of the reachable product set.
    pub pruned: bool,
}

/// Runs the beam search and extracts the kept endpoint products.
///
/// Intended for marginally stable systems, where accumulated `log‖P‖`
/// stays moderate; a product beyond `e^{±300}` is refused rather than
/// silently returned as an overflowed matrix.
pub(crate) fn beam_product_bank(
    sys: &SwitchingSystem,
    t_end: f64,
    durations: &[f64],
    beam: usize,
) -> Result<ProductBank> {
    let run = run_beam_search(sys, t_end, durations, beam)?;
    let entries = &run.kept[run.n_target];
    if entries.is_empty() {
        return Err(Error::Inconclusive(format!(
            "no product of total duration {} is expressible with the given grid",
            run.effective_t()
        )));
    }
    let mut mats = Vec::with_capacity(entries.len());
    for e in entries {
        if e.log_norm.abs() > 300.0 {
            return Err(Error::Overflow(format!(
                "endpoint product has log-norm {:.1}; the product bank is only \
                 meaningful for marginally stable systems",
                e.log_norm
            )));
        }
        mats.push(e.mat.scale(e.log_norm.exp()));
    }
    Ok(ProductBank {
        mats,
        effective_t: run.effective_t(),
        pruned: run.pruned,
    })
}

/// [`lambda_lower_product_search_with_witness`] without the schedule.
pub fn lambda_lower_product_search(
    sys: &SwitchingSystem,
    t_end: f64,
    durations: &[f64],
    beam: usize,
) -> Result<LyapunovEstimate> {
    lambda_lower_product_search_with_witness(sys, t_end, durations, beam).map(|(e, _)| e)
}

// ---------------------------------------------------------------------------
// Extremal-norm certificates
// ---------------------------------------------------------------------------

/// A single observed monotonicity violation: along generator `generator`
/// starting from `start`, the attenuated norm increased between the two
/// sampled times.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalViolation {
    pub generator: usize,
    pub start: Vec<f64>,
    pub t_before: f64,
    pub t_after: f64,
    pub norm_before: f64,
    pub norm_after: f64,
}

/// Result of an extremal-norm verification run.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalCertificate {
    /// True iff no sampled increase exceeded the slack.
    pub passed: bool,
    /// The attenuation rate μ that was certified (or refuted).
    pub mu: f64,
    /// Number of sphere samples scanned.
    pub samples: usize,
    /// Scan horizon and step.
    pub t_max: f64,
    pub time_step: f64,
    /// Allowed per-step increase.
    pub slack: f64,
    /// Largest increase observed across all samples/generators (may be
    /// negative when the norm strictly decreases everywhere).
    pub max_increase: f64,
    /// A concrete violating pair when `passed` is false.
    pub witness: Option<ExtremalViolation>,
}

impl ExtremalCertificate {
    /// On PASS, the certified one-sided estimate `Λ ≤ μ`.
    pub fn estimate(&self) -> Option<LyapunovEstimate> {
        self.passed.then(|| {
            LyapunovEstimate::new(
                f64::NEG_INFINITY,
                self.mu,
                Method::ExtremalCertificate,
                SearchBudget {
                    tolerance: self.slack,
                    products_examined: (self.samples as u64)
                        * ((self.t_max / self.time_step) as u64 + 1),
                    ..SearchBudget::default()
                },
            )
        })
    }
}

/// Verifies that `e^{−μt}·norm(e^{tA_i}v)` is non-increasing in `t` for
/// every generator `A_i` and a deterministic sample of unit vectors `v`.
///
/// A PASS numerically certifies that `norm` is extremal for the shifted
/// system, hence Λ(sys) ≤ μ (vertex-wise monotonicity suffices by the
/// standard convexity argument: a trajectory of the hull is a limit of
/// vertex concatenations). A FAIL carries a witness rather than an error —
/// refutation is a legitimate outcome, reported with evidence.
pub fn lambda_upper_extremal<F>(
    sys: &SwitchingSystem,
    norm: F,
    mu: f64,
    samples: usize,
) -> Result<ExtremalCertificate>
where
    F: Fn(&[f64]) -> f64,
{
    if samples == 0 {
        return Err(Error::invalid("certificate needs at least one sample"));
    }
    let points = sphere_points(sys.dim(), samples)?;
    let steps = (EXTREMAL_T_MAX / EXTREMAL_T_STEP).round() as usize;
    let decay = (-mu * EXTREMAL_T_STEP).exp();

    let mut max_increase = f64::NEG_INFINITY;
    let mut witness: Option<ExtremalViolation> = None;
    for i in 0..sys.n_generators() {
        let step_mat = expm(sys.generator(i), EXTREMAL_T_STEP)?;
        for v in &points {
            let mut x = v.clone();
            let mut atten = 1.0;
            let mut prev = norm(&x);
            for k in 1..=steps {
                x = step_mat.apply(&x);
                atten *= decay;
                let val = atten * norm(&x);
                let increase = val - prev;
                if increase > max_increase {
                    max_increase = increase;
                    if increase > EXTREMAL_SLACK {
                        witness = Some(ExtremalViolation {
                            generator: i,
                            start: v.clone(),
                            t_before: (k - 1) as f64 * EXTREMAL_T_STEP,
                            t_after: k as f64 * EXTREMAL_T_STEP,
                            norm_before: prev,
                            norm_after: val,
                        });
                    }
                }
                prev = val;
            }
        }
    }
    Ok(ExtremalCertificate {
        passed: witness.is_none(),
        mu,
        samples,
        t_max: EXTREMAL_T_MAX,
        time_step: EXTREMAL_T_STEP,
        slack: EXTREMAL_SLACK,
        max_increase,
        witness,
    })
}

// ---------------------------------------------------------------------------
// Calculus cross-checks
// ---------------------------------------------------------------------------

/// Search-based verification of the exponent calculus on a pair of
/// commuting families.
#[derive(Clone, Debug, Serialize)]
pub struct CalculusReport {
    pub passed: bool,
    pub slack: f64,
    /// Product-search lower values for the two families, their union hull,
    /// and the hull of pairwise sums.
    pub lower_a: f64,
    pub lower_b: f64,
    pub lower_union: f64,
    pub lower_sum: f64,
    /// `lower(A) ≤ lower(A ∪ B) + slack` and likewise for B (monotonicity
    /// under inclusion).
    pub monotonicity_ok: bool,
    /// `|lower(A ∪ B) − max(lower(A), lower(B))| ≤ slack` (union maximum —
    /// valid because the families commute, so mixed products factor).
    pub union_max_ok: bool,
    /// `lower(A + B) ≤ lower(A) + lower(B) + slack` (subadditivity of the
    /// exponent under commuting sums).
    pub sum_bound_ok: bool,
}

/// Runs the exponent-calculus cross-checks on two generator families whose
/// elements pairwise commute across families.
///
/// Four product searches are run with shared parameters (horizon 8π, the
/// default duration grid, beam 24): the two families, the union hull, and
/// the hull of pairwise sums. Commutation is verified first — the union
/// maximum and sum subadditivity arguments both rely on mixed products
/// factoring into per-family products.
pub fn lambda_calculus_checks(
    sys_a: &SwitchingSystem,
    sys_b: &SwitchingSystem,
) -> Result<CalculusReport> {
    if sys_a.dim() != sys_b.dim() {
        return Err(Error::dims(format!(
            "families live in different dimensions: {} vs {}",
            sys_a.dim(),
            sys_b.dim()
        )));
    }
    for (i, a) in sys_a.generators().iter().enumerate() {
        for (j, b) in sys_b.generators().iter().enumerate() {
            let comm = a.mul(b).sub(&b.mul(a));
            let scale = (opnorm(a) * opnorm(b)).max(1.0);
            if comm.max_abs() > 1e-12 * scale {
                return Err(Error::MethodInapplicable(format!(
                    "generator {i} of the first family does not commute with \
                     generator {j} of the second (‖[A,B]‖_max = {:.3e})",
                    comm.max_abs()
                )));
            }
        }
    }

    let mut union_gens: Vec<Mat> = sys_a.generators().to_vec();
    union_gens.extend_from_slice(sys_b.generators());
    let union = SwitchingSystem::new(union_gens, "union")?;

    let mut sum_gens = Vec::with_capacity(sys_a.n_generators() * sys_b.n_generators());
    for a in sys_a.generators() {
        for b in sys_b.generators() {
            sum_gens.push(a.add(b));
        }
    }
    let sum = SwitchingSystem::new(sum_gens, "sum")?;

    let grid = default_duration_grid();
    let search = |sys: &SwitchingSystem| -> Result<f64> {
        Ok(lambda_lower_product_search(sys, CALCULUS_HORIZON, &grid, CALCULUS_BEAM)?.lower)
    };
    let lower_a = search(sys_a)?;
    let lower_b = search(sys_b)?;
    let lower_union = search(&union)?;
    let lower_sum = search(&sum)?;

    let monotonicity_ok =
        lower_a <= lower_union + CALCULUS_SLACK && lower_b <= lower_union + CALCULUS_SLACK;
    let union_max_ok = (lower_union - lower_a.max(lower_b)).abs() <= CALCULUS_SLACK;
    let sum_bound_ok = lower_sum <= lower_a + lower_b + CALCULUS_SLACK;

    Ok(CalculusReport {
        passed: monotonicity_ok && union_max_ok && sum_bound_ok,
        slack: CALCULUS_SLACK,
        lower_a,
        lower_b,
        lower_union,
        lower_sum,
        monotonicity_ok,
        union_max_ok,
        sum_bound_ok,
    })
}
