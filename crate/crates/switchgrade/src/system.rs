//! Switching systems, schedules, trajectories, and the chattering lemma.
//!
//! A [`SwitchingSystem`] is a finite list of generator matrices; the system
//! evolves along `x' = A(t)x` with `A(t)` anywhere in their convex hull. Two
//! representations of the control are supported:
//!
//! * [`Schedule`] — piecewise-constant weights: a finite list of
//!   `(duration, weight vector)` pieces. This is the only representation
//!   the propagators consume; each piece advances the state by one exact
//!   matrix exponential, so a vertex schedule evolves by precisely the
//!   product `e^{t_m A_{i_m}} ⋯ e^{t_1 A_{i_1}}`.
//! * [`MeasurableLaw`] — an arbitrary measurable weight function
//!   `t ↦ α(t)` on the simplex. Laws enter the computational pipeline only
//!   through [`chatter_discretize`], which splits `[0, T]` into `k` equal
//!   windows and replaces the law inside each window by consecutive vertex
//!   pieces whose durations are the window integrals `∫ α_i`. The endpoint
//!   error obeys an explicit bound; [`required_k`] inverts that bound:
//!
//! ```text
//!     C = 1/T + max_i ‖A_i‖,   K = C·e^{CT}·‖x(0)‖,
//!     ‖x(T) − x_k(T)‖ ≤ ε  whenever  1/k ≤ ε / (4·C·K·T·e^{CT}).
//! ```
//!
//! The bound is deliberately conservative — it certifies *every* measurable
//! law — so `required_k` grows like `e^{2CT}/ε`. For well-behaved laws the
//! observed error is far smaller; the acceptance tests exercise both the
//! certified count and the empirical convergence.

use crate::error::{Error, Result};
use crate::matexp::{expm, opnorm, Mat};

/// Largest supported number of generators (stack buffers in the hot
/// integration loops are sized by this).
pub const MAX_GENERATORS: usize = 8;

/// Tolerance for schedule weight vectors lying on the probability simplex.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Looser simplex tolerance for user-supplied measurable laws (their
/// closures typically compute weights with a few rounding errors).
pub const LAW_SIMPLEX_TOL: f64 = 1e-9;

/// Absolute tolerance for the per-window adaptive quadrature inside
/// [`chatter_discretize`].
pub const WINDOW_QUAD_TOL: f64 = 1e-10;

/// Default time step at which [`evolve`] samples the state inside pieces.
pub const DEFAULT_SAMPLE_STEP: f64 = 1e-2;

/// A finite family of generator matrices acting by convex combination.
#[derive(Clone, Debug)]
pub struct SwitchingSystem {
    generators: Vec<Mat>,
    label: String,
}

impl SwitchingSystem {
    /// Builds a system from its generator list.
    pub fn new(generators: Vec<Mat>, label: impl Into<String>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::invalid("a switching system needs ≥ 1 generator"));
        }
        if generators.len() > MAX_GENERATORS {
            return Err(Error::dims(format!(
                "at most {MAX_GENERATORS} generators are supported, got {}",
                generators.len()
            )));
        }
        let dim = generators[0].dim();
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::dims(
                "all generators must share one dimension".to_string(),
            ));
        }
        Ok(SwitchingSystem {
            generators,
            label: label.into(),
        })
    }

    /// State-space dimension.
    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    /// Number of generators.
    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    /// Generator matrices.
    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }

    /// Single generator by index.
    pub fn generator(&self, i: usize) -> &Mat {
        &self.generators[i]
    }

    /// Human-readable label used in reports.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Largest generator operator norm, `max_i ‖A_i‖`.
    pub fn max_generator_norm(&self) -> f64 {
        self.generators.iter().map(opnorm).fold(0.0, f64::max)
    }

    /// Convex combination `Σ w_i A_i`.
    ///
    /// For a one-hot weight vector the result is bitwise the selected
    /// generator: zero terms contribute exact zeros.
    pub fn combine(&self, weights: &[f64]) -> Result<Mat> {
        validate_simplex(weights, self.n_generators(), SIMPLEX_TOL)?;
        let mut acc = Mat::zeros(self.dim());
        for (w, g) in weights.iter().zip(&self.generators) {
            if *w != 0.0 {
                acc = acc.add(&g.scale(*w));
            }
        }
        Ok(acc)
    }
}

fn validate_simplex(weights: &[f64], n: usize, tol: f64) -> Result<()> {
    if weights.len() != n {
        return Err(Error::dims(format!(
            "weight vector length {} does not match generator count {n}",
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::invalid("weights must be finite"));
    }
    if let Some(w) = weights.iter().find(|w| **w < -tol) {
        return Err(Error::invalid(format!(
            "weight {w} is negative beyond the simplex tolerance {tol:e}"
        )));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::invalid(format!(
            "weights sum to {sum}, off the simplex beyond tolerance {tol:e}"
        )));
    }
    Ok(())
}

/// Piecewise-constant switching control: `(duration, weights)` pieces.
///
/// Weights are stored flattened so that schedules with millions of pieces
/// (chattering output) stay cache- and memory-friendly.
#[derive(Clone, Debug)]
pub struct Schedule {
    n_weights: usize,
    durations: Vec<f64>,
    weights: Vec<f64>,
}

impl Schedule {
    /// Empty schedule for systems with `n_weights` generators.
    pub fn new(n_weights: usize) -> Self {
        Schedule {
            n_weights,
            durations: Vec::new(),
            weights: Vec::new(),
        }
    }

    /// Appends one piece. The weight vector must lie on the simplex within
    /// [`SIMPLEX_TOL`], the duration must be finite and strictly positive
    /// (zero-length pieces carry no information and are rejected so that
    /// schedule lengths always reflect actual switching events).
    pub fn push(&mut self, duration: f64, weights: &[f64]) -> Result<()> {
        if !duration.is_finite() || duration <= 0.0 {
            return Err(Error::invalid(format!(
                "piece duration must be finite and > 0, got {duration}"
            )));
        }
        validate_simplex(weights, self.n_weights, SIMPLEX_TOL)?;
        self.durations.push(duration);
        self.weights.extend_from_slice(weights);
        Ok(())
    }

    /// Appends one vertex piece (weight 1 on generator `index`).
    pub fn push_vertex(&mut self, duration: f64, index: usize) -> Result<()> {
        if index >= self.n_weights {
            return Err(Error::dims(format!(
                "vertex index {index} out of range for {} generators",
                self.n_weights
            )));
        }
        let mut w = vec![0.0; self.n_weights];
        w[index] = 1.0;
        self.push(duration, &w)
    }

    /// Builds a schedule from `(duration, weights)` pairs.
    pub fn from_pieces(n_weights: usize, pieces: &[(f64, Vec<f64>)]) -> Result<Self> {
        let mut s = Schedule::new(n_weights);
        for (d, w) in pieces {
            s.push(*d, w)?;
        }
        Ok(s)
    }

    /// Builds a vertex schedule from `(duration, generator index)` pairs.
    pub fn from_vertices(n_weights: usize, pieces: &[(f64, usize)]) -> Result<Self> {
        let mut s = Schedule::new(n_weights);
        for (d, i) in pieces {
            s.push_vertex(*d, *i)?;
        }
        Ok(s)
    }

    /// Single-piece schedule holding one constant weight vector.
    pub fn constant(duration: f64, weights: &[f64]) -> Result<Self> {
        let mut s = Schedule::new(weights.len());
        s.push(duration, weights)?;
        Ok(s)
    }

    /// Number of pieces.
    pub fn len(&self) -> usize {
        self.durations.len()
    }

    /// True when the schedule has no pieces.
    pub fn is_empty(&self) -> bool {
        self.durations.is_empty()
    }

    /// Number of weights per piece.
    pub fn n_weights(&self) -> usize {
        self.n_weights
    }

    /// Duration of piece `i`.
    pub fn duration(&self, i: usize) -> f64 {
        self.durations[i]
    }

    /// Weight vector of piece `i`.
    pub fn weights(&self, i: usize) -> &[f64] {
        &self.weights[i * self.n_weights..(i + 1) * self.n_weights]
    }

    /// Sum of all piece durations.
    pub fn total_duration(&self) -> f64 {
        self.durations.iter().sum()
    }

    /// Truncates the schedule to total duration `t`, splitting the piece
    /// that straddles the cut. A `t` beyond the total duration is an error.
    pub fn truncated(&self, t: f64) -> Result<Schedule> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::invalid(format!("truncation time {t} invalid")));
        }
        let mut out = Schedule::new(self.n_weights);
        let mut remaining = t;
        for i in 0..self.len() {
            let d = self.duration(i);
            if remaining <= 0.0 {
                break;
            }
            let take = d.min(remaining);
            out.push(take, self.weights(i))?;
            remaining -= take;
        }
        if remaining > 1e-9 {
            return Err(Error::invalid(format!(
                "cannot truncate at t = {t}: schedule only lasts {}",
                self.total_duration()
            )));
        }
        Ok(out)
    }
}

/// Sampled solution path: strictly increasing times with matching states,
/// together with the schedule that produced it (so exported trajectories
/// stay reproducible without out-of-band bookkeeping).
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    schedule: Schedule,
}

impl Trajectory {
    /// Number of samples.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    /// True when no samples were recorded.
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Sample time `i`.
    pub fn time(&self, i: usize) -> f64 {
        self.times[i]
    }

    /// Sample state `i`.
    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i]
    }

    /// All sample times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Final state.
    pub fn endpoint(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least t = 0")
    }

    /// The schedule this trajectory was integrated under.
    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// Writes `t, x1, …, xd` rows as CSV (dot decimal separator, `\n`
    /// line endings), with a header row.
    pub fn to_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        let dim = self.states.first().map_or(0, Vec::len);
        write!(w, "t")?;
        for j in 1..=dim {
            write!(w, ",x{j}")?;
        }
        writeln!(w)?;
        for (t, x) in self.times.iter().zip(&self.states) {
            write!(w, "{t}")?;
            for v in x {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Options controlling trajectory sampling in [`evolve`].
#[derive(Clone, Debug)]
pub struct EvolveOptions {
    /// Grid step for samples inside pieces; `None` records only piece
    /// boundaries. Intermediate samples are computed from the piece start
    /// and never feed back into the boundary chain, so sampling density
    /// cannot change the endpoint.
    pub sample_step: Option<f64>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            sample_step: Some(DEFAULT_SAMPLE_STEP),
        }
    }
}

fn check_initial_state(sys: &SwitchingSystem, x0: &[f64]) -> Result<()> {
    if x0.len() != sys.dim() {
        return Err(Error::dims(format!(
            "initial state has length {}, system dimension is {}",
            x0.len(),
            sys.dim()
        )));
    }
    if !x0.iter().all(|v| v.is_finite()) {
        return Err(Error::invalid("initial state must be finite"));
    }
    Ok(())
}

/// Advances a state across one schedule piece: `x ← e^{d·Σw_iA_i} x`.
/// Both [`evolve`] and [`evolve_endpoint`] go through this single function,
/// so a vertex schedule is evolved by exactly the product of generator
/// exponentials that appears in the product-form characterization of the
/// top exponent.
fn piece_step(sys: &SwitchingSystem, duration: f64, weights: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let combo = sys.combine(weights)?;
    Ok(expm(&combo, duration)?.apply(x))
}

/// Evolves `x0` along a schedule, sampling the trajectory.
///
/// Piece boundaries are always sampled; `opts.sample_step` adds interior
/// samples (computed from the piece-start state, leaving the boundary
/// chain untouched).
pub fn evolve(
    sys: &SwitchingSystem,
    schedule: &Schedule,
    x0: &[f64],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    check_initial_state(sys, x0)?;
    if schedule.n_weights() != sys.n_generators() {
        return Err(Error::dims(format!(
            "schedule carries {} weights per piece, system has {} generators",
            schedule.n_weights(),
            sys.n_generators()
        )));
    }
    let mut times = vec![0.0];
    let mut states = vec![x0.to_vec()];
    let mut t = 0.0;
    let mut x = x0.to_vec();
    for i in 0..schedule.len() {
        let d = schedule.duration(i);
        let w = schedule.weights(i);
        if let Some(step) = opts.sample_step {
            if step <= 0.0 || !step.is_finite() {
                return Err(Error::invalid(format!("sample step {step} invalid")));
            }
            let combo = sys.combine(w)?;
            let mut s = step;
            while s < d - 1e-15 {
                times.push(t + s);
                states.push(expm(&combo, s)?.apply(&x));
                s += step;
            }
        }
        x = piece_step(sys, d, w, &x)?;
        t += d;
        times.push(t);
        states.push(x.clone());
    }
    Ok(Trajectory {
        times,
        states,
        schedule: schedule.clone(),
    })
}

/// Evolves `x0` along a schedule and returns only the final state.
/// Identical stepping to [`evolve`], without sample bookkeeping — use this
/// for chattering schedules with millions of pieces.
pub fn evolve_endpoint(sys: &SwitchingSystem, schedule: &Schedule, x0: &[f64]) -> Result<Vec<f64>> {
    check_initial_state(sys, x0)?;
    if schedule.n_weights() != sys.n_generators() {
        return Err(Error::dims(format!(
            "schedule carries {} weights per piece, system has {} generators",
            schedule.n_weights(),
            sys.n_generators()
        )));
    }
    let mut x = x0.to_vec();
    for i in 0..schedule.len() {
        x = piece_step(sys, schedule.duration(i), schedule.weights(i), &x)?;
    }
    Ok(x)
}

/// A measurable switching law `t ↦ α(t)` on the simplex.
///
/// Laws are opaque callables; the library never samples them outside
/// [`chatter_discretize`] (and the quadrature helpers built on it), which
/// is what gives every downstream computation a single, certifiable path
/// from measurable controls to vertex schedules.
pub struct MeasurableLaw {
    n_weights: usize,
    f: Box<dyn Fn(f64, &mut [f64]) + Send + Sync>,
}

impl MeasurableLaw {
    /// Wraps a closure producing a weight vector of length `n_weights`.
    pub fn from_fn<F>(n_weights: usize, f: F) -> Self
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        MeasurableLaw {
            n_weights,
            f: Box::new(move |t, out| {
                let v = f(t);
                out[..v.len()].copy_from_slice(&v);
            }),
        }
    }

    /// Two-generator law `(1 − α(t), α(t))`: `α` is the weight on the
    /// *second* generator.
    pub fn planar<F>(alpha: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        MeasurableLaw {
            n_weights: 2,
            f: Box::new(move |t, out| {
                let a = alpha(t);
                out[0] = 1.0 - a;
                out[1] = a;
            }),
        }
    }

    /// Constant law.
    pub fn constant(weights: Vec<f64>) -> Self {
        let n = weights.len();
        MeasurableLaw {
            n_weights: n,
            f: Box::new(move |_t, out| out[..n].copy_from_slice(&weights)),
        }
    }

    /// Number of weights the law produces.
    pub fn n_weights(&self) -> usize {
        self.n_weights
    }

    /// Evaluates the law at time `t` into `buf[..n_weights]`, checking the
    /// simplex constraint within [`LAW_SIMPLEX_TOL`].
    pub fn eval(&self, t: f64, buf: &mut [f64]) -> Result<()> {
        (self.f)(t, buf);
        let w = &buf[..self.n_weights];
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "law produced non-finite weights at t = {t}"
            )));
        }
        if let Some(v) = w.iter().find(|v| **v < -LAW_SIMPLEX_TOL) {
            return Err(Error::invalid(format!(
                "law weight {v} at t = {t} is negative beyond tolerance {LAW_SIMPLEX_TOL:e}"
            )));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > LAW_SIMPLEX_TOL {
            return Err(Error::invalid(format!(
                "law weights sum to {sum} at t = {t}, off the simplex beyond {LAW_SIMPLEX_TOL:e}"
            )));
        }
        Ok(())
    }
}

impl std::fmt::Debug for MeasurableLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MeasurableLaw(n_weights = {})", self.n_weights)
    }
}

/// Integrates the law's weight vector over `[a, b]` by adaptive Simpson
/// quadrature to absolute tolerance `tol` (per component).
pub(crate) fn integrate_law(
    law: &MeasurableLaw,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<[f64; MAX_GENERATORS]> {
    let n = law.n_weights();
    let mut fa = [0.0; MAX_GENERATORS];
    let mut fm = [0.0; MAX_GENERATORS];
    let mut fb = [0.0; MAX_GENERATORS];
    let m = 0.5 * (a + b);
    law.eval(a, &mut fa)?;
    law.eval(m, &mut fm)?;
    law.eval(b, &mut fb)?;
    let mut whole = [0.0; MAX_GENERATORS];
    for i in 0..n {
        whole[i] = (b - a) / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
    }
    simpson_refine(law, a, b, &fa, &fm, &fb, &whole, tol, 24)
}

#[allow(clippy::too_many_arguments)]
fn simpson_refine(
    law: &MeasurableLaw,
    a: f64,
    b: f64,
    fa: &[f64; MAX_GENERATORS],
    fm: &[f64; MAX_GENERATORS],
    fb: &[f64; MAX_GENERATORS],
    whole: &[f64; MAX_GENERATORS],
    tol: f64,
    depth: u32,
) -> Result<[f64; MAX_GENERATORS]> {
    let n = law.n_weights();
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let mut flm = [0.0; MAX_GENERATORS];
    let mut frm = [0.0; MAX_GENERATORS];
    law.eval(lm, &mut flm)?;
    law.eval(rm, &mut frm)?;
    let mut left = [0.0; MAX_GENERATORS];
    let mut right = [0.0; MAX_GENERATORS];
    let mut err = 0.0f64;
    for i in 0..n {
        left[i] = (m - a) / 6.0 * (fa[i] + 4.0 * flm[i] + fm[i]);
        right[i] = (b - m) / 6.0 * (fm[i] + 4.0 * frm[i] + fb[i]);
        err = err.max((left[i] + right[i] - whole[i]).abs());
    }
    if err <= 15.0 * tol || depth == 0 {
        let mut out = [0.0; MAX_GENERATORS];
        for i in 0..n {
            // Richardson touch-up: S(a,m)+S(m,b) + correction/15.
            out[i] = left[i] + right[i] + (left[i] + right[i] - whole[i]) / 15.0;
        }
        return Ok(out);
    }
    let l = simpson_refine(law, a, m, fa, &flm, fm, &left, 0.5 * tol, depth - 1)?;
    let r = simpson_refine(law, m, b, fm, &frm, fb, &right, 0.5 * tol, depth - 1)?;
    let mut out = [0.0; MAX_GENERATORS];
    for i in 0..n {
        out[i] = l[i] + r[i];
    }
    Ok(out)
}

/// Chattering discretization: replaces a measurable law on `[0, T]` by a
/// vertex schedule with `k` equal windows.
///
/// Within window `j`, the pieces follow the generator index order
/// `0, 1, …, N−1` (the bound is order-independent); piece `i` lasts
/// `∫_window α_i`, computed by adaptive quadrature to [`WINDOW_QUAD_TOL`].
/// The final piece of each window is adjusted so the window closes exactly,
/// and zero-length pieces are dropped. The total duration equals `T` to
/// within [`SIMPLEX_TOL`]-level rounding.
pub fn chatter_discretize(law: &MeasurableLaw, t_end: f64, k: u64) -> Result<Schedule> {
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::invalid(format!("horizon T = {t_end} must be > 0")));
    }
    if k == 0 {
        return Err(Error::invalid("window count k must be >= 1"));
    }
    let n = law.n_weights();
    if n == 0 || n > MAX_GENERATORS {
        return Err(Error::dims(format!(
            "law must produce 1..={MAX_GENERATORS} weights, got {n}"
        )));
    }
    let mut schedule = Schedule::new(n);
    let mut window_start = 0.0f64;
    for j in 0..k {
        // Telescoping window ends: the final window closes exactly at T.
        let window_end = if j + 1 == k {
            t_end
        } else {
            t_end * ((j + 1) as f64) / (k as f64)
        };
        let width = window_end - window_start;
        let integrals = integrate_law(law, window_start, window_end, WINDOW_QUAD_TOL)?;
        // Clamp quadrature noise and make the window close exactly by
        // assigning the remainder to the last generator.
        let mut acc = 0.0f64;
        for i in 0..n {
            let d = if i + 1 == n {
                (width - acc).max(0.0)
            } else {
                integrals[i].clamp(0.0, width - acc)
            };
            acc += d;
            if d > 0.0 {
                schedule.push_vertex(d, i)?;
            }
        }
        window_start = window_end;
    }
    Ok(schedule)
}

/// Window count certifying endpoint error ≤ `eps` for *every* measurable
/// law on `[0, T]` starting from a state of norm `x0_norm`:
/// the least `k` with `1/k ≤ eps / (4·C·K·T·e^{CT})` where
/// `C = 1/T + max_i ‖A_i‖` and `K = C·e^{CT}·x0_norm`.
pub fn required_k(sys: &SwitchingSystem, t_end: f64, x0_norm: f64, eps: f64) -> Result<u64> {
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::invalid(format!("horizon T = {t_end} must be > 0")));
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::invalid(format!("tolerance eps = {eps} must be > 0")));
    }
    if !x0_norm.is_finite() || x0_norm < 0.0 {
        return Err(Error::invalid(format!(
            "initial norm {x0_norm} must be finite and >= 0"
        )));
    }
    let c = 1.0 / t_end + sys.max_generator_norm();
    let ect = (c * t_end).exp();
    let kappa = c * ect * x0_norm;
    let bound = 4.0 * c * kappa * t_end * ect / eps;
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        return Err(Error::Overflow(format!(
            "certified window count {bound:e} exceeds the representable range"
        )));
    }
    Ok((bound.ceil() as u64).max(1))
}

/// Shifts every generator by `−μ·I` (normalizing the top exponent of the
/// shifted system to `Λ − μ`).
pub fn shift(sys: &SwitchingSystem, mu: f64) -> Result<SwitchingSystem> {
    if !mu.is_finite() {
        return Err(Error::invalid("shift μ must be finite"));
    }
    let id = Mat::identity(sys.dim());
    let generators = sys
        .generators()
        .iter()
        .map(|g| g.sub(&id.scale(mu)))
        .collect();
    SwitchingSystem::new(generators, format!("{}−{:.6}·I", sys.label(), mu))
}
