//! Numerical toolkit for continuous-time linear switching systems.
//!
//! A linear switching system is the differential inclusion
//!
//! ```text
//!     x'(t) = A(t) x(t),        A(t) ∈ conv{A_1, …, A_N} ⊂ ℝ^{d×d},
//! ```
//!
//! where the measurable map `t ↦ A(t)` ranges over the convex hull of a
//! finite set of generator matrices. This crate computes the quantities
//! that govern the asymptotic behaviour of such systems:
//!
//! * the **top Lyapunov exponent** `Λ` — the worst-case exponential growth
//!   rate over all switching laws ([`lyapunov`]),
//! * **extremal norms** — norms that certify `Λ` as an exact upper bound,
//!   and **Barabanov norms** — extremal norms with a matching trajectory
//!   through every point ([`barabanov`]),
//! * **irreducibility** and **Hurwitz** certificates for generator families
//!   ([`spectral`]),
//! * trajectory evolution and the **chattering discretization** that turns a
//!   measurable switching law into a piecewise-constant vertex schedule with
//!   a quantitative endpoint error bound ([`system`]).
//!
//! The built-in model family ([`models`]) is a planar pair whose Barabanov
//! ball has straight-line boundary segments, together with a coupled
//! four-dimensional system assembled from it by Kronecker lifting. The 4D
//! family is irreducible, all its generators (and their hull) are Hurwitz,
//! yet the system is only marginally stable — its unique Barabanov ball is
//! not strictly convex. The [`cli`] module exposes the verification
//! checklist behind that construction as a command-line tool.
//!
//! Dense matrices up to dimension 8 are handled by the self-contained
//! [`matexp`] kernel (exponentials, Kronecker products, operator norms,
//! eigenvalues); nothing here links against an external BLAS.
//!
//! # Quick start
//!
//! ```
//! use switchgrade::{models, lyapunov};
//!
//! // The planar rotation pair underlying the built-in construction.
//! let sys = models::raw_rotation_pair();
//! let est = lyapunov::lambda_planar_angular(&sys).unwrap();
//! // Its exponent strictly exceeds the rate log(4)/π of the best
//! // quarter-turn product cycle.
//! assert!(est.lower > (4.0f64).ln() / std::f64::consts::PI);
//! ```
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --example compute_lambda        # exponent, three ways
//! cargo run --example extremal_trajectory   # norm-preserving witness paths
//! cargo run --example ball_export           # unit-ball boundary polylines
//! cargo run --example chattering_accuracy   # vertex-schedule discretization
//! cargo run --example flat_segment          # non-strict convexity in 4D
//! cargo run --example verify_construction   # the full certificate checklist
//! ```

pub mod barabanov;
pub mod cli;
pub mod error;
pub mod lyapunov;
pub mod matexp;
pub mod models;
pub mod sampling;
pub mod spectral;
pub mod system;

pub use error::{Error, Result};
pub use matexp::Mat;
pub use system::{Schedule, SwitchingSystem, Trajectory};
