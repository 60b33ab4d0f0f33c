//! The reference generator families bundled with the crate.
//!
//! Everything revolves around one planar rotation pair:
//!
//! ```text
//! C₀ = [ 0  −2 ]      C₁ = [ 0  −1/2 ]
//!      [ 1/2  0 ]          [ 2    0  ]
//! ```
//!
//! Both generate counterclockwise elliptic rotations (`C_i² = −I`, so
//! `e^{tC_i} = cos t·I + sin t·C_i`), but their ellipses are mutually
//! transposed: switching between them at the right moments grows the
//! radius on every quarter turn. The top exponent λ = Λ({C₀, C₁}) of the
//! pair — [`lambda`], computed once by the angular method and cached —
//! strictly exceeds the best single-switch policy rate `log 4/π` obtained
//! by switching exactly at the quadrant boundaries.
//!
//! From the pair we derive the families the rest of the crate studies:
//!
//! * [`sys_a`] — the **freeze/decay pair** `A₀ = diag(0, −1)`,
//!   `A₁ = [[−1, 1], [−1, −1]]`: marginally stable (Λ = 0), a planar
//!   system whose extremal norm is the closed-form norm of
//!   `barabanov::norm_a`.
//! * [`sys_b`] — the **shifted rotation pair** `B_i = C_i − λI`:
//!   marginally stable by construction, with an extremal norm computed as
//!   a polar table (`barabanov::norm_b_build`). [`sys_b0`] adjoins the
//!   zero matrix, which enlarges the hull without changing the exponent
//!   or the extremal norm.
//! * [`sys_x`] — the **4-dimensional tensor family** with generators
//!   `X₀ = A₀⊗I + I⊗B₀`, `X₁ = A₀⊗I + I⊗B₁`, `X₂ = A₁⊗I`. It is
//!   irreducible and marginally stable, yet its extremal geometry
//!   contains a genuinely flat segment — the headline phenomenon this
//!   crate reproduces numerically.
//! * [`cgm_pair`] — a classical two-generator example whose extremal ball
//!   is bounded by vertical segments and a spiral arc; the spiral's
//!   tangency constant α is computed by `barabanov::cgm_alpha`.

use crate::error::Result;
use crate::lyapunov::lambda_planar_angular;
use crate::matexp::{kron, Mat};
use crate::system::SwitchingSystem;
use std::sync::OnceLock;

fn mat2(a: f64, b: f64, c: f64, d: f64) -> Mat {
    Mat::from_rows(&[&[a, b], &[c, d]]).expect("2×2 literal")
}

/// First rotation generator `C₀`.
pub fn c0() -> Mat {
    mat2(0.0, -2.0, 0.5, 0.0)
}

/// Second rotation generator `C₁` (the transposed ellipse).
pub fn c1() -> Mat {
    mat2(0.0, -0.5, 2.0, 0.0)
}

/// The raw rotation pair `{C₀, C₁}`.
pub fn raw_rotation_pair() -> SwitchingSystem {
    SwitchingSystem::new(vec![c0(), c1()], "raw").expect("raw pair is well-formed")
}

/// Top Lyapunov exponent λ of the raw rotation pair, computed once by the
/// angular method ([`lambda_planar_angular`]) and cached for the process
/// lifetime. Every shifted family below uses this exact value, so the
/// marginal-stability checks downstream are self-consistent.
pub fn lambda() -> f64 {
    static LAMBDA: OnceLock<f64> = OnceLock::new();
    *LAMBDA.get_or_init(|| {
        lambda_planar_angular(&raw_rotation_pair())
            .expect("angular method applies to the raw pair")
            .lower
    })
}

/// Freeze generator `A₀ = diag(0, −1)`: fixes the first coordinate,
/// contracts the second.
pub fn a0() -> Mat {
    mat2(0.0, 0.0, 0.0, -1.0)
}

/// Damped rotation `A₁ = [[−1, 1], [−1, −1]]`: spirals into the origin at
/// rate 1 while turning clockwise.
pub fn a1() -> Mat {
    mat2(-1.0, 1.0, -1.0, -1.0)
}

/// The freeze/decay pair `𝖠 = {A₀, A₁}` (marginally stable, Λ = 0).
pub fn sys_a() -> SwitchingSystem {
    SwitchingSystem::new(vec![a0(), a1()], "A").expect("A pair is well-formed")
}

/// Shifted rotation generator `B₀ = C₀ − λI`.
pub fn b0() -> Mat {
    c0().sub(&Mat::identity(2).scale(lambda()))
}

/// Shifted rotation generator `B₁ = C₁ − λI`.
pub fn b1() -> Mat {
    c1().sub(&Mat::identity(2).scale(lambda()))
}

/// The shifted pair `𝖡 = {B₀, B₁}` (marginally stable by construction).
pub fn sys_b() -> SwitchingSystem {
    SwitchingSystem::new(vec![b0(), b1()], "B").expect("B pair is well-formed")
}

/// The enlarged hull `𝖡₀ = hull{0, B₀, B₁}`: adjoining the zero matrix
/// lets trajectories pause without changing the exponent.
pub fn sys_b0() -> SwitchingSystem {
    SwitchingSystem::new(vec![Mat::zeros(2), b0(), b1()], "B0").expect("B0 hull is well-formed")
}

/// Tensor generator `X₀ = A₀⊗I + I⊗B₀`.
pub fn x0() -> Result<Mat> {
    Ok(kron(&a0(), &Mat::identity(2))?.add(&kron(&Mat::identity(2), &b0())?))
}

/// Tensor generator `X₁ = A₀⊗I + I⊗B₁`.
pub fn x1() -> Result<Mat> {
    Ok(kron(&a0(), &Mat::identity(2))?.add(&kron(&Mat::identity(2), &b1())?))
}

/// Tensor generator `X₂ = A₁⊗I`.
pub fn x2() -> Result<Mat> {
    kron(&a1(), &Mat::identity(2))
}

/// The 4-dimensional tensor family `𝖷 = hull{X₀, X₁, X₂}`.
pub fn sys_x() -> Result<SwitchingSystem> {
    SwitchingSystem::new(vec![x0()?, x1()?, x2()?], "X")
}

/// CGM freeze generator `M₀ = diag(0, −1)`.
pub fn cgm_m0() -> Mat {
    mat2(0.0, 0.0, 0.0, -1.0)
}

/// CGM spiral generator `M₁(α) = [[α, 3], [−3/5, 7/10]]`; the tangency
/// value of α is computed by `barabanov::cgm_alpha`.
pub fn cgm_m1(alpha: f64) -> Mat {
    mat2(alpha, 3.0, -0.6, 0.7)
}

/// The CGM pair `{M₀, M₁(α)}`.
pub fn cgm_pair(alpha: f64) -> SwitchingSystem {
    SwitchingSystem::new(vec![cgm_m0(), cgm_m1(alpha)], "cgm").expect("cgm pair is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Independent reference for λ (Dinkelbach iteration over a 2¹⁶-node
    // Simpson quadrature, run offline); the in-crate angular method uses a
    // coarser quadrature and a plain bisection, so agreement is expected
    // to ~1e−8, not machine precision.
    const LAMBDA_REFERENCE: f64 = 0.483_901_951_085_945_47;
    const LOG4_OVER_PI: f64 = 0.441_271_200_305_303_4;

    #[test]
    fn lambda_matches_reference_and_is_cached() {
        let l1 = lambda();
        let l2 = lambda();
        assert_eq!(l1.to_bits(), l2.to_bits(), "cache must return the same value");
        assert_abs_diff_eq!(l1, LAMBDA_REFERENCE, epsilon = 5e-8);
        assert!(l1 > LOG4_OVER_PI + 0.01);
    }

    #[test]
    fn shifted_pair_is_marginally_stable() {
        let est = lambda_planar_angular(&sys_b()).unwrap();
        assert_abs_diff_eq!(est.lower, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn shifted_generators_have_negative_trace_and_positive_determinant() {
        // These two scalar facts make every hull element Hurwitz: for a
        // 2×2 matrix, eigenvalues have negative real parts iff trace < 0
        // and determinant > 0, and both quantities are affine/convex-safe
        // along the segment between B₀ and B₁.
        let l = lambda();
        for b in [b0(), b1()] {
            let trace = b[(0, 0)] + b[(1, 1)];
            let det = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
            assert_abs_diff_eq!(trace, -2.0 * l, epsilon = 1e-12);
            assert_abs_diff_eq!(det, l * l + 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn tensor_generators_have_block_structure() {
        let x0 = x0().unwrap();
        let x1 = x1().unwrap();
        let x2 = x2().unwrap();
        assert_eq!(x0.dim(), 4);
        // X₀ acts as B₀ on the leading 2×2 block (u₁-component) and as
        // B₀ − I on the trailing block (u₂-component decays).
        let b0 = b0();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(x0[(i, j)], b0[(i, j)], epsilon = 1e-15);
                let expected = b0[(i, j)] - if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(x0[(i + 2, j + 2)], expected, epsilon = 1e-15);
            }
        }
        // X₂ = A₁⊗I: entries of A₁ spread over 2×2 identity blocks.
        let a1 = a1();
        for bi in 0..2 {
            for bj in 0..2 {
                for k in 0..2 {
                    assert_abs_diff_eq!(x2[(2 * bi + k, 2 * bj + k)], a1[(bi, bj)], epsilon = 1e-15);
                }
            }
        }
        // All three agree with the defining Kronecker sums.
        let alt_x1 = kron(&a0(), &Mat::identity(2))
            .unwrap()
            .add(&kron(&Mat::identity(2), &b1()).unwrap());
        assert!(x1.sub(&alt_x1).max_abs() < 1e-15);
    }

    #[test]
    fn family_labels_and_shapes() {
        assert_eq!(raw_rotation_pair().label(), "raw");
        assert_eq!(sys_a().label(), "A");
        assert_eq!(sys_b().label(), "B");
        let b0h = sys_b0();
        assert_eq!(b0h.label(), "B0");
        assert_eq!(b0h.n_generators(), 3);
        assert_eq!(b0h.generator(0).max_abs(), 0.0, "first generator is zero");
        let x = sys_x().unwrap();
        assert_eq!(x.label(), "X");
        assert_eq!(x.dim(), 4);
        assert_eq!(x.n_generators(), 3);
    }

    #[test]
    fn cgm_generators_have_documented_entries() {
        let m0 = cgm_m0();
        assert_eq!(m0[(0, 0)], 0.0);
        assert_eq!(m0[(1, 1)], -1.0);
        let m1 = cgm_m1(-0.5);
        assert_eq!(m1[(0, 0)], -0.5);
        assert_eq!(m1[(0, 1)], 3.0);
        assert_eq!(m1[(1, 0)], -0.6);
        assert_eq!(m1[(1, 1)], 0.7);
        assert_eq!(cgm_pair(-0.5).label(), "cgm");
    }
}
