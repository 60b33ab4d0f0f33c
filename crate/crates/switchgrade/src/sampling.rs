//! Deterministic sample generation for certificates and property checks.
//!
//! Every verification routine in this crate that needs "many directions" or
//! "many hull points" draws them from here, for two reasons:
//!
//! * **Reproducibility.** Certificates (extremality checks, Hurwitz scans,
//!   norm-axiom spot checks) must be bit-identical across runs and platforms,
//!   so unit vectors come from a low-discrepancy sequence rather than an OS
//!   RNG, and simplex samples come from an explicitly seeded stream cipher.
//! * **Coverage.** Low-discrepancy points fill the sphere far more evenly
//!   than i.i.d. samples at the modest counts (50–500) used by the
//!   certificate suites, which matters when a failure region is thin.
//!
//! Unit vectors are produced per dimension:
//!
//! * dimension 1: alternating `+1, −1`;
//! * dimension 2: the golden-angle sequence on the circle (optimal
//!   one-dimensional low-discrepancy rotation);
//! * dimension ≥ 3: a Halton point set (one prime base per coordinate)
//!   mapped through the inverse normal CDF and normalized — the classic
//!   quasi-Monte-Carlo route to well-spread sphere points, since the
//!   normal distribution is rotation invariant.
//!
//! Simplex points use the normalized-exponential construction (Dirichlet(1),
//! i.e. uniform on the simplex) over a ChaCha stream seeded by the caller.

use crate::error::{Error, Result};
use crate::matexp::MAX_DIM;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prime bases for the Halton sequence, one per coordinate.
const HALTON_PRIMES: [u64; MAX_DIM] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Golden-ratio conjugate `(√5 − 1)/2`, the rotation number of the
/// golden-angle sequence.
const GOLDEN_FRAC: f64 = 0.618_033_988_749_894_9;

/// Returns `n` deterministic, well-spread unit vectors in `R^dim`.
///
/// The sequence is fixed for all time: calling this twice with the same
/// arguments yields identical points, which is what makes the certificate
/// reports reproducible.
pub fn sphere_points(dim: usize, n: usize) -> Result<Vec<Vec<f64>>> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::invalid(format!(
            "sphere dimension must be in 1..={MAX_DIM}, got {dim}"
        )));
    }
    let mut out = Vec::with_capacity(n);
    match dim {
        1 => {
            for k in 0..n {
                out.push(vec![if k % 2 == 0 { 1.0 } else { -1.0 }]);
            }
        }
        2 => {
            for k in 0..n {
                let theta = std::f64::consts::TAU * ((k as f64 * GOLDEN_FRAC).fract());
                out.push(vec![theta.cos(), theta.sin()]);
            }
        }
        _ => {
            for k in 1..=n as u64 {
                let mut v: Vec<f64> = (0..dim)
                    .map(|j| inverse_normal_cdf(radical_inverse(HALTON_PRIMES[j], k)))
                    .collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                // The coordinates are inverse-CDF images of radical inverses
                // with distinct prime bases; they are never simultaneously
                // zero for k ≥ 1.
                debug_assert!(norm > 1e-12, "degenerate Halton sphere point");
                for x in &mut v {
                    *x /= norm;
                }
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Returns `count` points uniformly distributed on the probability simplex
/// with `n_weights` coordinates, drawn from a ChaCha stream with the given
/// seed (same seed ⇒ same points).
pub fn simplex_points(n_weights: usize, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n_weights == 0 {
        return Err(Error::invalid("simplex needs at least one coordinate"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        // −log(1 − U) is Exp(1); normalized exponentials are Dirichlet(1),
        // the uniform distribution on the simplex.
        let mut w: Vec<f64> = (0..n_weights)
            .map(|_| -(1.0 - rng.gen::<f64>()).ln())
            .collect();
        let total: f64 = w.iter().sum();
        for x in &mut w {
            *x /= total;
        }
        out.push(w);
    }
    Ok(out)
}

/// Van der Corput radical inverse of `i` in the given base: digit-reverses
/// `i` across the radix point. Returns values in `(0, 1)` for `i ≥ 1`.
fn radical_inverse(base: u64, mut i: u64) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * inv;
        i /= base;
        inv /= b;
    }
    r
}

/// Inverse of the standard normal CDF (quantile function), accurate to
/// about 1e−9 relative error over `(0, 1)` — the Acklam rational
/// approximation with separate tail and central branches.
pub(crate) fn inverse_normal_cdf(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile argument must be in (0,1)");
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_690e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sphere_points_are_unit_vectors_in_every_dimension() {
        for dim in 1..=MAX_DIM {
            let pts = sphere_points(dim, 64).unwrap();
            assert_eq!(pts.len(), 64);
            for (k, p) in pts.iter().enumerate() {
                assert_eq!(p.len(), dim);
                let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!(
                    (norm - 1.0).abs() <= 1e-12,
                    "point {k} in dim {dim} has norm {norm}"
                );
            }
        }
        assert!(sphere_points(0, 4).is_err());
        assert!(sphere_points(MAX_DIM + 1, 4).is_err());
    }

    #[test]
    fn sphere_points_dimension_one_alternates_signs() {
        let pts = sphere_points(1, 5).unwrap();
        let signs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        assert_eq!(signs, vec![1.0, -1.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn sphere_points_dimension_two_start_on_axis_and_cover_quadrants() {
        let pts = sphere_points(2, 16).unwrap();
        assert_abs_diff_eq!(pts[0][0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pts[0][1], 0.0, epsilon = 1e-15);
        let mut quadrant_counts = [0usize; 4];
        for p in &pts {
            let q = match (p[0] >= 0.0, p[1] >= 0.0) {
                (true, true) => 0,
                (false, true) => 1,
                (false, false) => 2,
                (true, false) => 3,
            };
            quadrant_counts[q] += 1;
        }
        for (q, c) in quadrant_counts.iter().enumerate() {
            assert!(*c >= 2, "quadrant {q} underrepresented: {quadrant_counts:?}");
        }
    }

    #[test]
    fn sphere_points_dimension_three_cover_all_octants() {
        let pts = sphere_points(3, 64).unwrap();
        let mut seen = [false; 8];
        for p in &pts {
            let idx = (usize::from(p[0] >= 0.0) << 2)
                | (usize::from(p[1] >= 0.0) << 1)
                | usize::from(p[2] >= 0.0);
            seen[idx] = true;
        }
        assert!(
            seen.iter().all(|s| *s),
            "some octant received no sample: {seen:?}"
        );
    }

    #[test]
    fn sphere_points_are_deterministic() {
        assert_eq!(sphere_points(4, 32).unwrap(), sphere_points(4, 32).unwrap());
    }

    #[test]
    fn inverse_normal_cdf_matches_tabulated_quantiles() {
        // Median, the textbook 97.5% quantile, and Φ(−3); reference values
        // from standard normal tables.
        assert_abs_diff_eq!(inverse_normal_cdf(0.5), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            inverse_normal_cdf(0.975),
            1.959_963_984_540_054,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            inverse_normal_cdf(0.001_349_898_031_630_094_6),
            -3.0,
            epsilon = 1e-5
        );
        // Antisymmetry about the median.
        for p in [0.01, 0.1, 0.3, 0.45] {
            assert_abs_diff_eq!(
                inverse_normal_cdf(p),
                -inverse_normal_cdf(1.0 - p),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn radical_inverse_prefix_matches_hand_computation() {
        let base2: Vec<f64> = (1..=4).map(|i| radical_inverse(2, i)).collect();
        assert_eq!(base2, vec![0.5, 0.25, 0.75, 0.125]);
        assert_abs_diff_eq!(radical_inverse(3, 1), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(radical_inverse(3, 2), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(radical_inverse(3, 3), 1.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn simplex_points_lie_on_simplex_and_respect_seed() {
        let pts = simplex_points(3, 40, 7).unwrap();
        assert_eq!(pts.len(), 40);
        for p in &pts {
            assert!(p.iter().all(|x| *x >= 0.0));
            assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
        assert_eq!(pts, simplex_points(3, 40, 7).unwrap());
        assert_ne!(pts, simplex_points(3, 40, 8).unwrap());
        assert!(simplex_points(0, 4, 0).is_err());
    }
}
