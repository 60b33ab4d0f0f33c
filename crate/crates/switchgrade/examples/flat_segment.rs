//! Non-strict convexity of the 4D Barabanov ball.
//!
//! The coupled four-dimensional family is irreducible and marginally stable,
//! so it has a *unique* Barabanov norm — and that norm's unit sphere contains
//! a straight line segment. The exact norm has no closed form; the library
//! approximates it by the finite-horizon reachability norm
//!
//! ```text
//!     N_T(z) = max { ‖P z‖ : P a vertex product of duration ≤ T },
//! ```
//!
//! which converges to the Barabanov norm as T grows. This example probes the
//! segment `{(1, 0, u₂, 0) : |u₂| ≤ 1}` (in tensor coordinates: `(1, u₂) ⊗
//! (1, 0)`) and watches it flatten as the horizon increases, while a strictly
//! convex norm shows the bulge that flatness forbids.
//!
//! Run with `cargo run --release --example flat_segment`.

use switchgrade::barabanov::{flatness_check, norm_a, FiniteHorizonNorm, NormModel};
use switchgrade::models::sys_x;

fn main() -> switchgrade::Result<()> {
    // Planar prototype first: the closed-form norm is exactly 1 on the
    // segment {(1, y) : |y| ≤ 1} of its unit sphere.
    println!("planar prototype (closed-form norm):");
    for y in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        println!("    norm_A((1, {y:>4})) = {:.12}", norm_a(&[1.0, y]));
    }

    let sys = sys_x()?;
    println!("\n4D finite-horizon surrogate, beam 64, 21-point probe:");
    println!(
        "{:>6} {:>10} {:>18} {:>16} {:>14}",
        "T", "products", "max rel deviation", "midpoint norm", "build+probe"
    );
    for t_end in [10.0, 20.0, 40.0] {
        let started = std::time::Instant::now();
        let norm = FiniteHorizonNorm::build(&sys, t_end, 64)?;
        let n_products = norm.n_products();
        let report = flatness_check(&NormModel::FiniteHorizon(norm), 1.0, &[1.0, 0.0], 21)?;
        println!(
            "{:>6} {:>10} {:>18.3e} {:>16.12} {:>13.2?}",
            t_end,
            n_products,
            report.max_rel_deviation,
            report.midpoint_value,
            started.elapsed()
        );
    }

    // Contrast: a strictly convex norm pulls the midpoint of two boundary
    // points strictly inside the sphere.
    let euclid = NormModel::Euclidean { dim: 4 };
    let report = flatness_check(&euclid, 1.0, &[1.0, 0.0], 21)?;
    println!(
        "\nEuclidean comparison: max rel deviation {:.3}, midpoint norm {:.6} \
         (strict convexity pulls it inside)",
        report.max_rel_deviation, report.midpoint_value
    );

    println!(
        "\nThe probe segment's norm values collapse onto the constant 1 as T\n\
         grows and the normalized midpoint stays on the sphere: the limiting\n\
         unit ball genuinely contains the segment."
    );
    Ok(())
}
