//! The top Lyapunov exponent of the built-in planar pair, three ways.
//!
//! 1. Singleton exponents: the spectral abscissa of each generator alone is
//!    a trivial lower bound for the switched exponent.
//! 2. The angular method: for planar families whose controls all rotate the
//!    same way, the exponent is the unique λ for which the best log-radius
//!    gain per revolution vanishes — a one-dimensional root find.
//! 3. Product search: beam search over vertex matrix products certifies the
//!    exponent from below with no planarity assumption; its value at a
//!    finite horizon T overshoots by O(1/T), visibly shrinking as T grows.
//!
//! Run with `cargo run --release --example compute_lambda`.

use std::f64::consts::PI;

use switchgrade::lyapunov::{
    lambda_lower_product_search, lambda_planar_angular, lambda_singleton,
};
use switchgrade::models::raw_rotation_pair;

fn main() -> switchgrade::Result<()> {
    let sys = raw_rotation_pair();
    println!("system: {} ({} generators, dimension {})\n", sys.label(), sys.n_generators(), sys.dim());

    // --- 1. Each generator alone -----------------------------------------
    for (i, g) in sys.generators().iter().enumerate() {
        let est = lambda_singleton(g)?;
        println!("generator {i} alone: growth rate = {:+.6} (spectral abscissa)", est.lower);
    }
    // Both generators are pure rotations with zero abscissa, yet switching
    // between them produces genuine exponential growth:
    let quarter_turn = 4.0_f64.ln() / PI;
    println!(
        "\nperiodic quarter-turn switching already gives log(4)/π = {quarter_turn:.10}\n"
    );

    // --- 2. Angular method ------------------------------------------------
    let angular = lambda_planar_angular(&sys)?;
    println!("angular method:  λ = {:.12}", angular.lower);

    // --- 3. Product search at growing horizons ----------------------------
    let grid: Vec<f64> = (1..=64).map(|j| j as f64 * PI / 64.0).collect();
    println!("\nproduct search (grid π/64, beam 64):");
    println!("{:>10} {:>18} {:>14}", "T", "certified rate", "gap to angular");
    for t_end in [4.0 * PI, 8.0 * PI, 16.0 * PI, 24.0 * PI] {
        let product = lambda_lower_product_search(&sys, t_end, &grid, 64)?;
        println!(
            "{:>10.4} {:>18.12} {:>14.3e}",
            t_end,
            product.lower,
            (product.lower - angular.lower).abs()
        );
    }

    println!(
        "\nThe two methods agree to a few parts in 10⁴ at T = 24π; the angular\n\
         value is the reference (its quadrature error is ~1e-8, the product\n\
         bound carries an O(1/T) transient)."
    );
    Ok(())
}
