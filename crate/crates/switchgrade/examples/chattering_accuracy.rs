//! Chattering discretization accuracy.
//!
//! Any measurable switching law can be replaced by a fast piecewise-constant
//! *vertex* schedule that matches the law's occupation integrals on `k` equal
//! windows; the endpoint error then obeys an explicit bound, inverted by
//! [`required_k`]. The bound's constants are deliberately conservative — the
//! point of this example is to show both halves:
//!
//! * the *certified* window count guarantees the requested tolerance, and
//! * the *measured* endpoint error (against an independent RK4 reference)
//!   is several orders of magnitude smaller still.
//!
//! Run with `cargo run --release --example chattering_accuracy`.

use switchgrade::models::sys_a;
use switchgrade::system::{chatter_discretize, evolve_endpoint, required_k, MeasurableLaw};

/// Classical RK4 for x' = [(1−α)A₀ + αA₁]x on the freeze/decay pair.
fn rk4_reference(alpha: impl Fn(f64) -> f64, t_end: f64, x0: [f64; 2]) -> [f64; 2] {
    let deriv = |t: f64, x: [f64; 2]| -> [f64; 2] {
        let a = alpha(t);
        // (1−a)·diag(0,−1) + a·[[−1,1],[−1,−1]] = [[−a, a], [−a, −1]]
        [-a * x[0] + a * x[1], -a * x[0] - x[1]]
    };
    let h: f64 = 1e-5;
    let steps = (t_end / h).round() as usize;
    let mut x = x0;
    for s in 0..steps {
        let t = s as f64 * h;
        let k1 = deriv(t, x);
        let k2 = deriv(t + h / 2.0, [x[0] + h / 2.0 * k1[0], x[1] + h / 2.0 * k1[1]]);
        let k3 = deriv(t + h / 2.0, [x[0] + h / 2.0 * k2[0], x[1] + h / 2.0 * k2[1]]);
        let k4 = deriv(t + h, [x[0] + h * k3[0], x[1] + h * k3[1]]);
        x = [
            x[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            x[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
    }
    x
}

fn main() -> switchgrade::Result<()> {
    let sys = sys_a();
    let t_end = 2.0;
    let x0 = [1.0, 0.0];
    let alpha = |t: f64| 0.5 * (1.0 - t.cos()); // smooth, weights in [0, 1]

    println!("law: α(t) = (1 − cos t)/2 on [0, {t_end}], start ({}, {})\n", x0[0], x0[1]);
    let reference = rk4_reference(alpha, t_end, x0);
    println!(
        "RK4 reference endpoint (step 1e-5): ({:.10}, {:.10})\n",
        reference[0], reference[1]
    );

    println!(
        "{:>8} {:>12} {:>12} {:>16} {:>12}",
        "ε", "certified k", "pieces", "measured error", "margin"
    );
    for eps in [0.3, 0.1, 0.03, 0.01] {
        let k = required_k(&sys, t_end, 1.0, eps)?;
        let law = MeasurableLaw::planar(alpha);
        let schedule = chatter_discretize(&law, t_end, k)?;
        let end = evolve_endpoint(&sys, &schedule, &x0)?;
        let err = ((end[0] - reference[0]).powi(2) + (end[1] - reference[1]).powi(2)).sqrt();
        println!(
            "{:>8} {:>12} {:>12} {:>16.3e} {:>11.0}x",
            eps,
            k,
            schedule.len(),
            err,
            eps / err
        );
    }

    println!(
        "\nEvery certified k meets its tolerance with orders of magnitude to\n\
         spare — the bound pays for covering *every* measurable law, not just\n\
         this smooth one."
    );
    Ok(())
}
