//! Norm-preserving witness trajectories.
//!
//! A Barabanov norm comes with a guarantee: from *every* starting point some
//! admissible switching law keeps `e^{−tΛ}·‖x(t)‖` exactly constant. This
//! example constructs such witnesses for both planar model families:
//!
//! * For the freeze/decay pair the witness is a two-phase schedule — rotate
//!   with the damped-rotation generator until the state reaches the critical
//!   angle of its closed-form norm, then hold the freeze generator forever.
//! * For the shifted rotation pair the witness follows the pointwise-optimal
//!   generator read off the polar table; the resulting bang-bang schedule
//!   returns to its starting ray after one full revolution.
//!
//! Run with `cargo run --release --example extremal_trajectory`.

use switchgrade::barabanov::{extremal_schedule, norm_a, norm_a_argmax, norm_b_build, NormModel};
use switchgrade::models::{sys_a, sys_b};
use switchgrade::system::{evolve, EvolveOptions};
use switchgrade::Schedule;

fn main() -> switchgrade::Result<()> {
    // --- Two-phase witness for the freeze/decay family --------------------
    let sys = sys_a();
    let start = [0.0, 1.0];
    let base = norm_a(&start);
    let (tau0, _) = norm_a_argmax(&start);
    println!(
        "freeze/decay family: start ({}, {}), norm {:.10}, critical angle τ₀ = {:.6}",
        start[0], start[1], base, tau0
    );

    let mut schedule = Schedule::new(2);
    if tau0 > 0.0 {
        schedule.push(tau0, &[0.0, 1.0])?; // phase 1: damped rotation
    }
    schedule.push(6.0, &[1.0, 0.0])?; // phase 2: freeze
    let traj = evolve(&sys, &schedule, &start, &EvolveOptions { sample_step: Some(0.25) })?;

    println!("{:>8} {:>12} {:>12} {:>14}", "t", "x1", "x2", "norm drift");
    let mut worst: f64 = 0.0;
    for i in 0..traj.len() {
        let drift = norm_a(traj.state(i)) - base;
        worst = worst.max(drift.abs());
        if i % 4 == 0 || i + 1 == traj.len() {
            let x = traj.state(i);
            println!("{:>8.3} {:>12.6} {:>12.6} {:>14.2e}", traj.time(i), x[0], x[1], drift);
        }
    }
    println!("max |norm − norm₀| along the path: {worst:.2e}\n");

    // --- Periodic bang-bang witness for the shifted rotation pair ---------
    let model = norm_b_build(&sys_b(), 4096)?;
    let NormModel::PolarTable(table) = &model else {
        unreachable!("norm_b_build returns a polar table");
    };
    println!(
        "shifted rotation pair: polar table with {} nodes, {} switching angles per turn",
        table.n_nodes(),
        table.knots().len()
    );

    let theta0 = 0.3;
    let period = table.period_time();
    let schedule = extremal_schedule(table, theta0, 2.0 * period)?;
    // Start exactly on the unit sphere of the extremal norm along ray θ₀.
    let r = 1.0 / model.value(&[theta0.cos(), theta0.sin()]);
    let x0 = [r * theta0.cos(), r * theta0.sin()];
    let traj = evolve(&sys_b(), &schedule, &x0, &EvolveOptions { sample_step: Some(period / 24.0) })?;

    println!("bang-bang schedule: {} pieces, period time {:.6}", schedule.len(), period);
    println!("{:>8} {:>12} {:>12} {:>14}", "t", "x1", "x2", "norm drift");
    let mut worst: f64 = 0.0;
    for i in 0..traj.len() {
        let drift = model.value(traj.state(i)) - 1.0;
        worst = worst.max(drift.abs());
        if i % 8 == 0 || i + 1 == traj.len() {
            let x = traj.state(i);
            println!("{:>8.3} {:>12.6} {:>12.6} {:>14.2e}", traj.time(i), x[0], x[1], drift);
        }
    }
    let end = traj.endpoint();
    println!("max |norm − 1| along two revolutions: {worst:.2e}");
    println!(
        "return after two periods: ({:.9}, {:.9}) vs start ({:.9}, {:.9})",
        end[0], end[1], x0[0], x0[1]
    );
    Ok(())
}
