//! Unit-ball boundary polylines for the three extremal norms.
//!
//! Writes three CSV files to the working directory — the closed-form norm of
//! the freeze/decay pair (`ball_A.csv`), the tabulated norm of the shifted
//! rotation pair (`ball_B.csv`), and the two-generator comparison ball at
//! the tangency constant (`ball_cgm.csv`) — then prints the geometric
//! signatures a plot would show:
//!
//! * `ball_A` has long straight vertical faces at x = ±1 (the planar
//!   prototype of the 4D flatness phenomenon),
//! * `ball_B` is smooth and quarter-turn symmetric with radius ratio
//!   `exp(0.1283…)`,
//! * `ball_cgm` again has vertical segments, produced by a completely
//!   different two-matrix family tuned via its tangency constant α.
//!
//! Run with `cargo run --release --example ball_export`.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};

use switchgrade::barabanov::{cgm_ball_polyline, norm_a, norm_b_build};
use switchgrade::models::sys_b;

fn write_csv(path: &str, points: &[[f64; 2]]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "x,y")?;
    for p in points {
        writeln!(w, "{:.12e},{:.12e}", p[0], p[1])?;
    }
    Ok(())
}

fn describe(name: &str, points: &[[f64; 2]]) {
    let rmax = points.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    let rmin = points
        .iter()
        .map(|p| p[0].hypot(p[1]))
        .fold(f64::INFINITY, f64::min);
    let max_x = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let face: Vec<f64> = points
        .iter()
        .filter(|p| (p[0] - max_x).abs() <= 1e-9)
        .map(|p| p[1])
        .collect();
    let spread = face.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - face.iter().cloned().fold(f64::INFINITY, f64::min);
    println!(
        "{name}: {} points, radius ∈ [{rmin:.6}, {rmax:.6}] (log ratio {:.6}), \
         right face spread {spread:.4}",
        points.len(),
        (rmax / rmin).ln()
    );
}

fn main() -> switchgrade::Result<()> {
    let samples = 1440;

    // Closed-form ball: boundary point along each ray is dir / norm(dir).
    let ball_a: Vec<[f64; 2]> = (0..samples)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / samples as f64;
            let dir = [th.cos(), th.sin()];
            let n = norm_a(&dir);
            [dir[0] / n, dir[1] / n]
        })
        .collect();

    // Tabulated ball of the shifted pair.
    let model = norm_b_build(&sys_b(), 4096)?;
    let ball_b: Vec<[f64; 2]> = (0..samples)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / samples as f64;
            let dir = [th.cos(), th.sin()];
            let n = model.value(&dir);
            [dir[0] / n, dir[1] / n]
        })
        .collect();

    // Comparison family ball at the tangency constant.
    let ball_cgm = cgm_ball_polyline(720)?;

    write_csv("ball_A.csv", &ball_a)?;
    write_csv("ball_B.csv", &ball_b)?;
    write_csv("ball_cgm.csv", &ball_cgm)?;

    describe("ball_A  ", &ball_a);
    describe("ball_B  ", &ball_b);
    describe("ball_cgm", &ball_cgm);

    println!(
        "\nwrote ball_A.csv, ball_B.csv, ball_cgm.csv — plot them with any CSV\n\
         plotter; the straight vertical segments on ball_A and ball_cgm are\n\
         exact, not sampling artifacts."
    );
    Ok(())
}
