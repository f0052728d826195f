//! Exact transport along the background flow lines.
//!
//! Solves for the particle label at a few points, then advects an m = 1
//! bump and shows that the flow-line average of `W ω` does not move.

use edamp::geometry::StripGrid;
use edamp::transport::{advect_field, conserved_average, solve_label, GaussianBump};
use edamp::{EllipseGeometry, InitialVorticity};

fn main() -> edamp::Result<()> {
    let g = EllipseGeometry::from_semiaxes(2.0, 1.0)?;
    let tol = 1e-12;

    println!("{:>6} {:>6} {:>10} {:>8} {:>10}", "t", "y", "a", "turns", "residual");
    for t in [1.0, 10.0, 100.0] {
        for y in [0.0, 1.0] {
            let l = solve_label(t, 1.0, y, &g, tol)?;
            println!("{t:>6} {y:>6} {:>10.5} {:>8} {:>10.1e}", l.a, l.winding(), l.residual);
        }
    }

    let grid = StripGrid::new(128, 513, 5.0)?;
    let w0 = InitialVorticity::single_mode(1, GaussianBump { center: 1.0, width: 0.3 });
    let before = conserved_average(&advect_field(&w0, 0.0, &grid, &g, tol)?, &g);
    for t in [10.0, 100.0, 1000.0] {
        let omega = advect_field(&w0, t, &grid, &g, tol)?;
        let after = conserved_average(&omega, &g);
        let drift = before
            .iter()
            .zip(&after)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("t = {t:>6}: max |omega| = {:.4}, drift of <W omega> = {drift:.1e}", omega.max_abs());
    }
    Ok(())
}
