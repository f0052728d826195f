//! Confocal elliptic coordinates around an A/B = 2 cylinder.
//!
//! Prints a few flow lines in physical coordinates and checks the inverse
//! map and the Jacobian against finite differences.

use edamp::EllipseGeometry;

fn main() -> edamp::Result<()> {
    let g = EllipseGeometry::from_semiaxes(2.0, 1.0)?;
    println!("C = {:.6}, Psi = {:.6}", g.c(), g.psi());

    for y in [0.0, 0.5, 1.0] {
        let (a, b) = g.to_physical(0.0, y);
        let (_, b2) = g.to_physical(-std::f64::consts::FRAC_PI_2, y);
        println!("flow line y = {y}: semiaxes {a:.4} x {:.4}", b2.abs().max(b.abs()));
    }

    let mut worst = 0.0f64;
    let mut worst_jac = 0.0f64;
    let h = 1e-6;
    for i in 0..64 {
        let x = i as f64 * std::f64::consts::TAU / 64.0;
        for y in [0.01, 0.3, 1.0, 3.0] {
            let (bx, by) = g.to_physical(x, y);
            let (x2, y2) = g.to_elliptic(bx, by)?;
            let dx = (x2 - x).rem_euclid(std::f64::consts::TAU);
            worst = worst.max(dx.min(std::f64::consts::TAU - dx)).max((y2 - y).abs());

            let (p, m) = (g.to_physical(x + h, y), g.to_physical(x - h, y));
            let speed2 = ((p.0 - m.0).powi(2) + (p.1 - m.1).powi(2)) / (4.0 * h * h);
            worst_jac = worst_jac.max((speed2 - g.jacobian(x, y)).abs() / g.jacobian(x, y));
        }
    }
    println!("round-trip error {worst:.2e}");
    println!("|dZ/dx|^2 vs W relative error {worst_jac:.2e}");
    Ok(())
}
