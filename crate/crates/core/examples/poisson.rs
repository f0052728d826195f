//! Stream function on the half strip, checked against `ψ = y e^{−y} cos x`.

use edamp::geometry::StripGrid;
use edamp::poisson::solve_stream;
use edamp::{EllipseGeometry, ScalarField};

fn main() -> edamp::Result<()> {
    let g = EllipseGeometry::from_semiaxes(2.0, 1.0)?;
    let mut prev: Option<f64> = None;
    println!("{:>6} {:>12} {:>7}", "ny", "max error", "order");
    for ny in [257, 513, 1025, 2049] {
        let grid = StripGrid::new(16, ny, 30.0)?;
        // Δψ = −2 e^{−y} cos x, and Δψ = W ω.
        let omega = ScalarField::from_fn(grid, |x, y| -2.0 * (-y).exp() * x.cos() / g.jacobian(x, y));
        let psi = solve_stream(&omega, &g)?;
        let exact = ScalarField::from_fn(grid, |x, y| y * (-y).exp() * x.cos());
        let err = psi.minus(&exact)?.max_abs();
        let order = prev.map(|p| format!("{:.3}", (p / err).log2())).unwrap_or_default();
        println!("{ny:>6} {err:>12.3e} {order:>7}");
        prev = Some(err);
    }
    Ok(())
}
