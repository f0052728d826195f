//! `‖φ‖_{H²} / ‖ψ‖_{L²}` for `Δφ = ψ` over a seeded random family, on two
//! grids.

use edamp::damping::{elliptic_ratio_report, EllipticFamily};
use edamp::geometry::StripGrid;

fn main() -> edamp::Result<()> {
    let fam = EllipticFamily { seed: 3, count: 20 };
    for (nx, ny) in [(16, 512), (32, 1024), (64, 2048)] {
        let r = elliptic_ratio_report(&fam, &StripGrid::new(nx, ny, 24.0)?)?;
        let min = r.ratios.iter().copied().fold(f64::INFINITY, f64::min);
        println!("nx = {nx:>3}, ny = {ny:>5}: ratio in [{min:.4}, {:.4}]", r.max);
    }
    Ok(())
}
