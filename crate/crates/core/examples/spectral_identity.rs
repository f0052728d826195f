//! The Fourier-side expression for `‖ψ(t)‖²` against direct quadrature.
//!
//! The data has its flow-line mean removed so that the auxiliary potential
//! `Δφ = ψ` exists.

use edamp::damping::{build_tilde, spectral_norm_psi, spectral_norm_psix, spectral_norm_psiy, strip_norm};
use edamp::geometry::StripGrid;
use edamp::poisson::{derivative_x, derivative_y, solve_auxiliary_phi, solve_stream};
use edamp::transport::{advect_field, Fluctuation, GaussianBump};
use edamp::{EllipseGeometry, InitialVorticity};

fn main() -> edamp::Result<()> {
    let g = EllipseGeometry::from_semiaxes(2.0, 1.0)?;
    let grid = StripGrid::new(64, 1024, 6.0)?;
    let tol = 1e-12;
    let w = Fluctuation {
        base: InitialVorticity::random(7, GaussianBump { center: 0.6, width: 0.4 }),
        geometry: g,
    };
    let tilde = build_tilde(&w, &grid, &g, tol)?;

    println!("{:>5} {:>8} {:>12} {:>12} {:>9}", "t", "norm", "direct", "spectral", "rel err");
    for t in [0.0, 10.0, 50.0] {
        let psi = solve_stream(&advect_field(&w, t, &grid, &g, tol)?, &g)?;
        let phi = solve_auxiliary_phi(&psi)?;
        let rows = [
            ("psi", strip_norm(&psi), spectral_norm_psi(&tilde, &phi, t, &g, tol)?),
            ("psi_x", strip_norm(&derivative_x(&psi)), spectral_norm_psix(&tilde, &phi, t, &g, tol)?),
            ("psi_y", strip_norm(&derivative_y(&psi)), spectral_norm_psiy(&tilde, &phi, t, &g, tol)?),
        ];
        for (name, direct, spec) in rows {
            let d = direct * direct;
            println!("{t:>5} {name:>8} {d:>12.5e} {:>12.5e} {:>9.1e}", spec.value, (spec.value - d).abs() / d);
        }
    }
    Ok(())
}
