//! Strip Poisson problems `Δu = f` with `u(x, 0) = 0` and decay as `y → ∞`.
//!
//! Fourier in `x`, a two-point BVP per mode in `y` ([`bvp`]).

pub mod bvp;
mod field;
mod modes;

use rayon::prelude::*;

pub use bvp::{solve_mode_bvp, solve_mode_fd, solve_mode_kernel, solve_zero_mode};
pub use field::ScalarField;
pub use modes::{derivative_x, dft_x, idft_x, second_derivative_x, ModeSet};

use crate::geometry::EllipseGeometry;
use crate::stencil;
use crate::{Error, Result};

/// Relative bound on the flow-line mean accepted by [`solve_auxiliary_phi`].
pub const MEAN_FREE_TOL: f64 = 1e-8;

/// Solves `Δu = f` mode by mode and sets `u(x, 0) = 0`.
pub fn solve_poisson(f: &ScalarField) -> Result<ScalarField> {
    let grid = *f.grid();
    let modes = dft_x(f);
    let solved: Vec<Vec<_>> = (0..grid.nx())
        .into_par_iter()
        .map(|slot| {
            let k = modes.wavenumber(slot);
            let p = modes.profile(k);
            if k == 0 {
                bvp::solve_zero_mode_complex(p, &grid)
            } else {
                solve_mode_bvp(k, p, &grid)
            }
        })
        .collect::<Result<_>>()?;
    let mut u = idft_x(&ModeSet::from_slots(grid, solved));
    for i in 0..grid.nx() {
        u.set(i, 0, 0.0);
    }
    Ok(u)
}

/// Stream function of the perturbation: `Δψ = W ω`, `ψ(x, 0) = 0`.
pub fn solve_stream(omega: &ScalarField, g: &EllipseGeometry) -> Result<ScalarField> {
    solve_poisson(&omega.map_xy(|x, y, w| g.jacobian(x, y) * w))
}

/// Auxiliary potential `Δφ = ψ`, `φ(x, 0) = 0`, `φ → 0`.
///
/// Only defined when `ψ` has zero mean along every flow line.
pub fn solve_auxiliary_phi(psi: &ScalarField) -> Result<ScalarField> {
    let scale = l2_norm(psi);
    let max_mean = psi.row_means().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let limit = MEAN_FREE_TOL * scale;
    if max_mean > limit {
        return Err(Error::NotMeanFree { max_mean, limit });
    }
    solve_poisson(psi)
}

/// Fourth-order `∂ᵧ` along every column.
pub fn derivative_y(field: &ScalarField) -> ScalarField {
    map_columns(field, stencil::d1)
}

/// Fourth-order `∂ᵧᵧ` along every column.
pub fn second_derivative_y(field: &ScalarField) -> ScalarField {
    map_columns(field, stencil::d2)
}

fn map_columns(field: &ScalarField, f: impl Fn(&[f64], f64) -> Vec<f64>) -> ScalarField {
    let grid = *field.grid();
    let h = grid.dy();
    let values: Vec<f64> = (0..grid.nx())
        .flat_map(|i| f(field.column(i), h))
        .collect();
    ScalarField::from_values(grid, values).expect("derivative of a finite field")
}

/// Velocity components along and across the background streamlines:
/// `u∥ = −W^{−1/2} ∂ᵧψ`, `u⊥ = W^{−1/2} ∂ₓψ`.
pub fn velocity(psi: &ScalarField, g: &EllipseGeometry) -> (ScalarField, ScalarField) {
    let psi_x = derivative_x(psi);
    let psi_y = derivative_y(psi);
    let u_par = psi_y.map_xy(|x, y, v| -v / g.jacobian(x, y).sqrt());
    let u_perp = psi_x.map_xy(|x, y, v| v / g.jacobian(x, y).sqrt());
    (u_par, u_perp)
}

/// `√(∬ f² dx dy)` with periodic trapezoid in `x` and trapezoid in `y`.
pub(crate) fn l2_norm(f: &ScalarField) -> f64 {
    let grid = f.grid();
    let mut total = 0.0;
    for i in 0..grid.nx() {
        for (j, v) in f.column(i).iter().enumerate() {
            total += grid.y_weight(j) * v * v;
        }
    }
    (total * grid.dx()).sqrt()
}

/// `Δu − f` at interior rows: spectral `∂ₓₓ`, three-point `∂ᵧᵧ`. The first
/// and last rows are zero.
pub fn laplacian_residual(u: &ScalarField, f: &ScalarField) -> Result<ScalarField> {
    let uxx = second_derivative_x(u);
    let uyy = map_columns(u, stencil::d2_three_point);
    let mut r = uxx.plus(&uyy)?.minus(f)?;
    let grid = *u.grid();
    for i in 0..grid.nx() {
        r.set(i, 0, 0.0);
        r.set(i, grid.ny() - 1, 0.0);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::StripGrid;

    fn geometry() -> EllipseGeometry {
        EllipseGeometry::from_semiaxes(2.0, 1.0).unwrap()
    }

    fn manufactured_omega(grid: StripGrid, g: EllipseGeometry) -> ScalarField {
        ScalarField::from_fn(grid, move |x, y| -2.0 * (-y).exp() * x.cos() / g.jacobian(x, y))
    }

    #[test]
    fn zero_vorticity_gives_zero_stream() {
        let grid = StripGrid::new(16, 64, 5.0).unwrap();
        let psi = solve_stream(&ScalarField::zeros(grid), &geometry()).unwrap();
        assert_eq!(psi.max_abs(), 0.0);
    }

    #[test]
    fn manufactured_stream_function() {
        let g = geometry();
        let grid = StripGrid::new(16, 2048, 30.0).unwrap();
        let psi = solve_stream(&manufactured_omega(grid, g), &g).unwrap();
        let exact = ScalarField::from_fn(grid, |x, y| y * (-y).exp() * x.cos());
        let err = psi.minus(&exact).unwrap().max_abs();
        assert!(err < 2e-5, "{err}");
        for i in 0..grid.nx() {
            assert_eq!(psi.get(i, 0), 0.0);
        }
    }

    #[test]
    fn stream_solve_is_second_order() {
        let g = geometry();
        let err = |ny: usize| {
            let grid = StripGrid::new(8, ny, 30.0).unwrap();
            let psi = solve_stream(&manufactured_omega(grid, g), &g).unwrap();
            let exact = ScalarField::from_fn(grid, |x, y| y * (-y).exp() * x.cos());
            (l2_norm(&psi.minus(&exact).unwrap()), grid.dy())
        };
        let (e1, h1) = err(513);
        let (e2, h2) = err(1025);
        let order = (e1 / e2).ln() / (h1 / h2).ln();
        assert!((order - 2.0).abs() < 0.2, "{order}");
    }

    #[test]
    fn stream_solve_is_linear() {
        let g = geometry();
        let grid = StripGrid::new(16, 128, 6.0).unwrap();
        let w1 = ScalarField::from_fn(grid, |x, y| (x + y).sin() * (-y * y).exp());
        let w2 = ScalarField::from_fn(grid, |x, y| (3.0 * x).cos() * y * (-y).exp() + 0.2);
        let combo = w1.scaled(2.5).plus(&w2.scaled(-0.75)).unwrap();
        let lhs = solve_stream(&combo, &g).unwrap();
        let rhs = solve_stream(&w1, &g)
            .unwrap()
            .scaled(2.5)
            .plus(&solve_stream(&w2, &g).unwrap().scaled(-0.75))
            .unwrap();
        assert!(lhs.minus(&rhs).unwrap().max_abs() < 1e-13 * lhs.max_abs());
    }

    #[test]
    fn auxiliary_potential() {
        let grid = StripGrid::new(16, 1024, 20.0).unwrap();
        assert_eq!(
            solve_auxiliary_phi(&ScalarField::zeros(grid)).unwrap().max_abs(),
            0.0
        );
        let psi = ScalarField::from_fn(grid, |x, y| y * (-y).exp() * x.cos());
        let phi = solve_auxiliary_phi(&psi).unwrap();
        let resid = laplacian_residual(&phi, &psi).unwrap().max_abs();
        assert!(resid < 1e-10, "{resid}");
        // k = 1: φ″ − φ = y e^{−y}, φ(0) = 0 gives φ = −(y² + y) e^{−y} / 4
        let exact = ScalarField::from_fn(grid, |x, y| -(y * y + y) / 4.0 * (-y).exp() * x.cos());
        let err = phi.minus(&exact).unwrap().max_abs();
        assert!(err < 1e-4, "{err}");
        for i in 0..grid.nx() {
            assert_eq!(phi.get(i, 0), 0.0);
        }

        let biased = psi.map(|v| v + 0.01);
        assert!(matches!(
            solve_auxiliary_phi(&biased),
            Err(Error::NotMeanFree { .. })
        ));
    }

    #[test]
    fn velocity_examples() {
        let g = geometry();
        let grid = StripGrid::new(16, 401, 8.0).unwrap();
        let sheared = ScalarField::from_fn(grid, |_, y| 0.3 * y);
        let (_, u_perp) = velocity(&sheared, &g);
        assert!(u_perp.max_abs() < 1e-14);

        let psi = ScalarField::from_fn(grid, |x, y| y * (-y).exp() * x.cos());
        let (u_par, u_perp) = velocity(&psi, &g);
        let j = 50; // y = 1, where ∂ᵧ(y e^{−y}) = 0
        assert_eq!(grid.y(j), 1.0);
        assert!(u_par.get(0, j).abs() < 1e-6);
        let w = g.jacobian(grid.x(4), 1.0);
        let want = -(-1f64).exp() * grid.x(4).sin() / w.sqrt();
        assert!((u_perp.get(4, j) - want).abs() < 1e-13);
    }

    #[test]
    fn solution_satisfies_discrete_scheme() {
        let g = geometry();
        let grid = StripGrid::new(16, 1024, 6.0).unwrap();
        let w = ScalarField::from_fn(grid, |x, y| {
            (2.0 * x).cos() * (-(y - 2.0f64).powi(2)).exp()
                + x.sin() * (-(y - 1.0f64).powi(2) * 4.0).exp()
        });
        let f = w.map_xy(|x, y, v| g.jacobian(x, y) * v);
        let psi = solve_poisson(&f).unwrap();
        let resid = laplacian_residual(&psi, &f).unwrap().max_abs();
        assert!(resid < 1e-8 * f.max_abs(), "{resid}");
    }

    #[test]
    fn self_convergence_is_second_order() {
        let solve = |ny: usize| {
            let grid = StripGrid::new(16, ny, 6.0).unwrap();
            let f = ScalarField::from_fn(grid, |x, y| {
                (2.0 * x).cos() * (3.0 * y).sin() * (-(y - 2.0f64).powi(2)).exp()
            });
            solve_poisson(&f).unwrap()
        };
        let (a, b, c) = (solve(201), solve(401), solve(801));
        let diff = |u: &ScalarField, v: &ScalarField| {
            let mut worst = 0.0f64;
            for i in 0..16 {
                for j in 0..u.grid().ny() {
                    worst = worst.max((u.get(i, j) - v.get(i, 2 * j)).abs());
                }
            }
            worst
        };
        let order = (diff(&a, &b) / diff(&b, &c)).log2();
        assert!((order - 2.0).abs() < 0.15, "{order}");
    }
}
