//! Two-point boundary value problems in `y` for a single Fourier mode.
//!
//! For `k ≠ 0`: `u″ − k² u = f`, `u(0) = 0`, `u` decaying, truncated at
//! `ymax` with the closure `u′ + |k| u = 0` (exact for an `e^{−|k|y}` tail).
//! For `k = 0`: `u″ = f`, `u(0) = 0`, `u′(ymax) = 0`.
//!
//! Two routes are provided:
//!
//! * [`solve_mode_bvp`] / [`solve_mode_fd`]: three-point finite differences
//!   with a ghost-node closure, solved by the Thomas algorithm. This is what
//!   the stream-function solver uses.
//! * [`solve_mode_kernel`]: the Green's kernel
//!   `G(y, ỹ) = −sinh(|k| y<) e^{−|k| y>} / |k|` applied by trapezoid
//!   quadrature. It is exponentially fitted: quasi-polynomial forcing such as
//!   `e^{−|k|y}` is reproduced to round-off, which makes it useless for
//!   convergence studies on those manufactured solutions, so it serves as a
//!   cross-check.
//!
//! For `k = 0` the trapezoid `−min(y, ỹ)` kernel ([`solve_zero_mode`]) and the
//! three-point scheme with the Neumann ghost node are the same linear map.
//! All of these operators are self-adjoint in the trapezoid inner product.

use num_complex::Complex64;

use super::field::check_profile;
use crate::geometry::StripGrid;
use crate::{Error, Result};

/// Green's-kernel solve of `u″ − k² u = f` for real data.
pub fn solve_mode_kernel(k: i64, f: &[f64], grid: &StripGrid) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::ZeroModeRejected);
    }
    check_profile(grid, f.len())?;
    let n = f.len();
    let kappa = k.unsigned_abs() as f64;
    let h = grid.dy();
    let decay = (-kappa * h).exp();
    let wf: Vec<f64> = (0..n).map(|j| grid.y_weight(j) * f[j]).collect();

    // left[i]  = Σ_{j ≤ i} w_j f_j e^{−κ(y_i − y_j)}
    // right[i] = Σ_{j > i} w_j f_j e^{−κ(y_j − y_i)}
    let mut left = vec![0.0; n];
    let mut acc = 0.0;
    for j in 0..n {
        acc = acc * decay + wf[j];
        left[j] = acc;
    }
    let mut right = vec![0.0; n];
    let mut acc = 0.0;
    for j in (0..n - 1).rev() {
        acc = (acc + wf[j + 1]) * decay;
        right[j] = acc;
    }
    let image: f64 = (0..n).map(|j| wf[j] * (-kappa * grid.y(j)).exp()).sum();

    let scale = -0.5 / kappa;
    let mut u: Vec<f64> = (0..n)
        .map(|i| scale * (left[i] + right[i] - (-kappa * grid.y(i)).exp() * image))
        .collect();
    u[0] = 0.0;
    Ok(u)
}

/// Solves `u″ − k² u = f` for a complex profile, `k ≠ 0`.
pub fn solve_mode_bvp(k: i64, f: &[Complex64], grid: &StripGrid) -> Result<Vec<Complex64>> {
    if k == 0 {
        return Err(Error::ZeroModeRejected);
    }
    let (re, im): (Vec<f64>, Vec<f64>) = f.iter().map(|c| (c.re, c.im)).unzip();
    let ur = solve_mode_fd(k, &re, grid)?;
    let ui = solve_mode_fd(k, &im, grid)?;
    Ok(ur
        .into_iter()
        .zip(ui)
        .map(|(a, b)| Complex64::new(a, b))
        .collect())
}

/// Solves `r″ = f`, `r(0) = 0`, `r′(ymax) = 0` as
/// `r(y) = −∫ min(ỹ, y) f(ỹ) dỹ`.
pub fn solve_zero_mode(f: &[f64], grid: &StripGrid) -> Result<Vec<f64>> {
    check_profile(grid, f.len())?;
    let n = f.len();
    let wf: Vec<f64> = (0..n).map(|j| grid.y_weight(j) * f[j]).collect();
    let mut below = vec![0.0; n]; // Σ_{j ≤ i} w_j y_j f_j
    let mut acc = 0.0;
    for j in 0..n {
        acc += wf[j] * grid.y(j);
        below[j] = acc;
    }
    let mut above = vec![0.0; n]; // Σ_{j > i} w_j f_j
    let mut acc = 0.0;
    for j in (0..n - 1).rev() {
        acc += wf[j + 1];
        above[j] = acc;
    }
    let mut r: Vec<f64> = (0..n).map(|i| -(below[i] + grid.y(i) * above[i])).collect();
    r[0] = 0.0;
    Ok(r)
}

pub fn solve_zero_mode_complex(f: &[Complex64], grid: &StripGrid) -> Result<Vec<Complex64>> {
    let (re, im): (Vec<f64>, Vec<f64>) = f.iter().map(|c| (c.re, c.im)).unzip();
    let a = solve_zero_mode(&re, grid)?;
    let b = solve_zero_mode(&im, grid)?;
    Ok(a.into_iter()
        .zip(b)
        .map(|(x, y)| Complex64::new(x, y))
        .collect())
}

/// Three-point finite-difference solve of `u″ − k² u = f` with `u(0) = 0`
/// and the closure `u′ + |k| u = 0` at `ymax` (Neumann for `k = 0`).
pub fn solve_mode_fd(k: i64, f: &[f64], grid: &StripGrid) -> Result<Vec<f64>> {
    check_profile(grid, f.len())?;
    let n = f.len();
    let h = grid.dy();
    let h2 = h * h;
    let kappa = k.unsigned_abs() as f64;

    // unknowns u_1 .. u_{n−1}; tridiagonal rows (lower, diag, upper) = rhs
    let m = n - 1;
    let mut lower = vec![1.0 / h2; m];
    let mut diag = vec![-2.0 / h2 - kappa * kappa; m];
    let mut upper = vec![1.0 / h2; m];
    let mut rhs: Vec<f64> = f[1..].to_vec();
    lower[0] = 0.0;
    upper[m - 1] = 0.0;
    // ghost node u_n = u_{n−2} − 2 h κ u_{n−1}
    lower[m - 1] = 2.0 / h2;
    diag[m - 1] = -(2.0 + 2.0 * h * kappa) / h2 - kappa * kappa;

    // Thomas algorithm
    for r in 1..m {
        let w = lower[r] / diag[r - 1];
        diag[r] -= w * upper[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    let mut u = vec![0.0; n];
    u[m] = rhs[m - 1] / diag[m - 1];
    for r in (0..m - 1).rev() {
        u[r + 1] = (rhs[r] - upper[r] * u[r + 2]) / diag[r];
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stencil;

    fn grid(ny: usize, ymax: f64) -> StripGrid {
        StripGrid::new(8, ny, ymax).unwrap()
    }

    fn sup(a: &[f64], b: impl Fn(f64) -> f64, g: &StripGrid) -> f64 {
        a.iter()
            .enumerate()
            .map(|(j, v)| (v - b(g.y(j))).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn manufactured_mode_one() {
        // u = y e^{−y} solves u″ − u = −2 e^{−y}
        let g = grid(2001, 30.0);
        let f: Vec<f64> = g.ys().iter().map(|y| -2.0 * (-y).exp()).collect();
        let u = solve_mode_kernel(1, &f, &g).unwrap();
        let err = sup(&u, |y| y * (-y).exp(), &g);
        assert!(err < 1e-4, "{err}");
        assert_eq!(u[0], 0.0);
        let fd = solve_mode_fd(1, &f, &g).unwrap();
        assert!(sup(&fd, |y| y * (-y).exp(), &g) < 1e-4);
    }

    #[test]
    fn kernel_is_exact_on_fitted_solution() {
        // y e^{−y} lies in the span the kernel reproduces exactly
        for ny in [301, 601] {
            let g = grid(ny, 30.0);
            let f: Vec<f64> = g.ys().iter().map(|y| -2.0 * (-y).exp()).collect();
            let u = solve_mode_kernel(1, &f, &g).unwrap();
            assert!(sup(&u, |y| y * (-y).exp(), &g) < 1e-12);
        }
    }

    #[test]
    fn fd_solver_is_second_order() {
        let err = |ny: usize| {
            let g = grid(ny, 30.0);
            let f: Vec<f64> = g.ys().iter().map(|y| -2.0 * (-y).exp()).collect();
            let u = solve_mode_fd(1, &f, &g).unwrap();
            (sup(&u, |y| y * (-y).exp(), &g), g.dy())
        };
        let (e1, h1) = err(301);
        let (e2, h2) = err(601);
        let order = (e1 / e2).ln() / (h1 / h2).ln();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn kernel_solver_is_second_order_for_generic_forcing() {
        let forcing = |y: f64| (3.0 * y).sin() * (-(y - 1.0f64).powi(2)).exp();
        let solve = |ny: usize| {
            let g = grid(ny, 8.0);
            let f: Vec<f64> = g.ys().iter().map(|&y| forcing(y)).collect();
            solve_mode_kernel(2, &f, &g).unwrap()
        };
        let (a, b, c) = (solve(201), solve(401), solve(801));
        let d1 = (0..201).map(|j| (a[j] - b[2 * j]).abs()).fold(0.0, f64::max);
        let d2 = (0..401).map(|j| (b[j] - c[2 * j]).abs()).fold(0.0, f64::max);
        let order = (d1 / d2).log2();
        assert!((order - 2.0).abs() < 0.15, "order {order}");
    }

    #[test]
    fn zero_forcing_gives_zero() {
        let g = grid(64, 3.0);
        assert!(solve_mode_kernel(3, &[0.0; 64], &g).unwrap().iter().all(|&v| v == 0.0));
        assert!(solve_zero_mode(&[0.0; 64], &g).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_zero_wavenumber_and_bad_lengths() {
        let g = grid(64, 3.0);
        assert!(matches!(
            solve_mode_kernel(0, &[0.0; 64], &g),
            Err(Error::ZeroModeRejected)
        ));
        assert!(matches!(
            solve_zero_mode(&[0.0; 10], &g),
            Err(Error::ProfileLength { .. })
        ));
    }

    #[test]
    fn zero_mode_exponential() {
        // r = 1 − e^{−y} solves r″ = −e^{−y}; r′(ymax) = e^{−ymax} ≈ 0
        let g = grid(4001, 40.0);
        let f: Vec<f64> = g.ys().iter().map(|y| -(-y).exp()).collect();
        let r = solve_zero_mode(&f, &g).unwrap();
        let err = sup(&r, |y| 1.0 - (-y).exp(), &g);
        assert!(err < 1e-4, "{err}");
        assert_eq!(r[0], 0.0);
    }

    #[test]
    fn residuals_are_second_order_for_smooth_forcing() {
        let forcing = |y: f64| (3.0 * y).sin() * (-(y - 1.0f64).powi(2)).exp();
        let resid = |ny: usize, k: i64| {
            let g = grid(ny, 6.0);
            let f: Vec<f64> = g.ys().iter().map(|&y| forcing(y)).collect();
            let u = if k == 0 {
                solve_zero_mode(&f, &g).unwrap()
            } else {
                solve_mode_kernel(k, &f, &g).unwrap()
            };
            let upp = stencil::d2_three_point(&u, g.dy());
            (1..ny - 1)
                .map(|j| (upp[j] - (k * k) as f64 * u[j] - f[j]).abs())
                .fold(0.0, f64::max)
        };
        // the zero-mode kernel is the exact inverse of the three-point operator
        assert!(resid(201, 0) < 1e-11);
        let (a, b) = (resid(201, 2), resid(401, 2));
        assert!(a < 0.05 && (a / b).log2() > 1.8, "{a} {b}");
    }

    #[test]
    fn kernel_and_fd_agree() {
        let g = grid(2048, 6.0);
        let f: Vec<f64> = g
            .ys()
            .iter()
            .map(|&y| (5.0 * y).cos() * (-(y - 1.5f64).powi(2) / 0.3).exp())
            .collect();
        for k in [0i64, 1, 2, 7] {
            let a = if k == 0 {
                solve_zero_mode(&f, &g).unwrap()
            } else {
                solve_mode_kernel(k, &f, &g).unwrap()
            };
            let b = solve_mode_fd(k, &f, &g).unwrap();
            let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let diff = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            assert!(diff < 1e-4 * scale, "k={k}: {diff} vs {scale}");
        }
    }

    #[test]
    fn kernel_operator_is_symmetric() {
        let g = grid(300, 5.0);
        let f1: Vec<f64> = g.ys().iter().map(|&y| (2.0 * y).sin() * (-y).exp()).collect();
        let f2: Vec<f64> = g.ys().iter().map(|&y| y * (-(y - 1.0f64).powi(2)).exp()).collect();
        let ip = |a: &[f64], b: &[f64]| -> f64 {
            (0..a.len()).map(|j| g.y_weight(j) * a[j] * b[j]).sum()
        };
        for k in [0, 1, 4] {
            let solve = |f: &[f64]| {
                if k == 0 {
                    solve_zero_mode(f, &g).unwrap()
                } else {
                    solve_mode_kernel(k, f, &g).unwrap()
                }
            };
            let (u1, u2) = (solve(&f1), solve(&f2));
            let (a, b) = (ip(&u1, &f2), ip(&f1, &u2));
            assert!((a - b).abs() < 1e-13 * a.abs().max(1e-3), "k={k}: {a} {b}");
        }
    }
}
