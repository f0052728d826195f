use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::asymptotics::{
    kernel_profiles, stream_residual, s_forcing, s_residual, upper_tail_s, zero_mode_vorticity,
    AverageState,
};
use crate::damping::{
    build_tilde, spectral_norm_psi, spectral_norm_psix, spectral_norm_psiy, stated_norm_psix,
    stated_norm_psiy, strip_norm,
};
use crate::geometry::{reduce_angle, EllipseGeometry, StripGrid};
use crate::poisson::{
    bvp, derivative_x, derivative_y, dft_x, solve_auxiliary_phi, solve_stream, ScalarField,
};
use crate::transport::{
    advect_field, conserved_average, solve_label, Fluctuation, Vorticity,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Passes when `value ≤ threshold`.
    AtMost,
    /// Passes when `value ≥ threshold`.
    AtLeast,
    /// Reported only.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, value: f64, bound: Bound, threshold: f64) -> Self {
        let pass = match bound {
            Bound::AtMost => value <= threshold,
            Bound::AtLeast => value >= threshold,
            Bound::Info => true,
        };
        Self {
            name: name.to_string(),
            value,
            threshold,
            bound,
            pass,
        }
    }

    fn info(name: &str, value: f64) -> Self {
        Self::new(name, value, Bound::Info, f64::NAN)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub config_sha256: String,
    pub warnings: Vec<String>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Runs the full invariant suite for a configuration.
pub fn validate(cfg: &ExperimentConfig) -> Result<ValidationReport> {
    let g = cfg.geometry()?;
    let grid = cfg.strip_grid()?;
    let tol = cfg.tolerances;
    let mut checks = Vec::new();

    checks.push(Check::new(
        "coordinate_round_trip",
        round_trip_error(&g, grid.ymax()),
        Bound::AtMost,
        tol.round_trip,
    ));
    checks.push(Check::new(
        "conformal_jacobian",
        jacobian_error(&g, grid.ymax()),
        Bound::AtMost,
        1e-6,
    ));
    let (residual, identity) = label_errors(&g, grid.ymax(), tol.label)?;
    checks.push(Check::new("label_residual", residual, Bound::AtMost, tol.label));
    checks.push(Check::new("label_identity_at_t0", identity, Bound::AtMost, 1e-12));

    let w0 = cfg.initial_vorticity()?;
    let mut times = vec![0.0];
    times.extend(cfg.time_samples());
    checks.push(Check::new(
        "conservation_drift",
        conservation_drift(&w0, &times, &grid, &g, tol.label)?,
        Bound::AtMost,
        tol.conservation,
    ));

    let order = manufactured_order(&g)?;
    checks.push(Check::new(
        "poisson_order_deviation",
        (order - 2.0).abs(),
        Bound::AtMost,
        tol.order_band,
    ));
    checks.push(Check::info("poisson_order", order));

    checks.push(Check::new("parseval", parseval_error(&grid, &w0), Bound::AtMost, 1e-10));

    let av = zero_mode_vorticity(&w0, &grid, &g);
    let profiles = profile_checks(&av, &grid, &g)?;
    checks.push(Check::new("s_kernel_vs_fd", profiles.kernel_vs_fd, Bound::AtMost, tol.profile));
    checks.push(Check::info("s_kernel_residual", profiles.kernel_residual));
    checks.push(Check::info("s_upper_tail_residual", profiles.tail_residual));
    checks.push(Check::new(
        "s_upper_tail_residual_ratio",
        profiles.tail_residual / profiles.kernel_residual.max(f64::MIN_POSITIVE),
        Bound::AtLeast,
        10.0,
    ));
    let state = AverageState::new(&av, &grid, &g)?;
    let split = stream_residual(&state, &g)?;
    checks.push(Check::new(
        "psi_av_residual",
        split.mode0.max(split.mode2).max(split.others),
        Bound::AtMost,
        1e-8,
    ));

    let fluct = Fluctuation {
        base: w0,
        geometry: g,
    };
    for t in [0.0, 10.0, 50.0] {
        for c in spectral_checks(&fluct, t, &grid, &g, tol.label, tol.spectral)? {
            checks.push(c);
        }
    }

    let passed = checks.iter().all(|c| c.pass);
    Ok(ValidationReport {
        config_sha256: cfg.hash(),
        warnings: cfg.warnings(),
        checks,
        passed,
    })
}

fn rng() -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed)
}

/// Max over random points of the angle/level error after a physical round trip.
pub fn round_trip_error(g: &EllipseGeometry, ymax: f64) -> f64 {
    let mut rng = rng();
    let mut worst = 0.0f64;
    for _ in 0..2000 {
        let x = rng.random_range(0.0..std::f64::consts::TAU);
        let y = rng.random_range(0.0..ymax);
        let (bx, by) = g.to_physical(x, y);
        let Ok((x2, y2)) = g.to_elliptic(bx, by) else {
            return f64::INFINITY;
        };
        let dx = reduce_angle(x2 - x + std::f64::consts::PI) - std::f64::consts::PI;
        worst = worst.max(dx.abs()).max((y2 - y).abs());
    }
    worst
}

/// Relative difference between `W` and a centered-difference determinant of
/// the coordinate map.
pub fn jacobian_error(g: &EllipseGeometry, ymax: f64) -> f64 {
    let mut rng = rng();
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let x = rng.random_range(0.0..std::f64::consts::TAU);
        let y = rng.random_range(h..ymax);
        let (xp, xm) = (g.to_physical(x + h, y), g.to_physical(x - h, y));
        let (yp, ym) = (g.to_physical(x, y + h), g.to_physical(x, y - h));
        let (a, b) = ((xp.0 - xm.0) / (2.0 * h), (xp.1 - xm.1) / (2.0 * h));
        let (c, d) = ((yp.0 - ym.0) / (2.0 * h), (yp.1 - ym.1) / (2.0 * h));
        let det = (a * d - b * c).abs();
        let w = g.jacobian(x, y);
        worst = worst.max((det - w).abs() / w);
    }
    worst
}

/// `(max label residual, max |a(0, x, y) − x|)` over random points.
pub fn label_errors(g: &EllipseGeometry, ymax: f64, tol: f64) -> Result<(f64, f64)> {
    let mut rng = rng();
    let (mut residual, mut identity) = (0.0f64, 0.0f64);
    for _ in 0..2000 {
        let x = rng.random_range(0.0..std::f64::consts::TAU);
        let y = rng.random_range(0.0..ymax);
        let t = rng.random_range(0.0..400.0);
        residual = residual.max(solve_label(t, x, y, g, tol)?.residual);
        identity = identity.max((solve_label(0.0, x, y, g, tol)?.a - x).abs());
    }
    Ok((residual, identity))
}

/// Max over `times` of `max_y |⟨Wω(t)⟩ − ⟨Wω(0)⟩|`, relative to
/// `max_y |⟨Wω(0)⟩|` (or absolute when that vanishes).
pub fn conservation_drift<V: Vorticity + ?Sized>(
    w0: &V,
    times: &[f64],
    grid: &StripGrid,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<f64> {
    let start = conserved_average(&advect_field(w0, 0.0, grid, g, tol)?, g);
    let scale = start.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for &t in times {
        let later = conserved_average(&advect_field(w0, t, grid, g, tol)?, g);
        let d = start
            .iter()
            .zip(&later)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(d);
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

/// `ψ = y e^{−y} cos x` through the stream solver.
pub fn manufactured_error(g: &EllipseGeometry, ny: usize) -> Result<f64> {
    let grid = StripGrid::new(16, ny, 30.0)?;
    let omega = ScalarField::from_fn(grid, |x, y| -2.0 * (-y).exp() * x.cos() / g.jacobian(x, y));
    let psi = solve_stream(&omega, g)?;
    let exact = ScalarField::from_fn(grid, |x, y| y * (-y).exp() * x.cos());
    Ok(strip_norm(&psi.minus(&exact)?))
}

/// Least-squares order of the manufactured error over `ny ∈ {512, 1024, 2048}`.
pub fn manufactured_order(g: &EllipseGeometry) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for ny in [512, 1024, 2048] {
        let h = 30.0 / (ny - 1) as f64;
        xs.push(h.ln());
        ys.push(manufactured_error(g, ny)?.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

fn parseval_error<V: Vorticity + ?Sized>(grid: &StripGrid, w0: &V) -> f64 {
    let f = ScalarField::from_fn(*grid, |x, y| w0.eval(x, y));
    let a = strip_norm(&f).powi(2);
    let b = dft_x(&f).parseval_sum();
    if a > 0.0 {
        (a - b).abs() / a
    } else {
        b.abs()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfileChecks {
    /// Relative sup difference of the kernel-form `s` and the FD solve.
    pub kernel_vs_fd: f64,
    pub kernel_residual: f64,
    pub tail_residual: f64,
}

pub fn profile_checks(av: &[f64], grid: &StripGrid, g: &EllipseGeometry) -> Result<ProfileChecks> {
    let k = kernel_profiles(av, grid, g)?;
    let fd = bvp::solve_mode_fd(2, &s_forcing(av, g), grid)?;
    let scale = fd.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = k.s.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let kernel_vs_fd = if scale > 0.0 { diff / scale } else { diff };
    let kr = s_residual(&k.s, av, grid, g);
    let tr = s_residual(&upper_tail_s(av, grid, g), av, grid, g);
    Ok(ProfileChecks {
        kernel_vs_fd,
        kernel_residual: kr.interior.max(kr.boundary),
        tail_residual: tr.interior.max(tr.boundary),
    })
}

/// Spectral versus physical norms of `ψ`, `ψ_x`, `ψ_y` at time `t` for
/// mean-free data; the compressed derivative forms are reported only.
pub fn spectral_checks<V: Vorticity + ?Sized>(
    w: &V,
    t: f64,
    grid: &StripGrid,
    g: &EllipseGeometry,
    tol: f64,
    limit: f64,
) -> Result<Vec<Check>> {
    let tilde = build_tilde(w, grid, g, tol)?;
    let omega = advect_field(w, t, grid, g, tol)?;
    let psi = solve_stream(&omega, g)?;
    let phi = solve_auxiliary_phi(&psi)?;
    let rel = |got: f64, want: f64| (got - want).abs() / want.abs().max(f64::MIN_POSITIVE);
    let n_psi = strip_norm(&psi).powi(2);
    let n_x = strip_norm(&derivative_x(&psi)).powi(2);
    let n_y = strip_norm(&derivative_y(&psi)).powi(2);
    let s = spectral_norm_psi(&tilde, &phi, t, g, tol)?;
    let sx = spectral_norm_psix(&tilde, &phi, t, g, tol)?;
    let sy = spectral_norm_psiy(&tilde, &phi, t, g, tol)?;
    let stated_x = stated_norm_psix(&tilde, &phi, t, g, tol)?;
    let stated_y = stated_norm_psiy(&tilde, &phi, t, g, tol)?;
    Ok(vec![
        Check::new(&format!("spectral_psi_t{t}"), rel(s.value, n_psi), Bound::AtMost, limit),
        Check::new(&format!("spectral_psix_t{t}"), rel(sx.value, n_x), Bound::AtMost, limit),
        Check::new(&format!("spectral_psiy_t{t}"), rel(sy.value, n_y), Bound::AtMost, limit),
        Check::info(&format!("stated_psix_t{t}"), rel(stated_x.value, n_x)),
        Check::info(&format!("stated_psiy_t{t}"), rel(stated_y.value, n_y)),
    ])
}
