//! Norms, decay series and power-law fits.
//!
//! Norms are taken over the truncated strip `[0, 2π) × [0, ymax]`, either
//! with the plain `dx dy` measure ([`strip_norm`]) or with the pulled-back
//! physical measure `W dx dy` ([`physical_norm`]).

mod elliptic;
mod spectral;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use elliptic::{elliptic_ratio, elliptic_ratio_report, h2_norm, EllipticFamily, RatioReport};
pub use spectral::{
    build_tilde, phase, phi_modes, spectral_norm_psi, spectral_norm_psix, spectral_norm_psiy,
    stated_norm_psix, stated_norm_psiy, SpectralValue, TildeVorticity,
};

use crate::asymptotics::{zero_mode_vorticity, AverageState};
use crate::geometry::{EllipseGeometry, StripGrid};
use crate::poisson::{solve_stream, velocity, ScalarField};
use crate::transport::{advect_field, InitialVorticity, Vorticity};
use crate::{Error, Result};

/// Norms at or below this value are treated as zero and never fitted.
pub const NORM_FLOOR: f64 = 1e-12;

/// `√(∬ f² dx dy)`, periodic trapezoid in `x`, trapezoid in `y`.
pub fn strip_norm(field: &ScalarField) -> f64 {
    weighted_norm(field, |_, _| 1.0)
}

/// `√(∬ f² W dx dy)`: the norm over the exterior of the ellipse, truncated
/// at `ymax`.
pub fn physical_norm(field: &ScalarField, g: &EllipseGeometry) -> f64 {
    weighted_norm(field, |x, y| g.jacobian(x, y))
}

fn weighted_norm(field: &ScalarField, weight: impl Fn(f64, f64) -> f64) -> f64 {
    let grid = field.grid();
    let mut total = 0.0;
    for i in 0..grid.nx() {
        let x = grid.x(i);
        for (j, v) in field.column(i).iter().enumerate() {
            total += grid.y_weight(j) * weight(x, grid.y(j)) * v * v;
        }
    }
    (total * grid.dx()).sqrt()
}

/// `‖e^{4y} ω0‖_{H²}` over the strip, from the analytic derivatives of the
/// initial data: the root of the summed squared `L²` norms of the function
/// and all its first and second derivatives.
pub fn weighted_h2(omega0: &InitialVorticity, grid: &StripGrid) -> f64 {
    let mut total = 0.0;
    for i in 0..grid.nx() {
        let x = grid.x(i);
        for j in 0..grid.ny() {
            let y = grid.y(j);
            let e = (4.0 * y).exp();
            let [w, wx, wy, wxx, wxy, wyy] = omega0.derivatives(x, y);
            let terms = [
                w,
                wx,
                4.0 * w + wy,
                wxx,
                4.0 * wx + wxy,
                16.0 * w + 8.0 * wy + wyy,
            ];
            let sq: f64 = terms.iter().map(|v| v * v).sum();
            total += grid.y_weight(j) * e * e * sq;
        }
    }
    (total * grid.dx()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Psi,
    UPar,
    UPerp,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::Psi, Quantity::UPar, Quantity::UPerp];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Psi => "psi",
            Quantity::UPar => "u_par",
            Quantity::UPerp => "u_perp",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Strip,
    Physical,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Strip => "strip",
            Measure::Physical => "physical",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// Least-squares line through `(ln t, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero when only two points are fitted.
    pub stderr: f64,
    pub points: usize,
}

/// Fits `value ≈ e^{intercept} t^{slope}` over the samples with
/// `window.0 ≤ t ≤ window.1`. Returns `None` with fewer than two samples in
/// the window or when any of them is at or below [`NORM_FLOOR`].
pub fn fit_power_law(times: &[f64], values: &[f64], window: (f64, f64)) -> Option<PowerLawFit> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| in_window(**t, window))
        .map(|(&t, &v)| (t, v))
        .collect();
    if pts.len() < 2 || pts.iter().any(|&(_, v)| !(v > NORM_FLOOR) || !v.is_finite()) {
        return None;
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if pts.len() > 2 {
        let ssr: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(PowerLawFit {
        slope,
        intercept,
        stderr,
        points: pts.len(),
    })
}

/// Window membership with a relative slack of `1e-9`, so that endpoints
/// produced by repeated multiplication are kept.
fn in_window(t: f64, (lo, hi): (f64, f64)) -> bool {
    t >= lo * (1.0 - 1e-9) && t <= hi * (1.0 + 1e-9)
}

/// Norms of one quantity's deviation from its limit at a list of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecaySeries {
    pub quantity: Quantity,
    pub measure: Measure,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub window: (f64, f64),
    pub fit: Option<PowerLawFit>,
}

impl DecaySeries {
    pub fn new(
        quantity: Quantity,
        measure: Measure,
        times: Vec<f64>,
        values: Vec<f64>,
        window: (f64, f64),
    ) -> Result<Self> {
        check_times(&times)?;
        if values.len() != times.len() {
            return Err(Error::InvalidSeries(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidSeries("norms must be finite and nonnegative".into()));
        }
        let fit = fit_power_law(&times, &values, window);
        Ok(Self {
            quantity,
            measure,
            times,
            values,
            window,
            fit,
        })
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidSeries("no times".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidSeries("times must be finite and nonnegative".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSeries("times must be strictly increasing".into()));
    }
    Ok(())
}

/// `count` geometric samples `t0, t0 q, …, t0 q^{count−1}`.
pub fn geometric_times(t0: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|n| t0 * ratio.powi(n as i32)).collect()
}

/// Deviations of one snapshot from the asymptotic state.
#[derive(Debug, Clone)]
pub struct Deviation {
    pub t: f64,
    pub omega: ScalarField,
    pub psi: ScalarField,
    pub u_par: ScalarField,
    pub u_perp: ScalarField,
}

impl Deviation {
    pub fn field(&self, q: Quantity) -> &ScalarField {
        match q {
            Quantity::Psi => &self.psi,
            Quantity::UPar => &self.u_par,
            Quantity::UPerp => &self.u_perp,
        }
    }

    pub fn norm(&self, q: Quantity, m: Measure, g: &EllipseGeometry) -> f64 {
        match m {
            Measure::Strip => strip_norm(self.field(q)),
            Measure::Physical => physical_norm(self.field(q), g),
        }
    }
}

/// The solution at time `t` minus the asymptotic state.
pub fn deviation<V: Vorticity + ?Sized>(
    omega0: &V,
    t: f64,
    state: &AverageState,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<Deviation> {
    let grid = state.grid();
    let omega = advect_field(omega0, t, grid, g, tol)?;
    let psi = solve_stream(&omega, g)?;
    let (u_par, u_perp) = velocity(&psi, g);
    Ok(Deviation {
        t,
        psi: psi.minus(&state.psi_av)?,
        u_par: u_par.minus(&state.u_par_av)?,
        u_perp: u_perp.minus(&state.u_perp_av)?,
        omega,
    })
}

/// Result of [`decay_series`]: one series per requested quantity and
/// measure, plus the asymptotic state that was subtracted.
#[derive(Debug, Clone)]
pub struct DecayRun {
    pub series: Vec<DecaySeries>,
    pub state: AverageState,
}

impl DecayRun {
    pub fn get(&self, q: Quantity, m: Measure) -> Option<&DecaySeries> {
        self.series.iter().find(|s| s.quantity == q && s.measure == m)
    }
}

/// Evolves `ω0`, subtracts the asymptotic state built from its flow-line
/// average and records the norms. Snapshots are evaluated in parallel and
/// merged in time order.
#[allow(clippy::too_many_arguments)]
pub fn decay_series<V: Vorticity + ?Sized>(
    omega0: &V,
    times: &[f64],
    quantities: &[Quantity],
    measures: &[Measure],
    window: (f64, f64),
    grid: &StripGrid,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<DecayRun> {
    check_times(times)?;
    let state = AverageState::new(&zero_mode_vorticity(omega0, grid, g), grid, g)?;
    decay_series_with(omega0, times, quantities, measures, window, &state, g, tol)
        .map(|series| DecayRun { series, state })
}

/// As [`decay_series`] with a caller-supplied asymptotic state.
#[allow(clippy::too_many_arguments)]
pub fn decay_series_with<V: Vorticity + ?Sized>(
    omega0: &V,
    times: &[f64],
    quantities: &[Quantity],
    measures: &[Measure],
    window: (f64, f64),
    state: &AverageState,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<Vec<DecaySeries>> {
    check_times(times)?;
    let norms: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| {
            let d = deviation(omega0, t, state, g, tol)?;
            Ok(quantities
                .iter()
                .flat_map(|&q| measures.iter().map(move |&m| (q, m)))
                .map(|(q, m)| d.norm(q, m, g))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut col = 0;
    for &q in quantities {
        for &m in measures {
            let values = norms.iter().map(|row| row[col]).collect();
            out.push(DecaySeries::new(q, m, times.to_vec(), values, window)?);
            col += 1;
        }
    }
    Ok(out)
}
