//! The non-decaying part of the solution.
//!
//! Transport preserves the flow-line average `⟨Wω⟩(y)`, so the x-independent
//! profile `ω^av = ⟨Wω(0)⟩ / ⟨W⟩` is a stationary solution. Its stream
//! function has only modes `0` and `±2`:
//!
//! ```text
//! ψ^av(x, y) = r(y) + s(y) cos 2x
//! r″ = ½ C² ω^av cosh(2(y + Ψ)),   r(0) = 0, r′(∞) = 0
//! s″ − 4 s = −½ C² ω^av,            s(0) = 0, s(∞) = 0
//! ```
//!
//! The velocity limits follow from `u∥ = −W^{−1/2} ψ_y`, `u⊥ = W^{−1/2} ψ_x`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::geometry::{EllipseGeometry, StripGrid};
use crate::poisson::{self, bvp, ScalarField};
use crate::stencil;
use crate::transport::{conserved_average, Vorticity};
use crate::Result;

/// Which formula is used for the limiting velocity components.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityConvention {
    /// Derived from `ψ^av`: `u∥ = −W^{−1/2}(r′ + s′ cos 2x)`,
    /// `u⊥ = −2 W^{−1/2} s sin 2x`.
    #[default]
    Corrected,
    /// As `Corrected` but `u⊥ = −2 W^{−1/2} s′ sin 2x`.
    StatedDerivative,
    /// Opposite signs: `u∥ = W^{−1/2} ψ^av_y`, `u⊥ = −W^{−1/2} ψ^av_x`.
    FlippedSigns,
}

/// `ω^av(y) = ⟨Wω0⟩(y) / ⟨W⟩(y)` by periodic quadrature on the grid rows.
pub fn zero_mode_vorticity<V: Vorticity + ?Sized>(
    omega0: &V,
    grid: &StripGrid,
    g: &EllipseGeometry,
) -> Vec<f64> {
    let field = ScalarField::from_fn(*grid, |x, y| omega0.eval(x, y));
    mean_profile(&field, g)
}

fn mean_profile(field: &ScalarField, g: &EllipseGeometry) -> Vec<f64> {
    let grid = field.grid();
    conserved_average(field, g)
        .into_iter()
        .enumerate()
        .map(|(j, m)| m / g.mean_jacobian(grid.y(j)))
        .collect()
}

/// A sampled vorticity split into its flow-line mean and the rest.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub mean: Vec<f64>,
    pub fluctuation: ScalarField,
}

impl Decomposition {
    pub fn recombine(&self) -> Result<ScalarField> {
        let mean = ScalarField::from_profile(*self.fluctuation.grid(), &self.mean)?;
        self.fluctuation.plus(&mean)
    }
}

/// Splits `ω0 = ω^av + (ω0 − ω^av)`; the second part has `⟨W·⟩ = 0`.
pub fn decompose(omega0: &ScalarField, g: &EllipseGeometry) -> Result<Decomposition> {
    let mean = mean_profile(omega0, g);
    let fluctuation = omega0.minus(&ScalarField::from_profile(*omega0.grid(), &mean)?)?;
    Ok(Decomposition { mean, fluctuation })
}

/// `ψ^av`, its profiles and the limiting velocity.
#[derive(Debug, Clone)]
pub struct AverageState {
    pub omega_av: Vec<f64>,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub psi_av: ScalarField,
    pub u_par_av: ScalarField,
    pub u_perp_av: ScalarField,
    pub convention: VelocityConvention,
}

impl AverageState {
    /// Stream function and corrected velocity for a given mean profile.
    pub fn new(omega_av: &[f64], grid: &StripGrid, g: &EllipseGeometry) -> Result<Self> {
        let mut state = average_stream(omega_av, grid, g)?;
        average_velocity(&mut state, g, VelocityConvention::Corrected);
        Ok(state)
    }

    pub fn grid(&self) -> &StripGrid {
        self.psi_av.grid()
    }

    pub fn r_prime(&self) -> Vec<f64> {
        stencil::d1(&self.r, self.grid().dy())
    }

    pub fn s_prime(&self) -> Vec<f64> {
        stencil::d1(&self.s, self.grid().dy())
    }

    /// Sampled `W ω^av`.
    pub fn forcing(&self, g: &EllipseGeometry) -> ScalarField {
        let grid = *self.grid();
        let w = &self.omega_av;
        ScalarField::from_indexed(grid, |i, j| g.jacobian(grid.x(i), grid.y(j)) * w[j])
    }
}

/// Forcing of the `r` equation.
pub fn r_forcing(omega_av: &[f64], grid: &StripGrid, g: &EllipseGeometry) -> Vec<f64> {
    let half_c2 = 0.5 * g.c() * g.c();
    omega_av
        .iter()
        .enumerate()
        .map(|(j, w)| half_c2 * w * g.level_cosh(grid.y(j)))
        .collect()
}

/// Forcing of the `s` equation.
pub fn s_forcing(omega_av: &[f64], g: &EllipseGeometry) -> Vec<f64> {
    let half_c2 = 0.5 * g.c() * g.c();
    omega_av.iter().map(|w| -half_c2 * w).collect()
}

/// Solves for `r`, `s` with the same mode solvers the stream function uses,
/// so `ψ^av` equals `solve_stream(ω^av)` to round-off. Velocity fields are
/// left at zero.
pub fn average_stream(
    omega_av: &[f64],
    grid: &StripGrid,
    g: &EllipseGeometry,
) -> Result<AverageState> {
    let r = bvp::solve_zero_mode(&r_forcing(omega_av, grid, g), grid)?;
    let s = bvp::solve_mode_fd(2, &s_forcing(omega_av, g), grid)?;
    let psi_av = ScalarField::from_indexed(*grid, |i, j| r[j] + s[j] * (2.0 * grid.x(i)).cos());
    Ok(AverageState {
        omega_av: omega_av.to_vec(),
        r,
        s,
        psi_av,
        u_par_av: ScalarField::zeros(*grid),
        u_perp_av: ScalarField::zeros(*grid),
        convention: VelocityConvention::Corrected,
    })
}

/// Fills the limiting velocity fields.
pub fn average_velocity(state: &mut AverageState, g: &EllipseGeometry, convention: VelocityConvention) {
    let grid = *state.grid();
    let (rp, sp) = (state.r_prime(), state.s_prime());
    let s = &state.s;
    let par_sign = match convention {
        VelocityConvention::FlippedSigns => -1.0,
        _ => 1.0,
    };
    state.u_par_av = ScalarField::from_indexed(grid, |i, j| {
        let (x, y) = (grid.x(i), grid.y(j));
        -par_sign * (rp[j] + sp[j] * (2.0 * x).cos()) / g.jacobian(x, y).sqrt()
    });
    state.u_perp_av = ScalarField::from_indexed(grid, |i, j| {
        let (x, y) = (grid.x(i), grid.y(j));
        let amp = match convention {
            VelocityConvention::Corrected => -2.0 * s[j],
            VelocityConvention::StatedDerivative => -2.0 * sp[j],
            VelocityConvention::FlippedSigns => 2.0 * s[j],
        };
        amp * (2.0 * x).sin() / g.jacobian(x, y).sqrt()
    });
    state.convention = convention;
}

/// `r` and `s` from their closed-form Green's kernels, applied by trapezoid
/// quadrature: `r = −∫ min(y, ỹ) F_r`, `s = −½ ∫ sinh(2y<) e^{−2y>} F_s`.
#[derive(Debug, Clone)]
pub struct KernelProfiles {
    pub r: Vec<f64>,
    pub s: Vec<f64>,
}

pub fn kernel_profiles(
    omega_av: &[f64],
    grid: &StripGrid,
    g: &EllipseGeometry,
) -> Result<KernelProfiles> {
    Ok(KernelProfiles {
        r: bvp::solve_zero_mode(&r_forcing(omega_av, grid, g), grid)?,
        s: bvp::solve_mode_kernel(2, &s_forcing(omega_av, g), grid)?,
    })
}

/// The alternative closed form `s(y) = (C²/4) ∫_y^∞ sinh(2(y + ỹ)) ω^av dỹ`,
/// by trapezoid quadrature on `[y, ymax]`.
pub fn upper_tail_s(omega_av: &[f64], grid: &StripGrid, g: &EllipseGeometry) -> Vec<f64> {
    let n = grid.ny();
    let h = grid.dy();
    let quarter_c2 = 0.25 * g.c() * g.c();
    (0..n)
        .map(|i| {
            let y = grid.y(i);
            let mut acc = 0.0;
            for j in i..n {
                let w = if j == i || j == n - 1 { 0.5 * h } else { h };
                acc += w * (2.0 * (y + grid.y(j))).sinh() * omega_av[j];
            }
            if i == n - 1 {
                acc = 0.0;
            }
            quarter_c2 * acc
        })
        .collect()
}

/// Residual of a candidate `s` against `s″ − 4s = −½C²ω^av`, `s(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeResidual {
    /// Max interior `|s″ − 4s + ½C²ω^av|` (three-point `s″`), relative to
    /// `max |½C²ω^av|`.
    pub interior: f64,
    /// `|s(0)|` relative to `max |s|`.
    pub boundary: f64,
}

pub fn s_residual(s: &[f64], omega_av: &[f64], grid: &StripGrid, g: &EllipseGeometry) -> OdeResidual {
    let f = s_forcing(omega_av, g);
    let spp = stencil::d2_three_point(s, grid.dy());
    let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let interior = (1..s.len() - 1)
        .map(|j| (spp[j] - 4.0 * s[j] - f[j]).abs())
        .fold(0.0, f64::max)
        / scale;
    let smax = s.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    OdeResidual {
        interior,
        boundary: s[0].abs() / smax,
    }
}

/// Max of `|Δψ^av − Wω^av|` over the `k = 0` and `k = ±2` components,
/// relative to the forcing. The remaining modes are reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitResidual {
    pub mode0: f64,
    pub mode2: f64,
    pub others: f64,
}

pub fn stream_residual(state: &AverageState, g: &EllipseGeometry) -> Result<SplitResidual> {
    let f = state.forcing(g);
    let resid = poisson::laplacian_residual(&state.psi_av, &f)?;
    let modes = poisson::dft_x(&resid);
    let scale = f.max_abs().max(f64::MIN_POSITIVE) * TAU;
    let mut out = SplitResidual {
        mode0: 0.0,
        mode2: 0.0,
        others: 0.0,
    };
    for (k, p) in modes.iter() {
        let m = p.iter().fold(0.0f64, |m, c| m.max(c.norm())) / scale;
        let slot = match k.abs() {
            0 => &mut out.mode0,
            2 => &mut out.mode2,
            _ => &mut out.others,
        };
        *slot = slot.max(m);
    }
    Ok(out)
}
