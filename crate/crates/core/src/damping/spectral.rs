//! Spectral evaluation of `‖ψ(t)‖²` and its derivative analogues.
//!
//! Pulling `⟨ψ, ψ⟩ = ⟨Wω(t), φ⟩` (with `Δφ = ψ`) back to the label variable
//! `α` and using `W / χ_x = ½ C² cosh(2(y + Ψ))` gives
//!
//! ```text
//! ‖ψ(t)‖² = C²/(4π) Σ_{k≠0} ∫ ω̃̂ₖ(y) e^{ikθ(y)} φ̂ₖ(y) dy,   θ = 2t / (C² cosh(2(y+Ψ)))
//! ```
//!
//! with `ω̃(α, y) = ω0(a(α, y), y) cosh(2(y + Ψ))`,
//! `ω̃̂ₖ = ∮ ω̃ e^{−ikα} dα` and `φ̂ₖ = ∮ φ(x(χ, y), y) e^{ikχ} dχ`.
//! Replacing `φ` by `−φ_xx` or `−φ_yy` gives `‖ψ_x‖²` and `‖ψ_y‖²`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::geometry::{EllipseGeometry, StripGrid};
use crate::poisson::{derivative_x, dft_x, second_derivative_x, second_derivative_y, ModeSet, ScalarField};
use crate::stencil;
use crate::transport::{chi_x, invert_alpha, Vorticity};
use crate::{Error, Result};

/// Relative size of `ω̃̂₀` above which data counts as not mean-free.
const ZERO_MODE_LIMIT: f64 = 1e-8;

/// Oscillatory phase `k θ(y)` at time `t`.
pub fn phase(k: i64, t: f64, y: f64, g: &EllipseGeometry) -> f64 {
    k as f64 * t * g.label_rate(y)
}

/// Initial vorticity sampled on a uniform grid in the label variable `α`.
#[derive(Debug, Clone)]
pub struct TildeVorticity {
    samples: ScalarField,
    modes: ModeSet,
}

impl TildeVorticity {
    pub fn samples(&self) -> &ScalarField {
        &self.samples
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    /// `max_y |ω̃̂₀(y)|`.
    pub fn zero_mode_max(&self) -> f64 {
        self.modes.profile(0).iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// `max_{k, y} |ω̃̂ₖ(y)|`.
    pub fn scale(&self) -> f64 {
        self.modes
            .iter()
            .flat_map(|(_, p)| p.iter())
            .fold(0.0, |m, c| m.max(c.norm()))
    }

    fn check_mean_free(&self) -> Result<()> {
        let limit = ZERO_MODE_LIMIT * self.scale();
        let max_mean = self.zero_mode_max();
        if max_mean > limit {
            return Err(Error::NotMeanFree { max_mean, limit });
        }
        Ok(())
    }
}

/// Samples `ω̃(α_i, y_j)` with `α_i = x_i` and transforms in `α`.
pub fn build_tilde<V: Vorticity + ?Sized>(
    omega0: &V,
    grid: &StripGrid,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<TildeVorticity> {
    let samples = resample(grid, g, tol, |a, y| omega0.eval(a, y) * g.level_cosh(y))?;
    let modes = dft_x(&samples);
    Ok(TildeVorticity { samples, modes })
}

/// Evaluates `f(x(χ_i, y_j), y_j)` on a uniform `χ` grid, where `x(χ, y)`
/// inverts `χ` (equivalently `α`) along each row.
fn resample(
    grid: &StripGrid,
    g: &EllipseGeometry,
    tol: f64,
    f: impl Fn(f64, f64) -> f64 + Sync,
) -> Result<ScalarField> {
    let ny = grid.ny();
    let columns: Vec<Vec<f64>> = (0..grid.nx())
        .into_par_iter()
        .map(|i| {
            let target = grid.x(i);
            (0..ny)
                .map(|j| {
                    let y = grid.y(j);
                    Ok(f(invert_alpha(target, y, g, tol)?, y))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    ScalarField::from_values(*grid, columns.concat())
}

/// `φ̂ₖ(y) = ∮ φ(x(χ, y), y) e^{ikχ} dχ`, with `φ` between grid columns
/// taken from its trigonometric interpolant.
pub fn phi_modes(phi: &ScalarField, g: &EllipseGeometry, tol: f64) -> Result<ModeSet> {
    let grid = *phi.grid();
    let interp = dft_x(phi);
    let ny = grid.ny();
    let columns: Vec<Vec<f64>> = (0..grid.nx())
        .into_par_iter()
        .map(|i| {
            let target = grid.x(i);
            (0..ny)
                .map(|j| Ok(interp.eval_real(j, invert_alpha(target, grid.y(j), g, tol)?)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let on_chi = ScalarField::from_values(grid, columns.concat())?;
    // real data: the e^{+ikχ} transform is the conjugate of the forward one
    dft_x(&on_chi).map_modes(|_, p| p.iter().map(|c| c.conj()).collect())
}

/// `C²/(4π) Σ_{k≠0} ∫ aₖ(y) e^{ikθ} bₖ(y) dy`, trapezoid in `y`.
fn pairing(a: &ModeSet, b: &ModeSet, t: f64, g: &EllipseGeometry) -> Complex64 {
    let grid = a.grid();
    let mut total = Complex64::new(0.0, 0.0);
    for ((k, pa), (_, pb)) in a.iter().zip(b.iter()) {
        if k == 0 {
            continue;
        }
        for j in 0..grid.ny() {
            let e = Complex64::from_polar(1.0, phase(k, t, grid.y(j), g));
            total += grid.y_weight(j) * pa[j] * e * pb[j];
        }
    }
    total * g.c() * g.c() / (2.0 * TAU)
}

/// Real part of a spectral evaluation together with the size of the
/// imaginary part it discarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralValue {
    pub value: f64,
    pub imag: f64,
}

impl From<Complex64> for SpectralValue {
    fn from(c: Complex64) -> Self {
        Self {
            value: c.re,
            imag: c.im.abs(),
        }
    }
}

/// `‖ψ(t)‖²` from the initial data and `φ(t)`.
pub fn spectral_norm_psi(
    tilde: &TildeVorticity,
    phi: &ScalarField,
    t: f64,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<SpectralValue> {
    tilde.check_mean_free()?;
    let ph = phi_modes(phi, g, tol)?;
    Ok(pairing(tilde.modes(), &ph, t, g).into())
}

/// `‖ψ_x(t)‖²`, pairing against `−φ_xx`.
pub fn spectral_norm_psix(
    tilde: &TildeVorticity,
    phi: &ScalarField,
    t: f64,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<SpectralValue> {
    tilde.check_mean_free()?;
    let ph = phi_modes(&second_derivative_x(phi).scaled(-1.0), g, tol)?;
    Ok(pairing(tilde.modes(), &ph, t, g).into())
}

/// `‖ψ_y(t)‖²`, pairing against `−φ_yy`.
pub fn spectral_norm_psiy(
    tilde: &TildeVorticity,
    phi: &ScalarField,
    t: f64,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<SpectralValue> {
    tilde.check_mean_free()?;
    let ph = phi_modes(&second_derivative_y(phi).scaled(-1.0), g, tol)?;
    Ok(pairing(tilde.modes(), &ph, t, g).into())
}

/// The compressed `ψ_x` form `Σ ik ∫ (χ_x² ∂_α ω̃)^ₖ e^{ikθ} φ̂ₖ dy`, evaluated
/// literally with the same normalization as [`spectral_norm_psi`]. Kept for
/// comparison; it is not an identity for `‖ψ_x‖²`.
pub fn stated_norm_psix(
    tilde: &TildeVorticity,
    phi: &ScalarField,
    t: f64,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<SpectralValue> {
    tilde.check_mean_free()?;
    let grid = *phi.grid();
    let d_alpha = derivative_x(tilde.samples());
    let weight = resample(&grid, g, tol, |x, y| chi_x(x, y, g).powi(2))?;
    let h = d_alpha.zip_map(&weight, |a, b| a * b)?;
    let hm = dft_x(&h).map_modes(|k, p| {
        p.iter().map(|c| c * Complex64::new(0.0, k as f64)).collect()
    })?;
    let ph = phi_modes(phi, g, tol)?;
    Ok(pairing(&hm, &ph, t, g).into())
}

/// The compressed `ψ_y` form `Σ ∫ ∂_y(ω̃̂ₖ e^{ikθ}) ∂_y φ̂ₖ dy`, evaluated
/// literally with the same normalization as [`spectral_norm_psi`].
pub fn stated_norm_psiy(
    tilde: &TildeVorticity,
    phi: &ScalarField,
    t: f64,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<SpectralValue> {
    tilde.check_mean_free()?;
    let grid = *phi.grid();
    let h = grid.dy();
    let d1c = |p: &[Complex64]| -> Vec<Complex64> {
        let re: Vec<f64> = p.iter().map(|c| c.re).collect();
        let im: Vec<f64> = p.iter().map(|c| c.im).collect();
        stencil::d1(&re, h)
            .into_iter()
            .zip(stencil::d1(&im, h))
            .map(|(a, b)| Complex64::new(a, b))
            .collect()
    };
    let ph = phi_modes(phi, g, tol)?;
    let mut total = Complex64::new(0.0, 0.0);
    for ((k, pw), (_, pp)) in tilde.modes().iter().zip(ph.iter()) {
        if k == 0 {
            continue;
        }
        let oscillating: Vec<Complex64> = pw
            .iter()
            .enumerate()
            .map(|(j, c)| c * Complex64::from_polar(1.0, phase(k, t, grid.y(j), g)))
            .collect();
        let (da, db) = (d1c(&oscillating), d1c(pp));
        for j in 0..grid.ny() {
            total += grid.y_weight(j) * da[j] * db[j];
        }
    }
    Ok((total * g.c() * g.c() / (2.0 * TAU)).into())
}
