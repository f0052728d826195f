//! Exact transport of the perturbation vorticity.
//!
//! In strip coordinates the linearized equation is `∂ₜω − W⁻¹ ∂ₓω = 0`, so
//! vorticity is carried along `y = const` and `ω(t, x, y) = ω(0, a, y)` where
//! the label `a(t, x, y)` solves the integrated characteristic equation
//!
//! ```text
//! −t = ½ C² ((x − a) cosh(2(y + Ψ)) − ½ (sin 2x − sin 2a)).
//! ```
//!
//! Dividing by `½ C² cosh(2(y + Ψ))` turns it into `α(a, y) = χ(x, y) + τ(y) t`
//! with `τ = 2 / (C² cosh(2(y + Ψ)))`, a Kepler-type equation in `a` with
//! eccentricity `1 / cosh(2(y + Ψ)) < 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{reduce_angle, EllipseGeometry, StripGrid};
use crate::poisson::ScalarField;
use crate::{Error, Result};

/// Absolute residual tolerance used for label solves unless stated otherwise.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 200;

/// Anything that can be evaluated as a vorticity on the strip.
pub trait Vorticity: Sync {
    fn eval(&self, x: f64, y: f64) -> f64;
}

/// Adapter for closures.
pub struct FnVorticity<F>(pub F);

impl<F: Fn(f64, f64) -> f64 + Sync> Vorticity for FnVorticity<F> {
    fn eval(&self, x: f64, y: f64) -> f64 {
        (self.0)(x, y)
    }
}

/// `exp(−((y − center)/width)²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBump {
    pub center: f64,
    pub width: f64,
}

impl GaussianBump {
    pub fn value(&self, y: f64) -> f64 {
        let s = (y - self.center) / self.width;
        (-s * s).exp()
    }

    /// Value, first and second derivative.
    pub fn jet(&self, y: f64) -> [f64; 3] {
        let d = y - self.center;
        let w2 = self.width * self.width;
        let g = (-d * d / w2).exp();
        [g, -2.0 * d / w2 * g, (4.0 * d * d / (w2 * w2) - 2.0 / w2) * g]
    }
}

/// One angular term `amplitude · cos(m x + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularMode {
    pub m: u32,
    pub amplitude: f64,
    pub phase: f64,
}

/// Initial perturbation vorticity
/// `Σ aₘ cos(m x + θₘ) G(y) + z G(y)` with a Gaussian bump `G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialVorticity {
    pub modes: Vec<AngularMode>,
    pub bump: GaussianBump,
    /// Amplitude of the x-independent term.
    pub zero_mode: f64,
}

impl InitialVorticity {
    pub fn new(modes: Vec<AngularMode>, bump: GaussianBump, zero_mode: f64) -> Result<Self> {
        if !(bump.width > 0.0 && bump.width.is_finite() && bump.center.is_finite()) {
            return Err(Error::Config(format!(
                "bump width must be positive, got {}",
                bump.width
            )));
        }
        if let Some(m) = modes.iter().find(|m| m.m == 0) {
            return Err(Error::Config(format!(
                "angular modes need m >= 1 (use the zero-mode amplitude instead), got {m:?}"
            )));
        }
        if !zero_mode.is_finite()
            || modes
                .iter()
                .any(|m| !m.amplitude.is_finite() || !m.phase.is_finite())
        {
            return Err(Error::Config("non-finite amplitude or phase".into()));
        }
        Ok(Self {
            modes,
            bump,
            zero_mode,
        })
    }

    /// A single `cos(m x)` term of unit amplitude.
    pub fn single_mode(m: u32, bump: GaussianBump) -> Self {
        Self {
            modes: vec![AngularMode {
                m,
                amplitude: 1.0,
                phase: 0.0,
            }],
            bump,
            zero_mode: 0.0,
        }
    }

    pub fn zero() -> Self {
        Self {
            modes: Vec::new(),
            bump: GaussianBump {
                center: 1.0,
                width: 1.0,
            },
            zero_mode: 0.0,
        }
    }

    /// Seeded random data: modes `m = 1, 2` with random amplitudes and
    /// phases, a random zero-mode amplitude, on the given bump.
    pub fn random(seed: u64, bump: GaussianBump) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let modes = (1..=2)
            .map(|m| AngularMode {
                m,
                amplitude: rng.random_range(0.5..1.5),
                phase: rng.random_range(0.0..std::f64::consts::TAU),
            })
            .collect();
        let zero_mode = rng.random_range(-1.0..1.0);
        Self {
            modes,
            bump,
            zero_mode,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for m in &mut out.modes {
            m.amplitude *= factor;
        }
        out.zero_mode *= factor;
        out
    }

    /// `(ω, ω_x, ω_y, ω_xx, ω_xy, ω_yy)` at `(x, y)`.
    pub fn derivatives(&self, x: f64, y: f64) -> [f64; 6] {
        let [g, g1, g2] = self.bump.jet(y);
        let (mut c, mut cx, mut cxx) = (self.zero_mode, 0.0, 0.0);
        for mode in &self.modes {
            let m = mode.m as f64;
            let (s, co) = (m * x + mode.phase).sin_cos();
            c += mode.amplitude * co;
            cx -= mode.amplitude * m * s;
            cxx -= mode.amplitude * m * m * co;
        }
        [c * g, cx * g, c * g1, cxx * g, cx * g1, c * g2]
    }

    /// Closed form of `⟨Wω⟩(y) / ⟨W⟩(y)`: only the constant term and the
    /// `m = 2` terms survive the flow-line average against `W`.
    pub fn flow_line_mean(&self, y: f64, g: &EllipseGeometry) -> f64 {
        let lc = g.level_cosh(y);
        let m2: f64 = self
            .modes
            .iter()
            .filter(|m| m.m == 2)
            .map(|m| -0.5 * m.amplitude * m.phase.cos() / lc)
            .sum();
        self.bump.value(y) * (self.zero_mode + m2)
    }
}

impl Vorticity for InitialVorticity {
    fn eval(&self, x: f64, y: f64) -> f64 {
        let c: f64 = self
            .modes
            .iter()
            .map(|m| m.amplitude * (m.m as f64 * x + m.phase).cos())
            .sum();
        (c + self.zero_mode) * self.bump.value(y)
    }
}

/// Initial data with its flow-line mean removed, `ω0 − ⟨Wω0⟩/⟨W⟩`.
#[derive(Debug, Clone)]
pub struct Fluctuation {
    pub base: InitialVorticity,
    pub geometry: EllipseGeometry,
}

impl Vorticity for Fluctuation {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.base.eval(x, y) - self.base.flow_line_mean(y, &self.geometry)
    }
}

/// `χ(x, y) = x − sin 2x / (2 cosh(2(y + Ψ)))`.
pub fn chi(x: f64, y: f64, g: &EllipseGeometry) -> f64 {
    x - (2.0 * x).sin() / (2.0 * g.level_cosh(y))
}

/// `∂χ/∂x = 1 − cos 2x / cosh(2(y + Ψ))`, always positive.
pub fn chi_x(x: f64, y: f64, g: &EllipseGeometry) -> f64 {
    1.0 - (2.0 * x).cos() / g.level_cosh(y)
}

/// `α(a, y)`; the same function as [`chi`] applied to the label.
pub fn alpha(a: f64, y: f64, g: &EllipseGeometry) -> f64 {
    chi(a, y, g)
}

/// Solves `α(a, y) = target` for `a`.
///
/// Newton iteration safeguarded by bisection on `[target − e/2, target + e/2]`,
/// which always brackets the root since `|a − target| = e |sin 2a| / 2`.
pub fn invert_alpha(target: f64, y: f64, g: &EllipseGeometry, tol: f64) -> Result<f64> {
    solve_kepler(target, 0.5 / g.level_cosh(y), tol)
}

/// Root of `a − half_e sin 2a = target` with `0 ≤ half_e < ½`.
fn solve_kepler(target: f64, half_e: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let residual = |a: f64| (a - target) - half_e * (2.0 * a).sin();
    let (mut lo, mut hi) = (target - half_e, target + half_e);
    let mut a = target + half_e * (2.0 * target).sin();
    let mut r = residual(a);
    for _ in 0..MAX_ITERATIONS {
        if r.abs() <= tol {
            return Ok(a);
        }
        if r > 0.0 {
            hi = a;
        } else {
            lo = a;
        }
        let slope = 1.0 - 2.0 * half_e * (2.0 * a).cos();
        let mut next = a - r / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == a {
            break;
        }
        a = next;
        r = residual(a);
    }
    if r.abs() <= tol {
        return Ok(a);
    }
    Err(Error::NoConvergence {
        target,
        residual: r.abs(),
        iterations: MAX_ITERATIONS,
    })
}

/// Initial angle of the fluid particle found at `(x, y)` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicLabel {
    /// Unreduced label; grows linearly in `t`.
    pub a: f64,
    /// `|α(a, y) − χ(x, y) − τ(y) t|` at the returned `a`.
    pub residual: f64,
}

impl CharacteristicLabel {
    /// Number of full turns the particle has made since `t = 0`.
    pub fn winding(&self) -> i64 {
        (self.a / std::f64::consts::TAU).floor() as i64
    }

    pub fn reduced(&self) -> f64 {
        reduce_angle(self.a)
    }
}

/// Solves the characteristic equation for the label at `(t, x, y)`.
///
/// The residual is measured on the normalized form `α(a) = χ(x) + τ t`, i.e.
/// the characteristic equation divided by `½ C² cosh(2(y + Ψ))`.
pub fn solve_label(
    t: f64,
    x: f64,
    y: f64,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<CharacteristicLabel> {
    if t == 0.0 {
        return Ok(CharacteristicLabel { a: x, residual: 0.0 });
    }
    let target = chi(x, y, g) + t * g.label_rate(y);
    let a = invert_alpha(target, y, g, tol)?;
    let residual = (alpha(a, y, g) - target).abs();
    Ok(CharacteristicLabel { a, residual })
}

/// Residual of the characteristic equation in its original, unnormalized form.
pub fn characteristic_residual(t: f64, x: f64, y: f64, a: f64, g: &EllipseGeometry) -> f64 {
    let c2 = g.c() * g.c();
    t + 0.5 * c2 * ((x - a) * g.level_cosh(y) - 0.5 * ((2.0 * x).sin() - (2.0 * a).sin()))
}

/// `ω(t, x, y) = ω0(a(t, x, y), y)`.
pub fn advect<V: Vorticity + ?Sized>(
    omega0: &V,
    t: f64,
    x: f64,
    y: f64,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<f64> {
    let label = solve_label(t, x, y, g, tol)?;
    Ok(omega0.eval(label.reduced(), y))
}

/// Samples `ω(t)` on every grid node.
pub fn advect_field<V: Vorticity + ?Sized>(
    omega0: &V,
    t: f64,
    grid: &StripGrid,
    g: &EllipseGeometry,
    tol: f64,
) -> Result<ScalarField> {
    let ny = grid.ny();
    let columns: Vec<Vec<f64>> = (0..grid.nx())
        .into_par_iter()
        .map(|i| {
            let x = grid.x(i);
            (0..ny)
                .map(|j| advect(omega0, t, x, grid.y(j), g, tol))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    ScalarField::from_values(*grid, columns.concat())
}

/// Flow-line average `⟨Wω⟩(y) = (1/2π) ∮ W ω dx` per grid row.
pub fn conserved_average(field: &ScalarField, g: &EllipseGeometry) -> Vec<f64> {
    let grid = field.grid();
    let nx = grid.nx();
    (0..grid.ny())
        .map(|j| {
            let y = grid.y(j);
            let sum: f64 = (0..nx)
                .map(|i| g.jacobian(grid.x(i), y) * field.get(i, j))
                .sum();
            sum / nx as f64
        })
        .collect()
}
