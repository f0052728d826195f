//! Numerical look at the elliptic estimate `‖φ‖_{H²} ≲ ‖ψ‖_{L²}` for
//! `Δφ = ψ`, `φ(x, 0) = 0`, on mean-free `ψ`.

use std::f64::consts::TAU;

use serde::Serialize;

use super::strip_norm;
use crate::geometry::StripGrid;
use crate::poisson::{
    derivative_x, derivative_y, second_derivative_x, second_derivative_y, solve_auxiliary_phi,
    ScalarField,
};
use crate::Result;

/// `√(Σ ‖∂^β f‖²)` over `|β| ≤ 2`; spectral in `x`, fourth order in `y`.
pub fn h2_norm(f: &ScalarField) -> f64 {
    let fx = derivative_x(f);
    let parts = [
        f.clone(),
        derivative_y(f),
        second_derivative_x(f),
        derivative_y(&fx),
        second_derivative_y(f),
        fx,
    ];
    parts.iter().map(|p| strip_norm(p).powi(2)).sum::<f64>().sqrt()
}

/// `‖φ‖_{H²} / ‖ψ‖_{L²}`.
pub fn elliptic_ratio(psi: &ScalarField) -> Result<f64> {
    let phi = solve_auxiliary_phi(psi)?;
    Ok(h2_norm(&phi) / strip_norm(psi))
}

/// Seeded random mean-free fields
/// `ψ = Σ_{k=1}^{3} c_k y e^{−β_k y} cos(k x + θ_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticFamily {
    pub seed: u64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy)]
struct Term {
    k: f64,
    c: f64,
    beta: f64,
    theta: f64,
}

impl EllipticFamily {
    fn members(&self) -> Vec<Vec<Term>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count)
            .map(|_| {
                (1..=3)
                    .map(|k| Term {
                        k: k as f64,
                        c: rng.random_range(-1.0..1.0),
                        beta: rng.random_range(0.8..2.0),
                        theta: rng.random_range(0.0..TAU),
                    })
                    .collect()
            })
            .collect()
    }

    /// Samples every member on `grid`.
    pub fn sample(&self, grid: &StripGrid) -> Vec<ScalarField> {
        self.members()
            .into_iter()
            .map(|terms| {
                ScalarField::from_fn(*grid, move |x, y| {
                    terms
                        .iter()
                        .map(|t| t.c * y * (-t.beta * y).exp() * (t.k * x + t.theta).cos())
                        .sum()
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub nx: usize,
    pub ny: usize,
    pub ratios: Vec<f64>,
    pub max: f64,
}

pub fn elliptic_ratio_report(family: &EllipticFamily, grid: &StripGrid) -> Result<RatioReport> {
    let ratios = family
        .sample(grid)
        .iter()
        .map(elliptic_ratio)
        .collect::<Result<Vec<_>>>()?;
    let max = ratios.iter().copied().fold(0.0, f64::max);
    Ok(RatioReport {
        nx: grid.nx(),
        ny: grid.ny(),
        ratios,
        max,
    })
}
