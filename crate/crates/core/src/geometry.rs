//! Confocal elliptic coordinates around the cylinder.
//!
//! Strip coordinates `(x, y)` and physical coordinates `(X, Y)` are related by
//!
//! ```text
//! X =  C cos(x) cosh(y + Ψ)
//! Y = -C sin(x) sinh(y + Ψ)
//! ```
//!
//! so `y = 0` is the ellipse with semiaxes `A = C cosh Ψ`, `B = C sinh Ψ` and
//! the lines `y = const` are the streamlines of the background circulation.
//! The map is conformal with Jacobian determinant
//! `W = ½ C² (cosh(2(y + Ψ)) − cos 2x)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Focal scale `C` and boundary offset `Ψ` of the confocal map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseGeometry {
    c: f64,
    psi: f64,
}

impl EllipseGeometry {
    /// Builds the geometry of the ellipse with semiaxes `a > b > 0`.
    pub fn from_semiaxes(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > 0.0 && a > b) {
            return Err(Error::DegenerateEllipse { a, b });
        }
        // (a - b)(a + b) keeps C accurate when the ellipse is nearly circular
        let c = ((a - b) * (a + b)).sqrt();
        let psi = (b / a).atanh();
        Self::from_focal(c, psi).map_err(|_| Error::DegenerateEllipse { a, b })
    }

    pub fn from_focal(c: f64, psi: f64) -> Result<Self> {
        if !(c.is_finite() && psi.is_finite() && c > 0.0 && psi > 0.0) {
            return Err(Error::InvalidFocal { c, psi });
        }
        Ok(Self { c, psi })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// Major semiaxis `C cosh Ψ`.
    pub fn a(&self) -> f64 {
        self.c * self.psi.cosh()
    }

    /// Minor semiaxis `C sinh Ψ`.
    pub fn b(&self) -> f64 {
        self.c * self.psi.sinh()
    }

    /// `cosh(2(y + Ψ))`, the stretching factor of the flow line at height `y`.
    #[inline]
    pub fn level_cosh(&self, y: f64) -> f64 {
        (2.0 * (y + self.psi)).cosh()
    }

    /// Flow-line average `⟨W⟩(y) = ½ C² cosh(2(y + Ψ))`.
    #[inline]
    pub fn mean_jacobian(&self, y: f64) -> f64 {
        0.5 * self.c * self.c * self.level_cosh(y)
    }

    /// Angular speed of the label along the flow line at height `y`:
    /// `α = χ + t · label_rate(y)`.
    #[inline]
    pub fn label_rate(&self, y: f64) -> f64 {
        2.0 / (self.c * self.c * self.level_cosh(y))
    }

    pub fn to_physical(&self, x: f64, y: f64) -> (f64, f64) {
        let u = y + self.psi;
        (
            self.c * x.cos() * u.cosh(),
            -self.c * x.sin() * u.sinh(),
        )
    }

    /// Inverse of [`to_physical`](Self::to_physical), returning `x ∈ [0, 2π)`
    /// and `y ≥ 0`.
    ///
    /// `X + iY = C cosh((y + Ψ) − i x)`, so the closed form is a principal
    /// complex `acosh`; one Newton step on the forward map removes the
    /// cancellation error of `acosh` near the foci.
    pub fn to_elliptic(&self, big_x: f64, big_y: f64) -> Result<(f64, f64)> {
        let (a, b) = (self.a(), self.b());
        let level = (big_x / a).powi(2) + (big_y / b).powi(2);
        if level < 1.0 - 1e-12 {
            return Err(Error::InsideEllipse { x: big_x, y: big_y });
        }

        let w = (Complex64::new(big_x, big_y) / self.c).acosh();
        let mut x = reduce_angle(-w.im);
        let mut y = (w.re - self.psi).max(0.0);

        let (fx, fy) = self.to_physical(x, y);
        let (rx, ry) = (fx - big_x, fy - big_y);
        let u = y + self.psi;
        let (s, c) = x.sin_cos();
        // J = [[-C s cosh u, C c sinh u], [-C c sinh u, -C s cosh u]], det J = W
        let j11 = -self.c * s * u.cosh();
        let j12 = self.c * c * u.sinh();
        let det = j11 * j11 + j12 * j12;
        if det > 0.0 {
            let dx = -(j11 * rx - j12 * ry) / det;
            let dy = -(j12 * rx + j11 * ry) / det;
            x = reduce_angle(x + dx);
            y = (y + dy).max(0.0);
        }
        Ok((x, y))
    }

    /// Jacobian determinant `∂(X, Y)/∂(x, y)`.
    #[inline]
    pub fn jacobian(&self, x: f64, y: f64) -> f64 {
        0.5 * self.c * self.c * (self.level_cosh(y) - (2.0 * x).cos())
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Tensor grid on `[0, 2π) × [0, ymax]`, periodic in `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripGrid {
    nx: usize,
    ny: usize,
    ymax: f64,
}

impl StripGrid {
    pub fn new(nx: usize, ny: usize, ymax: f64) -> Result<Self> {
        if nx < 8 || !nx.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "nx must be even and at least 8, got {nx}"
            )));
        }
        if ny < 16 {
            return Err(Error::InvalidGrid(format!(
                "ny must be at least 16, got {ny}"
            )));
        }
        if !(ymax.is_finite() && ymax > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "ymax must be positive, got {ymax}"
            )));
        }
        Ok(Self { nx, ny, ymax })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn ymax(&self) -> f64 {
        self.ymax
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        TAU / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ymax / (self.ny - 1) as f64
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        TAU * i as f64 / self.nx as f64
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.ymax * j as f64 / (self.ny - 1) as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    /// Trapezoid weight of row `j` on `[0, ymax]`.
    #[inline]
    pub fn y_weight(&self, j: usize) -> f64 {
        if j == 0 || j == self.ny - 1 {
            0.5 * self.dy()
        } else {
            self.dy()
        }
    }

    /// Flat index of node `(i, j)`; columns of constant `x` are contiguous.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    /// Same `ymax` with `ny` replaced; used by refinement studies.
    pub fn with_ny(&self, ny: usize) -> Result<Self> {
        Self::new(self.nx, ny, self.ymax)
    }
}
