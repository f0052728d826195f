//! Linearized Euler dynamics around the irrotational circulation flow past an
//! elliptical cylinder.
//!
//! The flow is straightened by confocal elliptic coordinates, in which the
//! exterior of the ellipse becomes the half-strip `[0, 2π) × [0, ∞)` and the
//! perturbation vorticity is transported along horizontal lines. The crate
//! solves that transport exactly by characteristics, recovers the stream
//! function with a Fourier transform in `x` and a three-point tridiagonal
//! solve per mode in `y`, builds the non-decaying asymptotic state from the
//! flow-line average of the initial vorticity and measures how fast
//! everything else decays.
//!
//! | module | contents |
//! |---|---|
//! | [`geometry`] | ellipse parameters, coordinate maps, Jacobian `W`, strip grid |
//! | [`transport`] | `χ`/`α` maps, characteristic labels, exact advection |
//! | [`poisson`] | fields, x-Fourier modes, mode BVPs, stream function, velocity |
//! | [`asymptotics`] | flow-line average, decomposition, `ψ^av` and `u^av` |
//! | [`damping`] | norms, spectral integral formulas, decay fits, elliptic ratios |
//! | [`harness`] | experiment config, validate/simulate/decay/average workflows |

pub mod asymptotics;
pub mod damping;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod poisson;
pub mod stencil;
pub mod transport;

pub use error::{Error, Result};
pub use geometry::{EllipseGeometry, StripGrid};
pub use poisson::{ModeSet, ScalarField};
pub use transport::{InitialVorticity, Vorticity};
