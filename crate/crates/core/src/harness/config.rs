use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::damping::geometric_times;
use crate::geometry::{EllipseGeometry, StripGrid};
use crate::transport::{AngularMode, GaussianBump, InitialVorticity};
use crate::{Error, Result};

/// Ellipse given by semiaxes or by focal parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GeometrySpec {
    Semiaxes { a: f64, b: f64 },
    Focal { c: f64, psi: f64 },
}

impl GeometrySpec {
    pub fn build(&self) -> Result<EllipseGeometry> {
        match *self {
            GeometrySpec::Semiaxes { a, b } => EllipseGeometry::from_semiaxes(a, b),
            GeometrySpec::Focal { c, psi } => EllipseGeometry::from_focal(c, psi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    /// Defaults to `y0 + 6σ + 4`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ymax: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub y0: f64,
    pub sigma: f64,
    #[serde(default)]
    pub zero_mode_amplitude: f64,
    #[serde(default)]
    pub modes: Vec<AngularMode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t0: f64,
    #[serde(default = "default_ratio")]
    pub ratio: f64,
    pub count: usize,
}

fn default_ratio() -> f64 {
    16f64.powf(1.0 / 9.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    pub window: (f64, f64),
}

/// Thresholds for the label solver and for `validate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub label: f64,
    pub round_trip: f64,
    pub conservation: f64,
    pub spectral: f64,
    pub order_band: f64,
    pub profile: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            label: 1e-12,
            round_trip: 1e-10,
            conservation: 1e-10,
            spectral: 0.01,
            order_band: 0.2,
            profile: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// Every `x_stride`-th column and `y_stride`-th row go into field CSVs.
    pub x_stride: usize,
    pub y_stride: usize,
    pub svg: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("edamp-out"),
            x_stride: 4,
            y_stride: 16,
            svg: false,
        }
    }
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometrySpec,
    pub grid: GridSpec,
    pub initial: InitialSpec,
    pub times: TimeSpec,
    pub fit: FitSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

pub const DEFAULT_CONFIG: &str = r#"# Gaussian m = 1 bump on the boundary of an A/B = 2 ellipse.

[geometry]
a = 1.5
b = 0.75

[grid]
nx = 256
ny = 2048
ymax = 2.6

[initial]
y0 = 0.0
sigma = 0.35
zero_mode_amplitude = 0.5

[[initial.modes]]
m = 1
amplitude = 1.0
phase = 0.0

[times]
t0 = 20.0
count = 10

[fit]
window = [20.0, 320.0]
"#;

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::from_toml(DEFAULT_CONFIG).expect("built-in config parses")
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Reads TOML, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let parsed = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        };
        parsed.map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form, ignoring the output directory.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output.dir = OutputSpec::default().dir;
        hex::encode(Sha256::digest(c.to_toml().as_bytes()))
    }

    pub fn geometry(&self) -> Result<EllipseGeometry> {
        self.geometry.build()
    }

    pub fn ymax(&self) -> f64 {
        self.grid
            .ymax
            .unwrap_or(self.initial.y0 + 6.0 * self.initial.sigma + 4.0)
    }

    pub fn strip_grid(&self) -> Result<StripGrid> {
        StripGrid::new(self.grid.nx, self.grid.ny, self.ymax())
    }

    pub fn initial_vorticity(&self) -> Result<InitialVorticity> {
        InitialVorticity::new(
            self.initial.modes.clone(),
            GaussianBump {
                center: self.initial.y0,
                width: self.initial.sigma,
            },
            self.initial.zero_mode_amplitude,
        )
    }

    pub fn time_samples(&self) -> Vec<f64> {
        geometric_times(self.times.t0, self.times.ratio, self.times.count)
    }

    /// Checks every precondition that can be checked without computing.
    pub fn check(&self) -> Result<()> {
        self.geometry()?;
        self.strip_grid()?;
        self.initial_vorticity()?;
        let t = &self.times;
        if !(t.t0 > 0.0 && t.t0.is_finite()) {
            return Err(Error::Config(format!("times.t0 must be positive, got {}", t.t0)));
        }
        if !(t.ratio > 1.0 && t.ratio.is_finite()) {
            return Err(Error::Config(format!("times.ratio must exceed 1, got {}", t.ratio)));
        }
        if t.count == 0 {
            return Err(Error::Config("times.count must be at least 1".into()));
        }
        let (lo, hi) = self.fit.window;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Config(format!("fit.window must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
        }
        let tol = &self.tolerances;
        for (name, v) in [
            ("label", tol.label),
            ("round_trip", tol.round_trip),
            ("conservation", tol.conservation),
            ("spectral", tol.spectral),
            ("order_band", tol.order_band),
            ("profile", tol.profile),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("tolerances.{name} must be positive, got {v}")));
            }
        }
        if self.output.x_stride == 0 || self.output.y_stride == 0 {
            return Err(Error::Config("output strides must be at least 1".into()));
        }
        Ok(())
    }

    /// Non-fatal problems with the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let reach = self.initial.y0 + 6.0 * self.initial.sigma;
        if self.ymax() < reach {
            out.push(format!(
                "grid.ymax = {} is below y0 + 6 sigma = {reach}; the initial bump is truncated",
                self.ymax()
            ));
        }
        let last = self.time_samples().last().copied().unwrap_or(0.0);
        if last < self.fit.window.0 {
            out.push("no sample time falls inside the fit window".into());
        }
        out
    }
}
