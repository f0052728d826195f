use crate::geometry::StripGrid;
use crate::{Error, Result};

/// Real samples on a [`StripGrid`], stored column by column (constant `x`).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: StripGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: StripGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: StripGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nx() {
            let x = grid.x(i);
            values.extend((0..grid.ny()).map(|j| f(x, grid.y(j))));
        }
        Self { grid, values }
    }

    /// Builds from node indices `(i, j)`.
    pub fn from_indexed(grid: StripGrid, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nx() {
            values.extend((0..grid.ny()).map(|j| f(i, j)));
        }
        Self { grid, values }
    }

    /// Broadcasts an x-independent profile.
    pub fn from_profile(grid: StripGrid, profile: &[f64]) -> Result<Self> {
        check_profile(&grid, profile.len())?;
        let mut values = Vec::with_capacity(grid.len());
        for _ in 0..grid.nx() {
            values.extend_from_slice(profile);
        }
        Self::from_values(grid, values)
    }

    pub fn from_values(grid: StripGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(n) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                i: n / grid.ny(),
                j: n % grid.ny(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &StripGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.grid.index(i, j);
        self.values[n] = v;
    }

    /// Samples along `x = x_i`.
    pub fn column(&self, i: usize) -> &[f64] {
        let ny = self.grid.ny();
        &self.values[i * ny..(i + 1) * ny]
    }

    pub fn column_mut(&mut self, i: usize) -> &mut [f64] {
        let ny = self.grid.ny();
        &mut self.values[i * ny..(i + 1) * ny]
    }

    /// Samples along `y = y_j`.
    pub fn row(&self, j: usize) -> Vec<f64> {
        (0..self.grid.nx()).map(|i| self.get(i, j)).collect()
    }

    /// Plain x-average `⟨f⟩(y)` per row.
    pub fn row_means(&self) -> Vec<f64> {
        let nx = self.grid.nx();
        (0..self.grid.ny())
            .map(|j| (0..nx).map(|i| self.get(i, j)).sum::<f64>() / nx as f64)
            .collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise `f(x, y, value)`.
    pub fn map_xy(&self, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.grid.nx() {
            let x = self.grid.x(i);
            for j in 0..self.grid.ny() {
                let n = self.grid.index(i, j);
                out.values[n] = f(x, self.grid.y(j), self.values[n]);
            }
        }
        out
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn check_profile(grid: &StripGrid, len: usize) -> Result<()> {
    if len != grid.ny() {
        return Err(Error::ProfileLength {
            got: len,
            expected: grid.ny(),
        });
    }
    Ok(())
}
