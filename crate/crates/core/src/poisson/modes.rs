use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::field::ScalarField;
use crate::geometry::StripGrid;
use crate::Result;

/// Fourier coefficients in `x` of a field, one complex `y`-profile per
/// wavenumber.
///
/// Convention: `f̂ₖ(y) = ∮ f(x, y) e^{−ikx} dx`, discretized with the periodic
/// trapezoid rule, so `f(x) = (1/2π) Σₖ f̂ₖ e^{ikx}`. Slots follow FFT order:
/// slot `s < nx/2` holds `k = s`, the rest hold `k = s − nx`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    grid: StripGrid,
    modes: Vec<Vec<Complex64>>,
}

impl ModeSet {
    pub fn zeros(grid: StripGrid) -> Self {
        Self {
            grid,
            modes: vec![vec![Complex64::new(0.0, 0.0); grid.ny()]; grid.nx()],
        }
    }

    pub fn grid(&self) -> &StripGrid {
        &self.grid
    }

    pub fn wavenumber(&self, slot: usize) -> i64 {
        let nx = self.grid.nx();
        if slot < nx / 2 {
            slot as i64
        } else {
            slot as i64 - nx as i64
        }
    }

    pub fn slot(&self, k: i64) -> usize {
        let nx = self.grid.nx() as i64;
        assert!(
            -nx / 2 <= k && k < nx / 2,
            "wavenumber {k} outside the resolved band"
        );
        k.rem_euclid(nx) as usize
    }

    pub fn profile(&self, k: i64) -> &[Complex64] {
        &self.modes[self.slot(k)]
    }

    pub fn profile_mut(&mut self, k: i64) -> &mut [Complex64] {
        let s = self.slot(k);
        &mut self.modes[s]
    }

    /// `(k, profile)` in slot order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &[Complex64])> {
        self.modes
            .iter()
            .enumerate()
            .map(|(s, p)| (self.wavenumber(s), p.as_slice()))
    }

    /// Builds a new mode set by transforming each profile.
    pub fn map_modes(&self, f: impl Fn(i64, &[Complex64]) -> Vec<Complex64>) -> Result<Self> {
        let modes = self.iter().map(|(k, p)| f(k, p)).collect::<Vec<_>>();
        Ok(Self {
            grid: self.grid,
            modes,
        })
    }

    pub(crate) fn from_slots(grid: StripGrid, modes: Vec<Vec<Complex64>>) -> Self {
        debug_assert_eq!(modes.len(), grid.nx());
        Self { grid, modes }
    }

    /// `(1/2π) Σₖ ∫ |f̂ₖ|² dy`, trapezoid in `y`.
    pub fn parseval_sum(&self) -> f64 {
        let mut total = 0.0;
        for p in &self.modes {
            for (j, c) in p.iter().enumerate() {
                total += self.grid.y_weight(j) * c.norm_sqr();
            }
        }
        total / TAU
    }

    /// Largest deviation from `f̂₋ₖ = conj(f̂ₖ)`.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let half = self.grid.nx() as i64 / 2;
        let mut worst = 0.0f64;
        for k in 1..half {
            for (a, b) in self.profile(k).iter().zip(self.profile(-k)) {
                worst = worst.max((a - b.conj()).norm());
            }
        }
        worst
    }

    /// Real trigonometric interpolant of row `j` at arbitrary `x`.
    pub fn eval_real(&self, j: usize, x: f64) -> f64 {
        let nx = self.grid.nx();
        let half = nx / 2;
        let step = Complex64::from_polar(1.0, x);
        let mut phase = step;
        let mut acc = self.modes[0][j].re;
        for k in 1..half {
            acc += 2.0 * (self.modes[k][j] * phase).re;
            phase *= step;
        }
        acc += self.modes[half][j].re * (half as f64 * x).cos();
        acc / TAU
    }
}

/// Forward x-transform of every row.
pub fn dft_x(field: &ScalarField) -> ModeSet {
    let grid = *field.grid();
    let (nx, ny) = (grid.nx(), grid.ny());
    let fft = FftPlanner::new().plan_fft_forward(nx);
    let dx = grid.dx();
    let mut modes = vec![vec![Complex64::new(0.0, 0.0); ny]; nx];
    let mut buf = vec![Complex64::new(0.0, 0.0); nx];
    for j in 0..ny {
        for (i, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(field.get(i, j), 0.0);
        }
        fft.process(&mut buf);
        for (s, b) in buf.iter().enumerate() {
            modes[s][j] = b * dx;
        }
    }
    ModeSet::from_slots(grid, modes)
}

/// Inverse x-transform; the imaginary part (round-off for real data) is dropped.
pub fn idft_x(modes: &ModeSet) -> ScalarField {
    let grid = *modes.grid();
    let (nx, ny) = (grid.nx(), grid.ny());
    let fft = FftPlanner::new().plan_fft_inverse(nx);
    let mut values = vec![0.0; grid.len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); nx];
    for j in 0..ny {
        for (s, b) in buf.iter_mut().enumerate() {
            *b = modes.modes[s][j];
        }
        fft.process(&mut buf);
        for (i, b) in buf.iter().enumerate() {
            values[grid.index(i, j)] = b.re / TAU;
        }
    }
    ScalarField::from_values(grid, values).expect("inverse transform of finite modes")
}

/// Spectral `∂ₓ`; the Nyquist mode is dropped.
pub fn derivative_x(field: &ScalarField) -> ScalarField {
    let modes = dft_x(field);
    let half = field.grid().nx() as i64 / 2;
    let out = modes
        .map_modes(|k, p| {
            let factor = if k == -half {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k as f64)
            };
            p.iter().map(|c| c * factor).collect()
        })
        .expect("same grid");
    idft_x(&out)
}

/// Spectral `∂ₓₓ`.
pub fn second_derivative_x(field: &ScalarField) -> ScalarField {
    let modes = dft_x(field);
    let out = modes
        .map_modes(|k, p| {
            let factor = -((k * k) as f64);
            p.iter().map(|c| c * factor).collect()
        })
        .expect("same grid");
    idft_x(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct O(nx²) summation of the trapezoid transform.
    fn dft_direct(field: &ScalarField) -> ModeSet {
        let grid = *field.grid();
        let mut out = ModeSet::zeros(grid);
        for s in 0..grid.nx() {
            let k = out.wavenumber(s) as f64;
            for j in 0..grid.ny() {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..grid.nx() {
                    acc += field.get(i, j) * Complex64::from_polar(1.0, -k * grid.x(i));
                }
                out.modes[s][j] = acc * grid.dx();
            }
        }
        out
    }

    #[test]
    fn cosine_and_constant() {
        let grid = StripGrid::new(16, 16, 1.0).unwrap();
        let m = dft_x(&ScalarField::from_fn(grid, |x, _| x.cos()));
        for (k, p) in m.iter() {
            let want = if k.abs() == 1 { std::f64::consts::PI } else { 0.0 };
            for c in p {
                assert!((c.re - want).abs() < 1e-14 && c.im.abs() < 1e-14);
            }
        }
        let m = dft_x(&ScalarField::from_fn(grid, |_, _| 1.0));
        assert!((m.profile(0)[3].re - TAU).abs() < 1e-14);
    }

    #[test]
    fn fast_transform_matches_direct_sum() {
        let grid = StripGrid::new(32, 16, 2.0).unwrap();
        let f = ScalarField::from_fn(grid, |x, y| (3.0 * x + y).sin() * (-y).exp() + (x * y).cos());
        let fast = dft_x(&f);
        let slow = dft_direct(&f);
        for ((_, a), (_, b)) in fast.iter().zip(slow.iter()) {
            for (u, v) in a.iter().zip(b) {
                assert!((u - v).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn derivatives_of_trig_polynomial() {
        let grid = StripGrid::new(32, 16, 1.0).unwrap();
        let f = ScalarField::from_fn(grid, |x, y| (2.0 * x).sin() * y + (5.0 * x).cos());
        let fx = derivative_x(&f);
        let fxx = second_derivative_x(&f);
        let gx = ScalarField::from_fn(grid, |x, y| 2.0 * (2.0 * x).cos() * y - 5.0 * (5.0 * x).sin());
        let gxx =
            ScalarField::from_fn(grid, |x, y| -4.0 * (2.0 * x).sin() * y - 25.0 * (5.0 * x).cos());
        assert!(fx.minus(&gx).unwrap().max_abs() < 1e-12);
        assert!(fxx.minus(&gxx).unwrap().max_abs() < 1e-11);
    }

    #[test]
    fn spectral_derivative_agrees_with_finite_differences() {
        let grid = StripGrid::new(64, 16, 1.0).unwrap();
        let f = ScalarField::from_fn(grid, |x, y| (x.sin() * (1.0 + y)).exp());
        let fx = derivative_x(&f);
        let h = grid.dx();
        let nx = grid.nx();
        let mut worst = 0.0f64;
        for i in 0..nx {
            for j in 0..grid.ny() {
                let fd = (f.get((i + 1) % nx, j) - f.get((i + nx - 1) % nx, j)) / (2.0 * h);
                worst = worst.max((fd - fx.get(i, j)).abs());
            }
        }
        // centered differences are O(h²); h² ≈ 1e-2 and |f'''| is O(10)
        assert!(worst < 0.2 * h * h * 50.0, "{worst}");
    }

    #[test]
    fn interpolant_reproduces_trig_polynomial() {
        let grid = StripGrid::new(16, 16, 1.0).unwrap();
        let f = |x: f64| 0.3 + x.cos() - 2.0 * (3.0 * x).sin() + 0.1 * (8.0 * x).cos();
        let m = dft_x(&ScalarField::from_fn(grid, |x, _| f(x)));
        for x in [0.1, 1.7, 4.4] {
            assert!((m.eval_real(2, x) - f(x)).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn round_trip_and_parseval(seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let grid = StripGrid::new(16, 20, 1.0).unwrap();
            let values: Vec<f64> = (0..grid.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let f = ScalarField::from_values(grid, values).unwrap();
            let m = dft_x(&f);
            prop_assert!(m.conjugate_asymmetry() < 1e-13);
            let back = idft_x(&m);
            prop_assert!(back.minus(&f).unwrap().max_abs() < 1e-12);
            let direct: f64 = (0..grid.nx())
                .flat_map(|i| (0..grid.ny()).map(move |j| (i, j)))
                .map(|(i, j)| f.get(i, j).powi(2) * grid.dx() * grid.y_weight(j))
                .sum();
            prop_assert!((m.parseval_sum() - direct).abs() <= 1e-10 * direct);
        }
    }
}
