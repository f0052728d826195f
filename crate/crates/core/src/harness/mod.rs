//! Config-driven runs that write reproducible CSV, plot and JSON artifacts.
//!
//! Every CSV starts with a `# config_sha256=` comment and a units comment.
//! Numbers use the shortest round-trip decimal form, and parallel work is
//! merged in a fixed order, so reruns with any thread count produce the
//! same files. The only exception is the `timings_s` block of `run.json`.

pub mod config;
pub mod output;
pub mod validate;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

pub use config::{ExperimentConfig, DEFAULT_CONFIG};
pub use validate::{validate, Bound, Check, ValidationReport};

use crate::asymptotics::{
    average_stream, average_velocity, kernel_profiles, stream_residual, s_residual, upper_tail_s,
    zero_mode_vorticity, AverageState, OdeResidual, SplitResidual, VelocityConvention,
};
use crate::damping::{decay_series, DecaySeries, Measure, PowerLawFit, Quantity};
use crate::poisson::{laplacian_residual, solve_stream, velocity};
use crate::transport::advect_field;
use crate::{Error, Result};
use output::{log_log_dat, log_log_svg, write_file, Table};

/// Sets the global rayon pool size from `threads`, else `EDAMP_THREADS`,
/// else the rayon default. Returns the size in effect.
pub fn configure_threads(threads: Option<usize>) -> Result<usize> {
    let requested = match threads {
        Some(n) => Some(n),
        None => match std::env::var("EDAMP_THREADS") {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                Error::Config(format!("EDAMP_THREADS must be a positive integer, got {v:?}"))
            })?),
            Err(_) => None,
        },
    };
    if requested == Some(0) {
        return Err(Error::Config("thread count must be at least 1".into()));
    }
    if let Some(n) = requested {
        // A pool that already exists (tests, repeated calls) is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(rayon::current_num_threads())
}

/// Fit result as written to `run.json` and `fit_summary.txt`.
#[derive(Debug, Clone, Serialize)]
pub struct FitRecord {
    pub quantity: Quantity,
    pub measure: Measure,
    pub window: (f64, f64),
    pub fit: Option<PowerLawFit>,
}

impl FitRecord {
    fn from_series(s: &DecaySeries) -> Self {
        Self {
            quantity: s.quantity,
            measure: s.measure,
            window: s.window,
            fit: s.fit,
        }
    }

    pub fn summary_line(&self) -> String {
        let (q, m, (lo, hi)) = (self.quantity, self.measure, self.window);
        match &self.fit {
            Some(f) => format!("{q}, {m}, {:.4}, {:.4}, [{lo}, {hi}]", f.slope, f.stderr),
            None => format!("{q}, {m}, not fitted, , [{lo}, {hi}]"),
        }
    }
}

/// Contents of `run.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub version: String,
    pub config_sha256: String,
    pub config: ExperimentConfig,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
    pub fits: Vec<FitRecord>,
    pub series: Vec<DecaySeries>,
    pub invariants: BTreeMap<String, f64>,
    /// Wall-clock seconds per phase; not reproducible.
    pub timings_s: BTreeMap<String, f64>,
}

impl RunRecord {
    fn new(command: &str, cfg: &ExperimentConfig) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_sha256: cfg.hash(),
            config: cfg.clone(),
            warnings: cfg.warnings(),
            files: Vec::new(),
            fits: Vec::new(),
            series: Vec::new(),
            invariants: BTreeMap::new(),
            timings_s: BTreeMap::new(),
        }
    }

    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f()?;
        self.timings_s
            .insert(phase.to_string(), start.elapsed().as_secs_f64());
        Ok(out)
    }

    fn write(&mut self, dir: &Path, name: &str, text: &str) -> Result<()> {
        write_file(&dir.join(name), text)?;
        self.files.push(PathBuf::from(name));
        Ok(())
    }

    fn finish(mut self, dir: &Path) -> Result<Self> {
        self.files.push(PathBuf::from("run.json"));
        let json = serde_json::to_string_pretty(&self).expect("record serializes");
        write_file(&dir.join("run.json"), &(json + "\n"))?;
        Ok(self)
    }
}

fn stride_indices(n: usize, stride: usize) -> impl Iterator<Item = usize> {
    (0..n).step_by(stride)
}

/// Writes `omega`, `psi`, `u_par`, `u_perp` on a strided subgrid at `t = 0`
/// and every configured time, one `snapshot_NN.csv` per time.
pub fn simulate(cfg: &ExperimentConfig, dir: &Path) -> Result<RunRecord> {
    let mut rec = RunRecord::new("simulate", cfg);
    let g = cfg.geometry()?;
    let grid = cfg.strip_grid()?;
    let w0 = cfg.initial_vorticity()?;
    let hash = cfg.hash();
    let (sx, sy) = (cfg.output.x_stride, cfg.output.y_stride);
    let times = std::iter::once(0.0).chain(cfg.time_samples());
    for (n, t) in times.enumerate() {
        let (omega, psi, u_par, u_perp) = rec.time(&format!("snapshot_{n:02}"), || {
            let omega = advect_field(&w0, t, &grid, &g, cfg.tolerances.label)?;
            let psi = solve_stream(&omega, &g)?;
            let (u_par, u_perp) = velocity(&psi, &g);
            Ok((omega, psi, u_par, u_perp))
        })?;
        let mut table = Table::new(
            &hash,
            &["x", "y", "X", "Y", "omega", "psi", "u_par", "u_perp"],
            &format!("t = {t}; x rad, y 1, X Y length, fields nondimensional"),
        );
        for i in stride_indices(grid.nx(), sx) {
            for j in stride_indices(grid.ny(), sy) {
                let (x, y) = (grid.x(i), grid.y(j));
                let (bx, by) = g.to_physical(x, y);
                table.push(&[
                    x,
                    y,
                    bx,
                    by,
                    omega.get(i, j),
                    psi.get(i, j),
                    u_par.get(i, j),
                    u_perp.get(i, j),
                ]);
            }
        }
        rec.write(dir, &format!("snapshot_{n:02}.csv"), &table.render())?;
        rec.invariants.insert(format!("max_abs_psi_{n:02}"), psi.max_abs());
    }
    rec.finish(dir)
}

/// Decay norms, power-law fits and log-log plot data.
pub fn decay(
    cfg: &ExperimentConfig,
    quantities: &[Quantity],
    measures: &[Measure],
    dir: &Path,
) -> Result<RunRecord> {
    if quantities.is_empty() || measures.is_empty() {
        return Err(Error::Config("at least one quantity and one measure are required".into()));
    }
    let mut rec = RunRecord::new("decay", cfg);
    let g = cfg.geometry()?;
    let grid = cfg.strip_grid()?;
    let w0 = cfg.initial_vorticity()?;
    let times = cfg.time_samples();
    let hash = cfg.hash();
    let run = rec.time("decay", || {
        decay_series(
            &w0,
            &times,
            &Quantity::ALL,
            measures,
            cfg.fit.window,
            &grid,
            &g,
            cfg.tolerances.label,
        )
    })?;

    let mut table = Table::new(
        &hash,
        &["t", "norm_psi", "norm_upar", "norm_uperp", "measure"],
        "t 1, norms L2 over the truncated strip",
    );
    for &m in measures {
        let col = |q| run.get(q, m).expect("all quantities computed");
        let (p, a, b) = (col(Quantity::Psi), col(Quantity::UPar), col(Quantity::UPerp));
        for (n, &t) in times.iter().enumerate() {
            table.push_tagged(&[t, p.values[n], a.values[n], b.values[n]], m.name());
        }
    }
    rec.write(dir, "decay.csv", &table.render())?;

    let mut summary = String::new();
    let mut plotted = Vec::new();
    for &m in measures {
        for &q in quantities {
            let s = run.get(q, m).expect("all quantities computed");
            let f = FitRecord::from_series(s);
            summary.push_str(&f.summary_line());
            summary.push('\n');
            rec.fits.push(f);
            let label = format!("{q}_{m}");
            rec.write(
                dir,
                &format!("decay_{label}.dat"),
                &log_log_dat(&hash, &label, &s.times, &s.values),
            )?;
            plotted.push((label, s));
        }
    }
    rec.write(dir, "fit_summary.txt", &summary)?;
    if cfg.output.svg {
        let series: Vec<(&str, &[f64], &[f64])> = plotted
            .iter()
            .map(|(l, s)| (l.as_str(), s.times.as_slice(), s.values.as_slice()))
            .collect();
        rec.write(dir, "decay.svg", &log_log_svg("deviation norms", &series))?;
    }
    rec.series = run.series.clone();
    let psi_av = run.state.psi_av.max_abs();
    rec.invariants.insert("max_abs_psi_av".into(), psi_av);
    rec.finish(dir)
}

/// Residuals of the three candidate forms of `s`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AverageResiduals {
    pub fd: OdeResidual,
    pub kernel: OdeResidual,
    pub upper_tail: OdeResidual,
    pub split: SplitResidual,
}

/// Computes the asymptotic state with `convention` and its residuals.
pub fn average_state(
    cfg: &ExperimentConfig,
    convention: VelocityConvention,
) -> Result<(AverageState, AverageResiduals)> {
    let g = cfg.geometry()?;
    let grid = cfg.strip_grid()?;
    let av = zero_mode_vorticity(&cfg.initial_vorticity()?, &grid, &g);
    let mut state = average_stream(&av, &grid, &g)?;
    average_velocity(&mut state, &g, convention);
    let kernel = kernel_profiles(&av, &grid, &g)?;
    let res = AverageResiduals {
        fd: s_residual(&state.s, &av, &grid, &g),
        kernel: s_residual(&kernel.s, &av, &grid, &g),
        upper_tail: s_residual(&upper_tail_s(&av, &grid, &g), &av, &grid, &g),
        split: stream_residual(&state, &g)?,
    };
    Ok((state, res))
}

/// Profiles, the asymptotic fields and the residual table.
pub fn average(
    cfg: &ExperimentConfig,
    convention: VelocityConvention,
    dir: &Path,
) -> Result<RunRecord> {
    let mut rec = RunRecord::new("average", cfg);
    let g = cfg.geometry()?;
    let hash = cfg.hash();
    let (state, res) = rec.time("average", || average_state(cfg, convention))?;
    let grid = *state.grid();

    let mut profiles = Table::new(
        &hash,
        &["y", "omega_av", "r", "s", "r_prime", "s_prime"],
        "y 1, profiles nondimensional",
    );
    let (rp, sp) = (state.r_prime(), state.s_prime());
    for j in 0..grid.ny() {
        profiles.push(&[grid.y(j), state.omega_av[j], state.r[j], state.s[j], rp[j], sp[j]]);
    }
    rec.write(dir, "profiles.csv", &profiles.render())?;

    let resid = laplacian_residual(&state.psi_av, &state.forcing(&g))?;
    let mut field = Table::new(
        &hash,
        &["x", "y", "psi_av", "u_par_av", "u_perp_av", "residual"],
        &format!("x rad, y 1; velocity convention {convention:?}"),
    );
    for i in stride_indices(grid.nx(), cfg.output.x_stride) {
        for j in stride_indices(grid.ny(), cfg.output.y_stride) {
            field.push(&[
                grid.x(i),
                grid.y(j),
                state.psi_av.get(i, j),
                state.u_par_av.get(i, j),
                state.u_perp_av.get(i, j),
                resid.get(i, j),
            ]);
        }
    }
    rec.write(dir, "average_field.csv", &field.render())?;

    let mut table = Table::new(&hash, &["interior", "boundary", "form"], "relative residuals");
    for (name, r) in [("fd", res.fd), ("kernel", res.kernel), ("upper_tail", res.upper_tail)] {
        table.push_tagged(&[r.interior, r.boundary], name);
    }
    rec.write(dir, "s_residuals.csv", &table.render())?;

    for (k, v) in [
        ("s_fd_interior", res.fd.interior),
        ("s_kernel_interior", res.kernel.interior),
        ("s_upper_tail_interior", res.upper_tail.interior),
        ("s_upper_tail_boundary", res.upper_tail.boundary),
        ("psi_av_residual_mode0", res.split.mode0),
        ("psi_av_residual_mode2", res.split.mode2),
        ("psi_av_residual_other", res.split.others),
    ] {
        rec.invariants.insert(k.into(), v);
    }
    rec.finish(dir)
}

/// Runs [`validate`] and writes `validate.json`.
pub fn validate_to(cfg: &ExperimentConfig, dir: &Path) -> Result<ValidationReport> {
    let report = validate(cfg)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&dir.join("validate.json"), &(json + "\n"))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        let text = DEFAULT_CONFIG
            .replace("nx = 256", "nx = 32")
            .replace("ny = 2048", "ny = 257")
            .replace("count = 10", "count = 3");
        let mut cfg = ExperimentConfig::from_toml(&text).unwrap();
        cfg.fit.window = (20.0, 40.0);
        cfg.output.svg = true;
        cfg
    }

    fn read(dir: &Path, name: &str) -> String {
        std::fs::read_to_string(dir.join(name)).unwrap()
    }

    #[test]
    fn decay_outputs_are_reproducible() {
        let cfg = small();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let rec = decay(&cfg, &Quantity::ALL, &[Measure::Strip, Measure::Physical], a.path()).unwrap();
        decay(&cfg, &Quantity::ALL, &[Measure::Strip, Measure::Physical], b.path()).unwrap();
        for f in &rec.files {
            if f.as_os_str() != "run.json" {
                let name = f.to_str().unwrap();
                assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
            }
        }
        let csv = read(a.path(), "decay.csv");
        assert!(csv.starts_with(&format!("# config_sha256={}", cfg.hash())));
        assert_eq!(csv.lines().count(), 3 + 6);
        assert_eq!(rec.fits.len(), 6);
        assert!(read(a.path(), "decay.svg").contains("<svg"));
        let json: serde_json::Value = serde_json::from_str(&read(a.path(), "run.json")).unwrap();
        assert_eq!(json["config_sha256"], cfg.hash());
    }

    #[test]
    fn quantity_filter_limits_fits_not_columns() {
        let cfg = small();
        let d = tempfile::tempdir().unwrap();
        let rec = decay(&cfg, &[Quantity::UPar], &[Measure::Strip], d.path()).unwrap();
        assert_eq!(rec.fits.len(), 1);
        assert_eq!(read(d.path(), "fit_summary.txt").lines().count(), 1);
        assert!(read(d.path(), "decay.csv").contains("norm_uperp"));
    }

    #[test]
    fn average_writes_profiles_and_residuals() {
        let cfg = small();
        let d = tempfile::tempdir().unwrap();
        let rec = average(&cfg, VelocityConvention::Corrected, d.path()).unwrap();
        let profiles = read(d.path(), "profiles.csv");
        assert_eq!(profiles.lines().count(), 3 + 257);
        assert!(rec.invariants["s_upper_tail_interior"] > 10.0 * rec.invariants["s_fd_interior"]);
    }

    #[test]
    fn simulate_writes_one_snapshot_per_time() {
        let cfg = small();
        let d = tempfile::tempdir().unwrap();
        let rec = simulate(&cfg, d.path()).unwrap();
        assert_eq!(rec.files.len(), 5);
        let snap = read(d.path(), "snapshot_00.csv");
        // 8 x-columns, 17 y-rows after striding.
        assert_eq!(snap.lines().count(), 3 + 8 * 17);
    }
}
