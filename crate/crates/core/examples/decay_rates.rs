//! Decay of the deviation from the asymptotic state for the default
//! experiment, with power-law fits in both norms.
//!
//! `cargo run --release --example decay_rates`

use edamp::damping::{decay_series, Measure, Quantity};
use edamp::harness::ExperimentConfig;

fn main() -> edamp::Result<()> {
    let cfg = ExperimentConfig::default();
    let g = cfg.geometry()?;
    let grid = cfg.strip_grid()?;
    let times = cfg.time_samples();
    let run = decay_series(
        &cfg.initial_vorticity()?,
        &times,
        &Quantity::ALL,
        &[Measure::Strip, Measure::Physical],
        cfg.fit.window,
        &grid,
        &g,
        cfg.tolerances.label,
    )?;

    println!("{:>8} {:>12} {:>12} {:>12}", "t", "psi", "u_par", "u_perp");
    for (n, t) in times.iter().enumerate() {
        let v = |q| run.get(q, Measure::Strip).unwrap().values[n];
        println!(
            "{t:>8.2} {:>12.4e} {:>12.4e} {:>12.4e}",
            v(Quantity::Psi),
            v(Quantity::UPar),
            v(Quantity::UPerp)
        );
    }
    println!();
    for s in &run.series {
        match s.fit {
            Some(f) => println!("{:<7} {:<9} slope {:>7.3} +/- {:.3}", s.quantity, s.measure, f.slope, f.stderr),
            None => println!("{:<7} {:<9} not fitted", s.quantity, s.measure),
        }
    }
    Ok(())
}
