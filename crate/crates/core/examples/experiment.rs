//! Config-driven run: validation report, asymptotic profiles and decay fits
//! written to a directory.
//!
//! `cargo run --release --example experiment -- [config.toml] [out-dir]`

use std::path::PathBuf;

use edamp::asymptotics::VelocityConvention;
use edamp::damping::{Measure, Quantity};
use edamp::harness::{self, ExperimentConfig};

fn main() -> edamp::Result<()> {
    let mut args = std::env::args().skip(1);
    let cfg = match args.next() {
        Some(p) => ExperimentConfig::load(p.as_ref())?,
        None => ExperimentConfig::default(),
    };
    let dir = args.next().map(PathBuf::from).unwrap_or_else(|| cfg.output.dir.clone());
    println!("config {}", cfg.hash());

    let report = harness::validate_to(&cfg, &dir)?;
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    println!("{} checks, failed: {failed:?}", report.checks.len());

    harness::average(&cfg, VelocityConvention::Corrected, &dir)?;
    let rec = harness::decay(&cfg, &Quantity::ALL, &[Measure::Strip, Measure::Physical], &dir)?;
    for f in &rec.fits {
        println!("{}", f.summary_line());
    }
    println!("outputs in {}", dir.display());
    Ok(())
}
