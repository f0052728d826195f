use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use edamp::asymptotics::VelocityConvention;
use edamp::damping::{Measure, Quantity};
use edamp::harness::{self, Bound, ExperimentConfig};

#[derive(Parser)]
#[command(name = "edamp", version, about = "Inviscid damping past an elliptical cylinder")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (TOML, or JSON with a .json extension). Built-in default if omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; falls back to EDAMP_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suite; exits nonzero if any check fails.
    Validate,
    /// Write field snapshots at t = 0 and every configured time.
    Simulate,
    /// Deviation norms and power-law fits.
    Decay {
        #[arg(long, value_enum, default_value_t = QuantityArg::All)]
        quantity: QuantityArg,
        #[arg(long, value_enum, default_value_t = MeasureArg::Both)]
        measure: MeasureArg,
    },
    /// Asymptotic profiles and fields.
    Average {
        #[arg(long, value_enum, default_value_t = ConventionArg::Corrected)]
        convention: ConventionArg,
    },
    /// Print the built-in default config.
    DefaultConfig,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantityArg {
    Psi,
    #[value(name = "u_par")]
    UPar,
    #[value(name = "u_perp")]
    UPerp,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Strip,
    Physical,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Corrected,
    StatedDerivative,
    FlippedSigns,
}

fn run(cli: Cli) -> edamp::Result<bool> {
    if let Command::DefaultConfig = cli.command {
        print!("{}", harness::DEFAULT_CONFIG);
        return Ok(true);
    }
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = cli.out {
        cfg.output.dir = out;
    }
    let threads = harness::configure_threads(cli.threads)?;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    let dir = cfg.output.dir.clone();
    eprintln!("config {} | {threads} threads | out {}", &cfg.hash()[..12], dir.display());

    match cli.command {
        Command::Validate => {
            let report = harness::validate_to(&cfg, &dir)?;
            for c in &report.checks {
                let mark = if c.pass { "ok  " } else { "FAIL" };
                let limit = match c.bound {
                    Bound::AtMost => format!("<= {:e}", c.threshold),
                    Bound::AtLeast => format!(">= {:e}", c.threshold),
                    Bound::Info => "info".to_string(),
                };
                println!("{mark} {:<36} {:>12.4e}  {limit}", c.name, c.value);
            }
            println!("{}", if report.passed { "all checks passed" } else { "some checks failed" });
            Ok(report.passed)
        }
        Command::Simulate => {
            let rec = harness::simulate(&cfg, &dir)?;
            println!("wrote {} files", rec.files.len());
            Ok(true)
        }
        Command::Decay { quantity, measure } => {
            let quantities: Vec<Quantity> = match quantity {
                QuantityArg::Psi => vec![Quantity::Psi],
                QuantityArg::UPar => vec![Quantity::UPar],
                QuantityArg::UPerp => vec![Quantity::UPerp],
                QuantityArg::All => Quantity::ALL.to_vec(),
            };
            let measures = match measure {
                MeasureArg::Strip => vec![Measure::Strip],
                MeasureArg::Physical => vec![Measure::Physical],
                MeasureArg::Both => vec![Measure::Strip, Measure::Physical],
            };
            let rec = harness::decay(&cfg, &quantities, &measures, &dir)?;
            for f in &rec.fits {
                println!("{}", f.summary_line());
            }
            Ok(true)
        }
        Command::Average { convention } => {
            let convention = match convention {
                ConventionArg::Corrected => VelocityConvention::Corrected,
                ConventionArg::StatedDerivative => VelocityConvention::StatedDerivative,
                ConventionArg::FlippedSigns => VelocityConvention::FlippedSigns,
            };
            let rec = harness::average(&cfg, convention, &dir)?;
            for (k, v) in &rec.invariants {
                println!("{k:<28} {v:.3e}");
            }
            Ok(true)
        }
        Command::DefaultConfig => unreachable!(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
