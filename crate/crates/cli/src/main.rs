use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use poalg_cli::report::render;
use poalg_cli::run::{run_scenario, Agreement};
use poalg_cli::scenario::{load_scenario, ScenarioError, SCHEMA};
use poalg_cli::verify::{verify, VerifyOptions};

#[derive(Parser)]
#[command(name = "poalg", version, about = "Pseudo-observable algebra: property verifier and scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomized property sweeps and print a JSON report.
    Verify {
        /// Dimension range, inclusive, as `lo..hi`.
        #[arg(long, default_value = "2..12", value_parser = parse_dims)]
        dims: RangeInclusive<usize>,
        /// Trials per property.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplier applied to every property tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a measurement scenario and print its report.
    Run {
        file: PathBuf,
        /// Override the scenario's sample count.
        #[arg(long)]
        samples: Option<u64>,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the scenario file schema with an example.
    Schema,
}

fn parse_dims(text: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = text.split_once("..").ok_or("expected lo..hi")?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo == 0 || lo > hi {
        return Err("need 1 <= lo <= hi".into());
    }
    Ok(lo..=hi)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Schema => {
            print!("{SCHEMA}");
            ExitCode::SUCCESS
        }
        Command::Verify {
            dims,
            trials,
            seed,
            tol_scale,
            out,
        } => {
            let report = verify(&VerifyOptions {
                dims,
                trials,
                seed,
                tol_scale,
            });
            if let Err(e) = emit(&report.to_json(), out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("{} of {} properties failed", report.failed_properties, report.properties.len());
                ExitCode::FAILURE
            }
        }
        Command::Run {
            file,
            samples,
            seed,
            out,
        } => {
            let mut scenario = match load_scenario(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return match e {
                        ScenarioError::Validation(_) => ExitCode::FAILURE,
                        _ => ExitCode::from(2),
                    };
                }
            };
            if let Some(n) = samples {
                scenario.samples = n;
            }
            if let Some(s) = seed {
                scenario.seed = s;
            }
            let report = match run_scenario(&scenario) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            };
            if let Err(e) = emit(&render(&report), out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.worst_agreement() == Agreement::Fail {
                eprintln!("error: empirical frequencies disagree with the analytic distribution by more than 4 standard errors");
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
    }
}
