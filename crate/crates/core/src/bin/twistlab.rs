use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twistlab::experiments::{
    emit_report, run_suite_with, ExperimentConfig, Report, RunOptions, Suite,
};

#[derive(Parser)]
#[command(name = "twistlab", version, about = "Verification suites for twisted Hilbert spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite and write report.json and curves.csv.
    Run {
        #[arg(long)]
        suite: Option<Suite>,
        /// Comma-separated dimension ladder.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        samples: Option<usize>,
        /// Falls back to TWISTLAB_SEED, then 0.
        #[arg(long, env = "TWISTLAB_SEED")]
        seed: Option<u64>,
        /// JSON file with the same fields as the flags; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory, or `-` for JSON on stdout.
        #[arg(long, default_value = "-")]
        out: String,
        /// Include per-check wall-clock times in the report.
        #[arg(long)]
        timings: bool,
    },
    /// List the available suites.
    ListSuites,
}

fn summary(r: &Report) {
    for c in &r.checks {
        eprintln!(
            "{} {:<40} {:.6e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value
        );
    }
}

fn run(cli: Cli) -> twistlab::Result<bool> {
    match cli.command {
        Command::ListSuites => {
            for s in Suite::ALL {
                println!("{:<18} {}", s.name(), s.description());
            }
            Ok(true)
        }
        Command::Run {
            suite,
            dims,
            samples,
            seed,
            config,
            out,
            timings,
        } => {
            let mut cfg = match (&config, suite) {
                (Some(path), _) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
                (None, Some(s)) => ExperimentConfig::new(s, Vec::new(), 100, 0),
                (None, None) => {
                    return Err(twistlab::Error::InvalidConfig(
                        "give --suite or --config".into(),
                    ))
                }
            };
            if let Some(s) = suite {
                cfg.suite = s;
            }
            if let Some(d) = dims {
                cfg.dims = d;
            }
            if let Some(n) = samples {
                cfg.samples = n;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let report = run_suite_with(&cfg, RunOptions { timings })?;
            summary(&report);
            emit_report(&report, &out)?;
            Ok(report.passed)
        }
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
