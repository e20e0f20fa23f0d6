//! Runs a verification suite and writes report.json and curves.csv.
//!
//! ```text
//! cargo run --release --example experiment -- hidden_symmetry /tmp/hs
//! ```

use twistlab::experiments::{emit_report, run_suite, ExperimentConfig, Suite};

fn main() -> twistlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("nontriviality").parse()?;
    let out = args.next().unwrap_or_else(|| "-".into());

    let report = run_suite(&ExperimentConfig::new(suite, Vec::new(), 100, 7))?;
    for c in &report.checks {
        eprintln!("{} {:<36} {:.4e}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.value);
        for p in &c.curve {
            eprintln!("       dim {:>5}  {:.6e}", p.dim, p.value);
        }
    }
    emit_report(&report, &out)
}
