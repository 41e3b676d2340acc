use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ncg_cli::{emit_report, run_scenario, Format, Overrides};

#[derive(Debug, Parser)]
#[command(
    name = "ncg",
    version,
    about = "Invariant noncommutative connections: classification and verification"
)]
struct Args {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        seed: args.seed,
        tol: args.tol,
        trials: args.trials,
    };
    let result = run_scenario(&args.scenario, &overrides)
        .and_then(|report| emit_report(&report, args.format, args.out.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
