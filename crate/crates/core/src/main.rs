use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use deficiency_lab::scenario::{catalog_text, invariant_suite, list_models, run_scenario, EXIT_ERROR, EXIT_OK, EXIT_VIOLATION};

/// Environment variable that sets the worker thread count.
const THREADS_ENV: &str = "DEFLAB_THREADS";

#[derive(Parser)]
#[command(name = "deflab", version, about = "Self-adjoint extension convergence laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario configs; each writes report.json and metrics.csv to <out>/<name>/.
    Run {
        #[arg(long, required = true, num_args = 1..)]
        config: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the invariant suite and print its JSON report.
    Invariants {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace every upper-bound tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the model catalog.
    ListModels {
        #[arg(long)]
        json: bool,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| format!("{THREADS_ENV}: expected a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV}: must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| format!("{THREADS_ENV}: {e}"))
}

fn run(config: &[PathBuf], out: &std::path::Path) -> i32 {
    let outcomes: Vec<i32> = config
        .par_iter()
        .map(|path| match run_scenario(path, out) {
            Ok((report, dir)) => {
                let verdicts: Vec<String> =
                    report.reports.iter().map(|r| format!("{}={}", r.diagnostic.name(), r.verdict.label())).collect();
                println!(
                    "{}: {} | violations {} | {}",
                    report.scenario,
                    verdicts.join(" "),
                    report.violations(),
                    dir.display()
                );
                report.exit_code()
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                EXIT_ERROR
            }
        })
        .collect();
    if outcomes.contains(&EXIT_ERROR) {
        EXIT_ERROR
    } else if outcomes.contains(&EXIT_VIOLATION) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn invariants(seed: u64, tol: Option<f64>, out: Option<PathBuf>) -> i32 {
    let report = match invariant_suite(seed, tol).and_then(|r| Ok((r.to_json()?, r))) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let (text, report) = report;
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_ERROR;
            }
            for r in &report.results {
                println!("{} {}", if r.passed { "pass" } else { "FAIL" }, r.name);
            }
        }
        None => print!("{text}"),
    }
    report.exit_code()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ERROR as u8);
    }
    let code = match cli.command {
        Command::Run { config, out } => run(&config, &out),
        Command::Invariants { seed, tol, out } => invariants(seed, tol, out),
        Command::ListModels { json } => {
            if json {
                match serde_json::to_string_pretty(&list_models()) {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_ERROR as u8);
                    }
                }
            } else {
                print!("{}", catalog_text());
            }
            EXIT_OK
        }
    };
    ExitCode::from(code as u8)
}
