//! `qeval` — verification suites and sampling for the four-qubit
//! evaluation/measurement fixture.
//!
//! Exit codes: 0 when every emitted check passes, 1 when at least one check
//! fails (the failing claim ids are listed on stderr), 2 on operational
//! errors such as an unknown observable or a non-commuting plan.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qeval_cli::{render, simulate, verify_ghsz, verify_theorems, OutputFormat};

#[derive(Parser)]
#[command(
    name = "qeval",
    version,
    about = "Verify observable-algebra claims and sample measurement plans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the fixed-fixture checks: state, projectors, commutation
    /// structure, strong relations, and the sign-assignment enumeration.
    VerifyGhsz {
        /// Numeric tolerance for residual comparisons.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Report format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized theorem checks; deterministic for a fixed seed.
    VerifyTheorems {
        /// Numeric tolerance for residual comparisons.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Seed for the random-instance stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of randomized trials per property.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Report format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a measurement plan in the reference state and emit the
    /// support together with a frequency-vs-probability summary.
    Simulate {
        /// Comma-separated observable names, e.g. "M,G_alpha" or "~F".
        #[arg(long)]
        plan: String,
        /// Number of specimens to draw.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Seed for specimen sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Numeric tolerance for the plan's commutation checks.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Write the support here; the summary then goes to stdout. Without
        /// this flag the support goes to stdout and the summary to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::VerifyGhsz { tol, format, out } => emit(verify_ghsz(tol), format, out),
        Command::VerifyTheorems {
            tol,
            seed,
            trials,
            format,
            out,
        } => emit(verify_theorems(tol, seed, trials as usize), format, out),
        Command::Simulate {
            plan,
            n,
            seed,
            tol,
            out,
        } => {
            let sim = simulate(&plan, n as usize, seed, tol).map_err(|e| e.to_string())?;
            match out {
                Some(path) => {
                    fs::write(&path, sim.support_text())
                        .map_err(|e| format!("writing {}: {e}", path.display()))?;
                    print!("{}", sim.summary_text());
                }
                None => {
                    print!("{}", sim.support_text());
                    eprint!("{}", sim.summary_text());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit(
    report: qeval::report::VerificationReport,
    format: Format,
    out: Option<PathBuf>,
) -> Result<ExitCode, String> {
    let rendered = render(&report, format.into());
    match out {
        Some(path) => {
            fs::write(&path, rendered).map_err(|e| format!("writing {}: {e}", path.display()))?
        }
        None => print!("{rendered}"),
    }
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed checks: {}", report.failing_ids().join(", "));
        Ok(ExitCode::from(1))
    }
}
