//! Batch driver for the qsphere verification suites.
//!
//! Exit status: 0 when every check passes, 2 when any check fails or cannot
//! be evaluated, 1 on a configuration error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qsphere::report::{run_all, Record, Suite, SuiteConfig};
use qsphere::Half;

#[derive(Parser, Debug)]
#[command(name = "q4s", version, about = "Verification suites for the orthogonal quantum 4-sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Deformation parameter; repeat for several values.
    #[arg(long = "q", global = true, default_values_t = [0.5])]
    q: Vec<f64>,
    /// Spinor cutoff as "25/2" or "12.5"; an integer sets the scalar cutoff.
    #[arg(long, global = true, default_value = "25/2")]
    cutoff: String,
    /// Tolerance for operator identities.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Restrict the run to one suite of the selected command.
    #[arg(long, global = true)]
    suite: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    Relations,
    Idempotent,
    Pairing,
    Zeta,
    Real,
    Approx,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema: u32,
    records: &'a [Record],
}

enum Failure {
    Config(String),
    Run(String),
}

fn suites_for(command: Command) -> Vec<Suite> {
    match command {
        Command::Relations => vec![Suite::Relations],
        Command::Idempotent => vec![Suite::Idempotent],
        Command::Pairing => vec![Suite::Pairing],
        Command::Zeta => vec![Suite::Zeta],
        Command::Real => vec![Suite::Real],
        Command::Approx => vec![Suite::Approx],
        Command::All => Suite::ALL.to_vec(),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("Q4S_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| Failure::Config(format!("Q4S_THREADS={raw:?} is not a count")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn render(records: &[Record], format: Format) -> Result<Vec<u8>, Failure> {
    let fail = |e: &dyn std::fmt::Display| Failure::Run(format!("cannot write report: {e}"));
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&JsonReport { schema: 1, records }).map_err(|e| fail(&e))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r).map_err(|e| fail(&e))?;
            }
            w.into_inner().map_err(|e| fail(&e))
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    let config = |e: qsphere::Error| Failure::Config(e.to_string());
    let mut suites = suites_for(cli.command);
    if let Some(name) = &cli.suite {
        let s: Suite = name.parse().map_err(config)?;
        if !suites.contains(&s) {
            return Err(Failure::Config(format!("suite {s} is not part of the selected command")));
        }
        suites = vec![s];
    }
    let cutoff: Half = cli.cutoff.parse().map_err(config)?;
    let mut cfgs = Vec::new();
    for &q in &cli.q {
        let mut cfg = SuiteConfig::new(q).with_cutoff(cutoff);
        if let Some(t) = cli.tol {
            cfg = cfg.with_tolerance(t);
        }
        cfg.validate().map_err(config)?;
        cfgs.push(cfg);
    }
    let records = run_all(&suites, &cfgs).map_err(|e| Failure::Run(e.to_string()))?;
    let bytes = render(&records, cli.format)?;
    match &cli.output {
        Some(path) => fs::write(path, &bytes).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))?,
        None => io::stdout().write_all(&bytes).map_err(|e| Failure::Run(e.to_string()))?,
    }
    let failed = records.iter().filter(|r| !r.pass).count();
    eprintln!("{} checks, {failed} failed", records.len());
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
