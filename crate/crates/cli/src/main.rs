use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

#[derive(Parser, Debug)]
#[command(name = "krverify", version, about = "Exact checks of the M = N fermionic identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the JSON report to this path ("-" for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Worker threads for the parallel core (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Record wall-clock time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The restricted sum M(λ, n; q).
    Msum(commands::SumArgs),
    /// The unrestricted sum N(λ, n; q).
    Nsum(commands::SumArgs),
    /// M(1) = N(1) over a sweep, with the type-A oracle where available.
    Verify(commands::VerifyArgs),
    /// Q-system polynomiality and specialization checks.
    Qsystem(commands::QsystemArgs),
    /// Generating-function identities.
    Genfun(commands::GenfunArgs),
}

/// Bad input detected after clap parsing; reported with exit status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn configure_workers(workers: Option<usize>) -> anyhow::Result<()> {
    let Some(n) = workers else { return Ok(()) };
    if n == 0 {
        return Err(Usage("--workers must be at least 1".into()).into());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the worker pool")?;
    #[cfg(not(feature = "parallel"))]
    eprintln!("note: built without the parallel feature; --workers {n} ignored");
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    configure_workers(cli.common.workers)?;
    let start = Instant::now();
    let (mut report, text) = match &cli.command {
        Command::Msum(a) => commands::sum(a, true)?,
        Command::Nsum(a) => commands::sum(a, false)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Qsystem(a) => commands::qsystem(a)?,
        Command::Genfun(a) => commands::genfun(a)?,
    };
    if cli.common.timing {
        report.set_wall_clock(start.elapsed());
    }
    let to_stdout = cli.common.json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if !to_stdout {
        print!("{text}");
    }
    if let Some(path) = &cli.common.json {
        let body = report.render();
        if to_stdout {
            println!("{body}");
        } else {
            std::fs::write(path, body + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// Parsed shared inputs; errors become usage errors.
pub fn usage<T, E: std::fmt::Display>(r: Result<T, E>) -> anyhow::Result<T> {
    r.map_err(|e| Usage(e.to_string()).into())
}
