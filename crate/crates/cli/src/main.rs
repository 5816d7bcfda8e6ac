//! `ihat`: evaluate H and Î functions, tabulate densities of products, sums
//! and quotients of shifted generalized gamma variables, draw samples, and
//! check the analytic results against a convolution and Monte Carlo oracle.
//!
//! The job is a JSON document read from `--config` or stdin; flags override
//! its fields. Exit status: 0 success, 2 bad config, 3 numerical failure,
//! 4 comparison failed.

mod config;
mod run;

use std::io::{IsTerminal, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{ConfigError, Format, Grid, JobConfig, Op};
use run::Output;

#[derive(Parser, Debug)]
#[command(name = "ihat", version, about = "H/Î evaluation and densities of generalized gamma combinations")]
struct Cli {
    #[arg(long, value_enum)]
    op: Option<Op>,
    /// JSON job file; stdin is read when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// start:stop:points
    #[arg(long)]
    grid: Option<Grid>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_config(cli: &Cli) -> Result<JobConfig, ConfigError> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?,
        None if std::io::stdin().is_terminal() => String::new(),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| ConfigError(format!("stdin: {e}")))?;
            s
        }
    };
    let mut cfg = JobConfig::parse(&text)?;
    cfg.op = cli.op.or(cfg.op);
    cfg.grid = cli.grid.or(cfg.grid);
    cfg.tol = cli.tol.or(cfg.tol);
    cfg.seed = cli.seed.or(cfg.seed);
    cfg.samples = cli.samples.or(cfg.samples);
    cfg.format = cli.format.or(cfg.format);
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let job = match read_config(&cli).and_then(JobConfig::resolve) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("ihat: {e}");
            return ExitCode::from(2);
        }
    };
    let out = match run::run(&job) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("ihat: {}: {e}", job.op.name());
            return ExitCode::from(if e.is_numerical() { 3 } else { 2 });
        }
    };
    let text = run::render(&job, &out);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("ihat: {e}");
        return ExitCode::from(2);
    }
    match out {
        Output::Report(r) if !r.passed => ExitCode::from(4),
        _ => ExitCode::SUCCESS,
    }
}
