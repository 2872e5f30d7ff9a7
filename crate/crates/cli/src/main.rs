use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use periodrh_cli::output::{emit, render};
use periodrh_cli::run::{run_angles, run_criteria, run_lvalues, run_verify};
use periodrh_cli::{CliError, Format, Report, RunConfig};
use periodrh_core::Sign;

#[derive(Parser)]
#[command(name = "periodrh", version)]
#[command(about = "Certify that period-polynomial zeros of newforms lie on |z| = 1/√N")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline with a single pass/fail per form
    Verify(Common),
    /// Critical values L(f,1..k-1) and Λ(f,1..k-1) with error bounds
    Lvalues(Common),
    /// Sufficient-condition thresholds and verdicts
    Criteria {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        weight: Option<u32>,
        #[arg(long)]
        level: Option<u64>,
        /// Least level for each tabulated m in the large-weight criterion
        #[arg(long)]
        table: bool,
    },
    /// Predicted zero angles, matched against computed roots when specs are given
    Angles {
        #[command(flatten)]
        common: Common,
        #[arg(long, requires_all = ["level", "sign"])]
        weight: Option<u32>,
        #[arg(long)]
        level: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Spec documents, coefficient files or directories of them
    inputs: Vec<PathBuf>,

    #[arg(long, env = "PERIODRH_PRECISION_BITS", default_value_t = 128)]
    precision_bits: u32,

    #[arg(long, default_value_t = 1e-9)]
    tol_circle: f64,

    /// Root residual tolerance relative to the largest coefficient
    #[arg(long, default_value_t = 1e-12)]
    tol_residual: f64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[arg(long)]
    out: Option<PathBuf>,

    /// Add the bundled fixture corpus
    #[arg(long)]
    paper_suite: bool,

    /// Worker threads (default: available parallelism)
    #[arg(long)]
    jobs: Option<usize>,

    #[arg(long)]
    no_criteria: bool,

    #[arg(long)]
    no_angles: bool,

    /// Record per-stage wall-clock times (makes output non-reproducible)
    #[arg(long)]
    timings: bool,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            inputs: self.inputs.clone(),
            paper_suite: self.paper_suite,
            precision_bits: self.precision_bits,
            tol_circle: self.tol_circle,
            tol_residual: self.tol_residual,
            format: self.format,
            out: self.out.clone(),
            jobs: self.jobs,
            criteria: !self.no_criteria,
            angles: !self.no_angles,
            timings: self.timings,
        }
    }
}

fn dispatch(command: &Command) -> Result<(Report, RunConfig), CliError> {
    match command {
        Command::Verify(c) => {
            let cfg = c.config();
            Ok((run_verify(&cfg)?, cfg))
        }
        Command::Lvalues(c) => {
            let cfg = c.config();
            Ok((run_lvalues(&cfg)?, cfg))
        }
        Command::Criteria { common, weight, level, table } => {
            let cfg = common.config();
            Ok((run_criteria(&cfg, *weight, *level, *table)?, cfg))
        }
        Command::Angles { common, weight, level, sign } => {
            let cfg = common.config();
            let manual = match (weight, level, sign) {
                (Some(k), Some(n), Some(s)) => {
                    let sign = Sign::parse_declared(s)
                        .map_err(CliError::Invalid)?
                        .ok_or_else(|| CliError::Invalid("--sign must be +1 or -1".into()))?;
                    Some((*k, *n, sign))
                }
                _ => None,
            };
            Ok((run_angles(&cfg, manual)?, cfg))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli.command).and_then(|(report, cfg)| {
        let text = render(&report, cfg.format)?;
        emit(&text, cfg.out.as_deref())?;
        Ok(report.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("periodrh: {e}");
            ExitCode::from(2)
        }
    }
}
