//! `branchcurve`: branching curves of curvature tensors from the command line.
//!
//! Exit codes: 0 success, 1 I/O failure or failed convergence check,
//! 2 schema or argument error, 3 symmetry violation, 4 singular or infinite
//! singular time, 5 identically vanishing curve.

mod commands;
mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use branchcurve_core::chart::Chart;
use branchcurve_core::ExecMode;
use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{BlowupArgs, Emit, FlowArgs};
use crate::error::{CliError, CliResult};

const DEFAULT_TOL: f64 = 1e-10;
const TOL_ENV: &str = "BRANCHCURVE_TOL";

#[derive(Parser)]
#[command(name = "branchcurve", version, about = "Branching curves of four-dimensional curvature tensors")]
struct Cli {
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlowEmit {
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartArg {
    Pp,
    Pm,
    Mp,
    Mm,
}

impl From<ChartArg> for Chart {
    fn from(c: ChartArg) -> Self {
        match c {
            ChartArg::Pp => Chart::PP,
            ChartArg::Pm => Chart::PM,
            ChartArg::Mp => Chart::MP,
            ChartArg::Mm => Chart::MM,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients, class and blocks of the curve of one tensor.
    Compute {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        emit: Emit,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Normalised coefficients along the closed form Ricci flow.
    Flow {
        geometry: String,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        #[arg(long, value_enum, default_value = "csv")]
        emit: FlowEmit,
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Convergence of the curves of a parabolic blow-up sequence.
    Blowup {
        geometry: String,
        #[arg(long, default_value_t = 0.5)]
        lambda_base: f64,
        #[arg(long, default_value_t = 8)]
        count: usize,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        t: f64,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// `log10|Δ|` on a real grid in one affine chart, as CSV.
    Plot {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "pp")]
        chart: ChartArg,
        #[arg(long, default_value_t = 61)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn resolve_tol(flag: Option<f64>) -> CliResult<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|e| CliError::Schema(format!("{TOL_ENV}={s:?} is not a number: {e}")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Schema(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

fn run(cli: Cli) -> CliResult<()> {
    let mode = if cli.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::default()
    };
    match cli.command {
        Command::Compute { input, emit, tol } => {
            let text = commands::compute(&input, emit, resolve_tol(tol)?, mode)?;
            commands::write_output(None, &text)
        }
        Command::Flow {
            geometry,
            t0,
            t1,
            steps,
            emit: FlowEmit::Csv,
            kappa,
        } => {
            let text = commands::flow(&FlowArgs {
                geometry: &geometry,
                kappa,
                t0,
                t1,
                steps,
            })?;
            commands::write_output(None, &text)
        }
        Command::Blowup {
            geometry,
            lambda_base,
            count,
            t,
            kappa,
            tol,
        } => {
            let args = BlowupArgs {
                geometry: &geometry,
                kappa,
                lambda_base,
                count,
                t,
            };
            let (text, ok) = commands::blowup(&args, resolve_tol(tol)?, mode)?;
            commands::write_output(None, &text)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Assertion("last distance exceeds the first".into()))
            }
        }
        Command::Plot {
            input,
            chart,
            grid,
            out,
            tol,
        } => {
            let text = commands::plot(&input, chart.into(), grid, resolve_tol(tol)?, mode)?;
            commands::write_output(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
