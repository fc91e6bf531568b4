use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fxmidas::evaluation::{default_window, Scheme};
use fxmidas::ingest::load_snapshot;
use fxmidas::models::{ForecastOptions, FundamentalTiming, ModelKind};
use fxmidas::timeseries::Period;
use fxmidas_cli::{
    cmd_backtest, cmd_ingest, cmd_plotdata, cmd_simulate, cmd_stationarity, BacktestArgs, CliError,
    Format, PlotSeries,
};

/// Mixed-frequency exchange-rate forecasting: ingest source data, test
/// stationarity and backtest the model set against a random walk.
#[derive(Parser)]
#[command(name = "fxmidas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble a dataset from a manifest and write a snapshot.
    Ingest {
        #[arg(long)]
        manifest: PathBuf,
        /// Snapshot file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// ADF / KPSS unit-root table with integration orders.
    Stationarity {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Out-of-sample MSFE, Diebold-Mariano and Clark-West table.
    Backtest {
        #[arg(long)]
        snapshot: PathBuf,
        /// Comma-separated acronyms (RW, UIRP, ..., MF-TYLR2); all by default.
        #[arg(long, value_delimiter = ',')]
        models: Vec<String>,
        #[arg(long, value_enum, default_value_t = SchemeArg::Recursive)]
        scheme: SchemeArg,
        /// Rolling window in quarters; defaults to the training length.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value = "1994Q4")]
        train_end: String,
        #[arg(long, default_value = "2019Q1")]
        test_end: String,
        /// Explain each return with the previous quarter's fundamentals.
        #[arg(long)]
        lagged_fundamentals: bool,
        /// Random walk forecasts the last return instead of zero.
        #[arg(long)]
        rw_in_differences: bool,
        /// Use the output gap filtered on the whole sample.
        #[arg(long)]
        full_sample_gap: bool,
        /// First-difference fundamentals found to be I(1).
        #[arg(long)]
        difference_i1: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tidy CSV (period, series, value) for plotting.
    Plotdata {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        series: Vec<PlotSeries>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded synthetic source panel and manifest.
    Simulate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Recursive,
    Rolling,
}

fn period(s: &str) -> Result<Period, CliError> {
    Period::parse_as(s, fxmidas::timeseries::Frequency::Quarterly)
        .map_err(|e| CliError::Usage(format!("{s}: {e}")))
}

fn emit(text: String, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::core(path.display().to_string(), e.into())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest { manifest, out } => emit(cmd_ingest(&manifest, &out)?, None),
        Command::Stationarity {
            snapshot,
            format,
            out,
        } => emit(cmd_stationarity(&snapshot, format)?, out.as_deref()),
        Command::Backtest {
            snapshot,
            models,
            scheme,
            window,
            train_end,
            test_end,
            lagged_fundamentals,
            rw_in_differences,
            full_sample_gap,
            difference_i1,
            format,
            out,
        } => {
            let train_end = period(&train_end)?;
            let test_end = period(&test_end)?;
            let models = if models.is_empty() {
                ModelKind::ALL.to_vec()
            } else {
                models
                    .iter()
                    .map(|m| m.parse().map_err(|e| CliError::core("--models", e)))
                    .collect::<Result<_, _>>()?
            };
            let scheme = match (scheme, window) {
                (SchemeArg::Recursive, None) => Scheme::Recursive,
                (SchemeArg::Recursive, Some(_)) => {
                    return Err(CliError::Usage("--window requires --scheme rolling".into()))
                }
                (SchemeArg::Rolling, Some(w)) => Scheme::Rolling(w),
                (SchemeArg::Rolling, None) => {
                    let data = load_snapshot(&snapshot)
                        .map_err(|e| CliError::core(snapshot.display().to_string(), e))?;
                    Scheme::Rolling(default_window(&data, train_end))
                }
            };
            let args = BacktestArgs {
                models,
                scheme,
                train_end,
                test_end,
                options: ForecastOptions {
                    fundamentals: if lagged_fundamentals {
                        FundamentalTiming::Lagged
                    } else {
                        FundamentalTiming::Realized
                    },
                    rw_in_differences,
                    full_sample_gap,
                },
                difference_integrated: difference_i1,
            };
            emit(cmd_backtest(&snapshot, &args, format)?, out.as_deref())
        }
        Command::Plotdata {
            snapshot,
            series,
            out,
        } => emit(cmd_plotdata(&snapshot, &series)?, out.as_deref()),
        Command::Simulate { seed, out } => emit(cmd_simulate(seed, &out)?, None),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
