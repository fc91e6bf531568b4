//! Command implementations behind the `fxmidas` binary. Each command
//! returns its rendered output so it can be tested without a process.

pub mod commands;
pub mod report;

pub use commands::{
    backtest_table, cmd_backtest, cmd_ingest, cmd_plotdata, cmd_simulate, cmd_stationarity,
    plot_data, stationarity_table, BacktestArgs, PlotSeries,
};
pub use report::{BacktestRow, BacktestTable, Format, StationarityRow, StationarityTable};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad command-line input detected before touching the library.
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        source: fxmidas::Error,
    },
}

impl CliError {
    pub fn core(context: impl Into<String>, source: fxmidas::Error) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }

    /// 0 success, 1 input error, 2 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source, .. } if source.is_numerical() => 2,
            _ => 1,
        }
    }

    /// Name of the underlying error variant, e.g. `MissingRole`.
    pub fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "Usage".into(),
            CliError::Core { source, .. } => format!("{source:?}")
                .split(|c: char| !c.is_alphanumeric())
                .next()
                .unwrap_or_default()
                .to_string(),
        }
    }

    /// One-line message printed on stderr.
    pub fn diagnostic(&self) -> String {
        format!("error [{}]: {self}", self.kind())
    }
}
