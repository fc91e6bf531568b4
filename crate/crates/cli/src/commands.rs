use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use fxmidas::evaluation::{
    adf_test, backtest_with, compare_to_benchmark, difference_integrated, integration_order,
    kpss_test, AdfDeterministic, BacktestResult, KpssDeterministic, Scheme,
};
use fxmidas::filters::output_gap;
use fxmidas::ingest::{assemble_dataset, load_snapshot, snapshot, Manifest};
use fxmidas::models::{Dataset, ForecastOptions, Fundamental, ModelKind, ModelSpec};
use fxmidas::synthetic::realistic_panel;
use fxmidas::timeseries::{Period, TimeSeries};
use rayon::prelude::*;

use crate::report::{BacktestRow, BacktestTable, Format, StationarityRow, StationarityTable};
use crate::CliError;

/// Highest integration order tried for each variable.
const MAX_ORDER: usize = 2;

fn load(path: &Path) -> Result<Dataset, CliError> {
    load_snapshot(path).map_err(|e| CliError::core(path.display().to_string(), e))
}

/// Assemble the dataset a manifest describes and freeze it to
/// `snapshot_out`. Returns a span summary.
pub fn cmd_ingest(manifest_path: &Path, snapshot_out: &Path) -> Result<String, CliError> {
    let ctx = |e| CliError::core(manifest_path.display().to_string(), e);
    let manifest = Manifest::load(manifest_path).map_err(ctx)?;
    let data = assemble_dataset(&manifest).map_err(ctx)?;
    snapshot(&data, snapshot_out)
        .map_err(|e| CliError::core(snapshot_out.display().to_string(), e))?;
    let mut out = format!(
        "dataset {}..{} ({} quarters of returns)\n",
        data.start(),
        data.end(),
        data.len()
    );
    for f in Fundamental::ALL {
        let s = data.monthly(f).unwrap_or_else(|| data.quarterly(f));
        let _ = writeln!(
            out,
            "  {:<10} {}..{} ({} obs)",
            f.stem(),
            s.start(),
            s.end(),
            s.len()
        );
    }
    let _ = writeln!(out, "snapshot written to {}", snapshot_out.display());
    Ok(out)
}

fn stationarity_row(variable: &str, series: &TimeSeries) -> Result<StationarityRow, CliError> {
    let ctx = |e| CliError::core(variable, e);
    let adf = adf_test(series, AdfDeterministic::Constant, None).map_err(ctx)?;
    let kpss = kpss_test(series, KpssDeterministic::Level).map_err(ctx)?;
    let integration_order = match integration_order(series, MAX_ORDER) {
        Ok(d) => Some(d),
        Err(fxmidas::Error::OrderNotFound(_)) => None,
        Err(e) => return Err(ctx(e)),
    };
    Ok(StationarityRow {
        variable: variable.to_string(),
        adf,
        kpss,
        integration_order,
    })
}

/// ADF (constant), KPSS (level) and integration order for every series
/// the models use: returns, the differentials at their native frequency,
/// each country's output gap and inflation rate.
pub fn stationarity_table(data: &Dataset) -> Result<StationarityTable, CliError> {
    let lambda = data.config().hp_lambda;
    let gap = |gdp: &TimeSeries, who: &str| {
        output_gap(gdp, lambda).map_err(|e| CliError::core(format!("{who} output gap"), e))
    };
    let native = |f: Fundamental| data.monthly(f).unwrap_or_else(|| data.quarterly(f)).clone();
    let series = vec![
        ("Exchange rate returns", data.ds().clone()),
        ("Interest rate differential", native(Fundamental::Interest)),
        ("Price level differential", native(Fundamental::Price)),
        ("Money supply differential", native(Fundamental::Money)),
        ("Output differential", native(Fundamental::Output)),
        ("Domestic output gap", gap(data.gdp_domestic(), "domestic")?),
        ("Foreign output gap", gap(data.gdp_foreign(), "foreign")?),
        ("Domestic inflation rate", data.inflation_domestic().clone()),
        ("Foreign inflation rate", data.inflation_foreign().clone()),
    ];
    let rows = series
        .iter()
        .map(|(name, s)| stationarity_row(name, s))
        .collect::<Result<_, _>>()?;
    Ok(StationarityTable {
        start: data.start(),
        end: data.end(),
        rows,
    })
}

pub fn cmd_stationarity(snapshot: &Path, format: Format) -> Result<String, CliError> {
    stationarity_table(&load(snapshot)?)?.render(format)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestArgs {
    pub models: Vec<ModelKind>,
    pub scheme: Scheme,
    pub train_end: Period,
    pub test_end: Period,
    pub options: ForecastOptions,
    /// First-difference every fundamental found to be I(1) before
    /// estimation.
    pub difference_integrated: bool,
}

impl Default for BacktestArgs {
    fn default() -> Self {
        Self {
            models: ModelKind::ALL.to_vec(),
            scheme: Scheme::Recursive,
            train_end: Period::quarter(1994, 4).expect("valid"),
            test_end: Period::quarter(2019, 1).expect("valid"),
            options: ForecastOptions::default(),
            difference_integrated: false,
        }
    }
}

/// Backtest every requested model against the random walk. Models run in
/// parallel; rows come back in request order.
pub fn backtest_table(data: &Dataset, args: &BacktestArgs) -> Result<BacktestTable, CliError> {
    if args.models.is_empty() {
        return Err(CliError::Usage("no models requested".into()));
    }
    let differenced;
    let data = if args.difference_integrated {
        differenced = difference_integrated(data, MAX_ORDER)
            .map_err(|e| CliError::core("differencing", e))?
            .0;
        &differenced
    } else {
        data
    };
    let run = |kind: ModelKind| -> Result<BacktestResult, CliError> {
        backtest_with(
            &ModelSpec::new(kind),
            data,
            args.scheme,
            args.train_end,
            args.test_end,
            &args.options,
        )
        .map_err(|e| CliError::core(kind.acronym(), e))
    };
    let bench = run(ModelKind::RandomWalk)?;
    let results: Vec<Result<BacktestRow, CliError>> = args
        .models
        .par_iter()
        .map(|&kind| {
            if kind == ModelKind::RandomWalk {
                return Ok(BacktestRow {
                    model: kind,
                    msfe: bench.msfe,
                    dm: None,
                    cw: None,
                    msfe_ratio: None,
                });
            }
            let r = run(kind)?;
            let c =
                compare_to_benchmark(&bench, &r).map_err(|e| CliError::core(kind.acronym(), e))?;
            Ok(BacktestRow {
                model: kind,
                msfe: r.msfe,
                dm: Some(c.dm),
                cw: Some(c.cw),
                msfe_ratio: Some(c.msfe_ratio),
            })
        })
        .collect();
    Ok(BacktestTable {
        scheme: args.scheme,
        train_end: args.train_end,
        test_end: args.test_end,
        forecasts: bench.len(),
        rows: results.into_iter().collect::<Result<_, _>>()?,
    })
}

pub fn cmd_backtest(
    snapshot: &Path,
    args: &BacktestArgs,
    format: Format,
) -> Result<String, CliError> {
    backtest_table(&load(snapshot)?, args)?.render(format)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum PlotSeries {
    /// Log exchange rate, quarterly.
    Levels,
    /// Quarterly log returns.
    Returns,
    /// Quarterly fundamentals used as regressors.
    Predictors,
}

/// Tidy `period,series,value` CSV of the selected series.
pub fn plot_data(data: &Dataset, what: &[PlotSeries]) -> Result<String, CliError> {
    if what.is_empty() {
        return Err(CliError::Usage("no series selected for plot data".into()));
    }
    let mut selected: Vec<(String, &TimeSeries)> = Vec::new();
    let mut seen = BTreeMap::new();
    for &w in what {
        if seen.insert(w, ()).is_some() {
            continue;
        }
        match w {
            PlotSeries::Levels => selected.push(("fx_log".into(), data.fx_log())),
            PlotSeries::Returns => selected.push(("ds".into(), data.ds())),
            PlotSeries::Predictors => {
                for f in Fundamental::ALL {
                    selected.push((f.stem().into(), data.quarterly(f)));
                }
            }
        }
    }
    let mut out = String::from("period,series,value\n");
    for (name, s) in selected {
        for (p, v) in s.periods().zip(s.values()) {
            let _ = writeln!(out, "{p},{name},{v:?}");
        }
    }
    Ok(out)
}

pub fn cmd_plotdata(snapshot: &Path, what: &[PlotSeries]) -> Result<String, CliError> {
    plot_data(&load(snapshot)?, what)
}

/// Write a seeded synthetic Canada/US-shaped source panel and its manifest
/// into `dir`.
pub fn cmd_simulate(seed: u64, dir: &Path) -> Result<String, CliError> {
    let mut meta = BTreeMap::new();
    meta.insert("generator".to_string(), "realistic_panel".to_string());
    meta.insert("seed".to_string(), seed.to_string());
    let path = realistic_panel(seed)
        .write(dir, meta)
        .map_err(|e| CliError::core(dir.display().to_string(), e))?;
    Ok(format!(
        "synthetic panel (seed {seed}) written; manifest {}\n",
        path.display()
    ))
}
