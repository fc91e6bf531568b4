//! Pseudo out-of-sample evaluation with expanding or rolling estimation
//! windows.

use serde::{Deserialize, Serialize};

use super::accuracy::{clark_west, diebold_mariano, msfe, Loss, TestResult};
use crate::error::{Error, Result};
use crate::models::{forecast_with, Dataset, ForecastOptions, ModelSpec};
use crate::timeseries::Period;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Expanding window: every quarter up to the origin.
    Recursive,
    /// The given number of quarters ending at the origin.
    Rolling(usize),
}

impl Scheme {
    /// Rolling scheme whose window is the initial training length.
    pub fn rolling_default(data: &Dataset, train_end: Period) -> Self {
        Scheme::Rolling(default_window(data, train_end))
    }

    fn window(self) -> Option<usize> {
        match self {
            Scheme::Recursive => None,
            Scheme::Rolling(w) => Some(w),
        }
    }
}

/// Number of quarters from the start of the data through `train_end`.
pub fn default_window(data: &Dataset, train_end: Period) -> usize {
    usize::try_from(data.start().distance_to(&train_end) + 1).unwrap_or(0)
}

/// Forecast origins `train_end ..= test_end - 1`, each forecasting the
/// following quarter.
pub fn origins(train_end: Period, test_end: Period) -> Vec<Period> {
    let n = train_end.distance_to(&test_end).max(0);
    (0..n).map(|k| train_end.offset(k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestResult {
    pub spec: ModelSpec,
    pub scheme: Scheme,
    pub origins: Vec<Period>,
    pub forecasts: Vec<f64>,
    pub actuals: Vec<f64>,
    /// `actual - forecast`.
    pub errors: Vec<f64>,
    pub msfe: f64,
}

impl BacktestResult {
    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }
}

pub fn backtest(
    spec: &ModelSpec,
    data: &Dataset,
    scheme: Scheme,
    train_end: Period,
    test_end: Period,
) -> Result<BacktestResult> {
    backtest_with(
        spec,
        data,
        scheme,
        train_end,
        test_end,
        &ForecastOptions::default(),
    )
}

pub fn backtest_with(
    spec: &ModelSpec,
    data: &Dataset,
    scheme: Scheme,
    train_end: Period,
    test_end: Period,
    opts: &ForecastOptions,
) -> Result<BacktestResult> {
    if train_end.freq() != data.start().freq() || test_end.freq() != data.start().freq() {
        return Err(Error::InvalidRange(
            "train and test ends must be quarters".into(),
        ));
    }
    if train_end >= test_end {
        return Err(Error::InvalidRange(format!(
            "train end {train_end} must precede test end {test_end}"
        )));
    }
    if train_end < data.start() || test_end > data.end() {
        return Err(Error::InvalidRange(format!(
            "{train_end}..{test_end} outside data span {}..{}",
            data.start(),
            data.end()
        )));
    }
    if scheme == Scheme::Rolling(0) {
        return Err(Error::InvalidWindow(0));
    }
    let origins = origins(train_end, test_end);
    let mut forecasts = Vec::with_capacity(origins.len());
    let mut actuals = Vec::with_capacity(origins.len());
    for &origin in &origins {
        let f = forecast_with(spec, data, origin, scheme.window(), opts)?;
        forecasts.push(f.value);
        actuals.push(data.ds().get(f.target).expect("target within span"));
    }
    let errors: Vec<f64> = actuals.iter().zip(&forecasts).map(|(a, f)| a - f).collect();
    let msfe = msfe(&errors)?;
    Ok(BacktestResult {
        spec: *spec,
        scheme,
        origins,
        forecasts,
        actuals,
        errors,
        msfe,
    })
}

/// Tests of a model against the random-walk benchmark over the same origins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkComparison {
    /// Positive when the model beats the benchmark.
    pub dm: TestResult,
    /// Benchmark nested in the model.
    pub cw: TestResult,
    /// Model MSFE over benchmark MSFE.
    pub msfe_ratio: f64,
}

pub fn compare_to_benchmark(
    bench: &BacktestResult,
    model: &BacktestResult,
) -> Result<BenchmarkComparison> {
    if bench.origins != model.origins {
        return Err(Error::InvalidRange(
            "benchmark and model were evaluated on different origins".into(),
        ));
    }
    Ok(BenchmarkComparison {
        dm: diebold_mariano(&bench.errors, &model.errors, 1, Loss::SquaredError)?,
        cw: clark_west(
            &bench.errors,
            &model.errors,
            &bench.forecasts,
            &model.forecasts,
        )?,
        msfe_ratio: model.msfe / bench.msfe,
    })
}
