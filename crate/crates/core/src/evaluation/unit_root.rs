//! Augmented Dickey-Fuller and KPSS tests, and the integration order both
//! agree on.

use serde::{Deserialize, Serialize};
use statrs::distribution::ContinuousCDF;

use super::accuracy::{std_normal, SignificanceLevel, TestMeta, TestResult};
use super::hac::long_run_variance_centered;
use crate::error::{Error, Result};
use crate::regression::{ols_fit, DesignMatrix};
use crate::timeseries::{diff, TimeSeries};

/// Shortest series either test accepts.
pub const MIN_LENGTH: usize = 15;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdfDeterministic {
    #[default]
    Constant,
    ConstantTrend,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum KpssDeterministic {
    #[default]
    Level,
    Trend,
}

/// Asymptotic Dickey-Fuller t distribution quantiles (cumulative
/// probability, quantile).
const ADF_CONSTANT: [(f64, f64); 8] = [
    (0.01, -3.43),
    (0.025, -3.12),
    (0.05, -2.86),
    (0.10, -2.57),
    (0.90, -0.44),
    (0.95, -0.07),
    (0.975, 0.23),
    (0.99, 0.60),
];

const ADF_TREND: [(f64, f64); 8] = [
    (0.01, -3.96),
    (0.025, -3.66),
    (0.05, -3.41),
    (0.10, -3.12),
    (0.90, -1.25),
    (0.95, -0.94),
    (0.975, -0.66),
    (0.99, -0.33),
];

/// KPSS upper-tail critical values (upper-tail probability, value).
const KPSS_LEVEL: [(f64, f64); 4] = [(0.10, 0.347), (0.05, 0.463), (0.025, 0.574), (0.01, 0.739)];
const KPSS_TREND: [(f64, f64); 4] = [(0.10, 0.119), (0.05, 0.146), (0.025, 0.176), (0.01, 0.216)];

impl AdfDeterministic {
    fn table(self) -> &'static [(f64, f64); 8] {
        match self {
            AdfDeterministic::Constant => &ADF_CONSTANT,
            AdfDeterministic::ConstantTrend => &ADF_TREND,
        }
    }

    /// Left-tail critical value at `level`.
    pub fn critical_value(self, level: SignificanceLevel) -> f64 {
        let alpha = level.alpha();
        self.table()
            .iter()
            .find(|(p, _)| *p == alpha)
            .map(|&(_, q)| q)
            .expect("tabulated level")
    }
}

impl KpssDeterministic {
    fn table(self) -> &'static [(f64, f64); 4] {
        match self {
            KpssDeterministic::Level => &KPSS_LEVEL,
            KpssDeterministic::Trend => &KPSS_TREND,
        }
    }

    pub fn critical_value(self, level: SignificanceLevel) -> f64 {
        let alpha = level.alpha();
        self.table()
            .iter()
            .find(|(p, _)| *p == alpha)
            .map(|&(_, q)| q)
            .expect("tabulated level")
    }
}

/// Piecewise-linear interpolation of `z` against `x` through sorted knots,
/// extrapolating from the end segments.
fn interpolate(knots: &[(f64, f64)], x: f64) -> f64 {
    let k = knots
        .windows(2)
        .position(|w| x <= w[1].0)
        .unwrap_or(knots.len() - 2);
    let ((x0, z0), (x1, z1)) = (knots[k], knots[k + 1]);
    z0 + (z1 - z0) * (x - x0) / (x1 - x0)
}

/// Left-tail p-value of an ADF statistic: table quantiles interpolated on
/// the probit scale.
fn adf_p_value(stat: f64, det: AdfDeterministic) -> f64 {
    let normal = std_normal();
    let knots: Vec<(f64, f64)> = det
        .table()
        .iter()
        .map(|&(p, q)| (q, normal.inverse_cdf(p)))
        .collect();
    normal.cdf(interpolate(&knots, stat))
}

/// Upper-tail p-value of a KPSS statistic: probit of the upper-tail
/// probability interpolated linearly in the log statistic.
fn kpss_p_value(stat: f64, det: KpssDeterministic) -> f64 {
    let normal = std_normal();
    let knots: Vec<(f64, f64)> = det
        .table()
        .iter()
        .map(|&(p, q)| (q.ln(), normal.inverse_cdf(1.0 - p)))
        .collect();
    normal.cdf(-interpolate(&knots, stat.max(f64::MIN_POSITIVE).ln()))
}

fn check_length(series: &TimeSeries) -> Result<()> {
    if series.len() < MIN_LENGTH {
        return Err(Error::SeriesTooShort {
            needed: MIN_LENGTH,
            got: series.len(),
        });
    }
    Ok(())
}

/// Default maximum ADF lag: `floor(12 (n/100)^(1/4))`.
pub fn schwert_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Default KPSS bandwidth: `floor(4 (n/100)^(2/9))`.
pub fn kpss_bandwidth(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// ADF regression on observations `y[first..]`, where `first >= lags + 1`.
fn adf_regression(
    y: &[f64],
    lags: usize,
    first: usize,
    det: AdfDeterministic,
) -> Result<crate::regression::RegressionFit> {
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let rows: Vec<usize> = (first..y.len()).collect();
    let mut cols = vec![(
        "level_lag".to_string(),
        rows.iter().map(|&t| y[t - 1]).collect::<Vec<f64>>(),
    )];
    if det == AdfDeterministic::ConstantTrend {
        cols.push(("trend".into(), rows.iter().map(|&t| t as f64).collect()));
    }
    for i in 1..=lags {
        cols.push((
            format!("diff_lag{i}"),
            rows.iter().map(|&t| dy[t - 1 - i]).collect(),
        ));
    }
    let target: Vec<f64> = rows.iter().map(|&t| dy[t - 1]).collect();
    ols_fit(&DesignMatrix::from_columns(cols)?, &target, true)
}

/// Augmented Dickey-Fuller test of a unit root.
///
/// The lag order is chosen by AIC over `0..=max_lag` on a common sample,
/// then the chosen regression is re-estimated on all usable observations.
/// `meta.lags` reports the chosen order.
pub fn adf_test(
    series: &TimeSeries,
    det: AdfDeterministic,
    max_lag: Option<usize>,
) -> Result<TestResult> {
    check_length(series)?;
    let y = series.values();
    let n = y.len();
    let n_det = match det {
        AdfDeterministic::Constant => 1,
        AdfDeterministic::ConstantTrend => 2,
    };
    let cap = (n / 2).saturating_sub(n_det + 1);
    let max_lag = max_lag.unwrap_or_else(|| schwert_max_lag(n)).min(cap);

    let mut best = (f64::INFINITY, 0);
    for k in 0..=max_lag {
        let fit = adf_regression(y, k, max_lag + 1, det)?;
        let m = fit.nobs() as f64;
        let aic = m * (fit.ssr / m).ln() + 2.0 * fit.n_params() as f64;
        if aic < best.0 {
            best = (aic, k);
        }
    }
    let lags = best.1;
    let fit = adf_regression(y, lags, lags + 1, det)?;
    let rho = fit.coefficient("level_lag").expect("level column");
    let se = fit.std_errors()[1];
    let stat = rho / se;
    let p = adf_p_value(stat, det);
    let decision_at = SignificanceLevel::ALL
        .into_iter()
        .map(|l| (l, stat < det.critical_value(l)))
        .collect();
    Ok(TestResult {
        statistic: stat,
        p_value: p,
        decision_at,
        meta: TestMeta {
            lags,
            nobs: fit.nobs(),
        },
    })
}

/// KPSS test of (level or trend) stationarity.
pub fn kpss_test(series: &TimeSeries, det: KpssDeterministic) -> Result<TestResult> {
    check_length(series)?;
    let y = series.values();
    let n = y.len();
    let resid = match det {
        KpssDeterministic::Level => {
            let mean = y.iter().sum::<f64>() / n as f64;
            y.iter().map(|v| v - mean).collect::<Vec<f64>>()
        }
        KpssDeterministic::Trend => {
            let x = DesignMatrix::from_columns(vec![(
                "trend".into(),
                (0..n).map(|t| t as f64).collect(),
            )])?;
            ols_fit(&x, y, true)?.residuals
        }
    };
    let lags = kpss_bandwidth(n);
    let s2 = long_run_variance_centered(&resid, lags);
    if !(s2 > 0.0) {
        return Err(Error::DegenerateVariance { variance: s2 });
    }
    let mut partial = 0.0;
    let mut sum_sq = 0.0;
    for e in &resid {
        partial += e;
        sum_sq += partial * partial;
    }
    let stat = sum_sq / ((n * n) as f64 * s2);
    let p = kpss_p_value(stat, det);
    let decision_at = SignificanceLevel::ALL
        .into_iter()
        .map(|l| (l, stat > det.critical_value(l)))
        .collect();
    Ok(TestResult {
        statistic: stat,
        p_value: p,
        decision_at,
        meta: TestMeta { lags, nobs: n },
    })
}

/// Smallest `d <= max_order` for which the `d`-th difference rejects the
/// ADF unit root (constant, 5%) and does not reject KPSS level
/// stationarity (5%).
pub fn integration_order(series: &TimeSeries, max_order: usize) -> Result<usize> {
    for d in 0..=max_order {
        let s = diff(series, d)?;
        let adf = adf_test(&s, AdfDeterministic::Constant, None)?;
        let kpss = kpss_test(&s, KpssDeterministic::Level)?;
        if adf.rejects(SignificanceLevel::Five) && !kpss.rejects(SignificanceLevel::Five) {
            return Ok(d);
        }
    }
    Err(Error::OrderNotFound(max_order))
}
