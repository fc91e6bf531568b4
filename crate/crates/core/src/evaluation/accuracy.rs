//! Forecast accuracy: MSFE and the Diebold-Mariano and Clark-West tests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::hac::bartlett_long_run_variance;
use crate::error::{Error, Result};

/// Variances at or below this are treated as zero.
pub const VARIANCE_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SignificanceLevel {
    #[serde(rename = "1%")]
    One,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "10%")]
    Ten,
}

impl SignificanceLevel {
    pub const ALL: [SignificanceLevel; 3] = [
        SignificanceLevel::One,
        SignificanceLevel::Five,
        SignificanceLevel::Ten,
    ];

    pub fn alpha(self) -> f64 {
        match self {
            SignificanceLevel::One => 0.01,
            SignificanceLevel::Five => 0.05,
            SignificanceLevel::Ten => 0.10,
        }
    }

    /// Table marker: `***` at 1%, `**` at 5%, `*` at 10%.
    pub fn stars(self) -> &'static str {
        match self {
            SignificanceLevel::One => "***",
            SignificanceLevel::Five => "**",
            SignificanceLevel::Ten => "*",
        }
    }
}

/// Lag truncation / bandwidth and sample size behind a test statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestMeta {
    pub lags: usize,
    pub nobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Whether the null is rejected at each level.
    pub decision_at: BTreeMap<SignificanceLevel, bool>,
    pub meta: TestMeta,
}

impl TestResult {
    pub(crate) fn from_p_value(statistic: f64, p_value: f64, meta: TestMeta) -> Self {
        let decision_at = SignificanceLevel::ALL
            .into_iter()
            .map(|l| (l, p_value < l.alpha()))
            .collect();
        Self {
            statistic,
            p_value,
            decision_at,
            meta,
        }
    }

    pub fn rejects(&self, level: SignificanceLevel) -> bool {
        self.decision_at.get(&level).copied().unwrap_or(false)
    }

    /// Stars of the strictest level at which the null is rejected.
    pub fn stars(&self) -> &'static str {
        SignificanceLevel::ALL
            .into_iter()
            .find(|&l| self.rejects(l))
            .map_or("", SignificanceLevel::stars)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Loss {
    #[default]
    SquaredError,
}

impl Loss {
    fn apply(self, e: f64) -> f64 {
        match self {
            Loss::SquaredError => e * e,
        }
    }
}

pub(crate) fn std_normal() -> Normal {
    Normal::standard()
}

/// Mean squared forecast error.
pub fn msfe(errors: &[f64]) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64)
}

fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

/// t-ratio of the mean of `d` with a Bartlett long-run variance.
fn mean_t_ratio(d: &[f64], lags: usize) -> Result<f64> {
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let variance = bartlett_long_run_variance(d, lags);
    if !(variance > VARIANCE_FLOOR) {
        return Err(Error::DegenerateVariance { variance });
    }
    Ok(mean / (variance / n).sqrt())
}

/// Diebold-Mariano test of equal accuracy for `h`-step forecasts.
///
/// The loss differential is `loss(e_bench) - loss(e_model)`, so a positive
/// statistic favours the model. The long-run variance uses `h - 1` Bartlett
/// lags; the p-value is two-sided.
pub fn diebold_mariano(
    e_bench: &[f64],
    e_model: &[f64],
    h: usize,
    loss: Loss,
) -> Result<TestResult> {
    check_lengths(e_bench, e_model)?;
    if h == 0 {
        return Err(Error::InvalidParameter(
            "forecast horizon must be at least 1".into(),
        ));
    }
    let d: Vec<f64> = e_bench
        .iter()
        .zip(e_model)
        .map(|(&b, &m)| loss.apply(b) - loss.apply(m))
        .collect();
    let lags = h - 1;
    let stat = mean_t_ratio(&d, lags)?;
    let p = 2.0 * std_normal().cdf(-stat.abs());
    Ok(TestResult::from_p_value(
        stat,
        p.min(1.0),
        TestMeta {
            lags,
            nobs: d.len(),
        },
    ))
}

/// Per-period Clark-West adjusted loss differential
/// `e_small^2 - (e_large^2 - (f_small - f_large)^2)`.
pub fn clark_west_adjusted(
    e_small: &[f64],
    e_large: &[f64],
    f_small: &[f64],
    f_large: &[f64],
) -> Result<Vec<f64>> {
    check_lengths(e_small, e_large)?;
    check_lengths(e_small, f_small)?;
    check_lengths(e_small, f_large)?;
    Ok((0..e_small.len())
        .map(|t| {
            let gap = f_small[t] - f_large[t];
            e_small[t] * e_small[t] - (e_large[t] * e_large[t] - gap * gap)
        })
        .collect())
}

/// Clark-West test of a nested (small) model against the model that nests
/// it, for one-step forecasts. Upper-tail p-value: small values favour the
/// larger model.
pub fn clark_west(
    e_small: &[f64],
    e_large: &[f64],
    f_small: &[f64],
    f_large: &[f64],
) -> Result<TestResult> {
    let f = clark_west_adjusted(e_small, e_large, f_small, f_large)?;
    let stat = mean_t_ratio(&f, 0)?;
    let p = std_normal().cdf(-stat);
    Ok(TestResult::from_p_value(
        stat,
        p,
        TestMeta {
            lags: 0,
            nobs: f.len(),
        },
    ))
}
