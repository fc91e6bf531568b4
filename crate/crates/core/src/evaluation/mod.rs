//! Out-of-sample evaluation and the statistical tests used to judge it.

pub mod accuracy;
pub mod backtest;
pub mod hac;
pub mod unit_root;

pub use accuracy::{
    clark_west, clark_west_adjusted, diebold_mariano, msfe, Loss, SignificanceLevel, TestMeta,
    TestResult,
};
pub use backtest::{
    backtest, backtest_with, compare_to_benchmark, default_window, origins, BacktestResult,
    BenchmarkComparison, Scheme,
};
pub use unit_root::{adf_test, integration_order, kpss_test, AdfDeterministic, KpssDeterministic};

use crate::error::Result;
use crate::models::{Dataset, Fundamental};

/// Integration order of one fundamental, `None` when no order up to the
/// maximum satisfies both unit-root tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegressorOrder {
    pub fundamental: Fundamental,
    pub order: Option<usize>,
}

/// Determine each fundamental's integration order (monthly series where
/// they exist, quarterly otherwise) and first-difference those that are
/// I(1).
pub fn difference_integrated(
    data: &Dataset,
    max_order: usize,
) -> Result<(Dataset, Vec<RegressorOrder>)> {
    let mut orders = Vec::new();
    for f in Fundamental::ALL {
        let series = data.monthly(f).unwrap_or_else(|| data.quarterly(f));
        let order = match integration_order(series, max_order) {
            Ok(d) => Some(d),
            Err(e) if e.is_numerical() => None,
            Err(e) => return Err(e),
        };
        orders.push(RegressorOrder {
            fundamental: f,
            order,
        });
    }
    let integrated: Vec<Fundamental> = orders
        .iter()
        .filter(|o| o.order == Some(1))
        .map(|o| o.fundamental)
        .collect();
    Ok((data.with_differenced(&integrated)?, orders))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::DatasetConfig;
    use crate::testutil::{noise, series, toy_parts};
    use crate::timeseries::Period;

    #[test]
    fn differences_only_integrated_regressors() {
        let mut parts = toy_parts(40);
        let m0 = Period::month(1985, 1).unwrap();
        // Money as a pure random walk, interest as white noise.
        let walk: Vec<f64> = (0..480)
            .scan(0.0, |acc, k| {
                *acc += noise(40, k);
                Some(*acc)
            })
            .collect();
        parts.m_diff = series(m0, 480, |k| walk[k]);
        let data = Dataset::from_parts(parts, DatasetConfig::default()).unwrap();
        let (dd, orders) = difference_integrated(&data, 2).unwrap();
        let order = |f| orders.iter().find(|o| o.fundamental == f).unwrap().order;
        assert_eq!(order(Fundamental::Money), Some(1));
        assert_eq!(order(Fundamental::Interest), Some(0));
        assert_eq!(dd.len(), data.len() - 1);
        let m = data.monthly(Fundamental::Money).unwrap().values();
        let dm = dd.monthly(Fundamental::Money).unwrap().values();
        assert_eq!(dm[0], m[3] - m[2]);
        assert_eq!(
            dd.monthly(Fundamental::Interest).unwrap().values(),
            &data.monthly(Fundamental::Interest).unwrap().values()[3..]
        );
    }
}
