//! Bartlett-kernel (Newey-West) long-run variance.

/// Long-run variance of `x` around its mean:
/// `g0 + 2 sum_{j=1..lags} (1 - j/(lags+1)) g_j` with autocovariances
/// normalised by `n`. With `lags = 0` this is the plain variance (divisor `n`).
pub fn bartlett_long_run_variance(x: &[f64], lags: usize) -> f64 {
    let n = x.len();
    if n == 0 {
        return f64::NAN;
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let e: Vec<f64> = x.iter().map(|v| v - mean).collect();
    long_run_variance_centered(&e, lags)
}

/// As [`bartlett_long_run_variance`] for data already centred (e.g.
/// regression residuals).
pub fn long_run_variance_centered(e: &[f64], lags: usize) -> f64 {
    let n = e.len();
    let gamma = |j: usize| e[j..].iter().zip(e).map(|(a, b)| a * b).sum::<f64>() / n as f64;
    let mut s = gamma(0);
    for j in 1..=lags.min(n.saturating_sub(1)) {
        s += 2.0 * (1.0 - j as f64 / (lags as f64 + 1.0)) * gamma(j);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_lags_is_population_variance() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((bartlett_long_run_variance(&x, 0) - 1.25).abs() < 1e-15);
    }

    #[test]
    fn one_lag_by_hand() {
        // Centred: [-1.5,-0.5,0.5,1.5]; g0 = 1.25, g1 = (0.75-0.25+0.75)/4.
        let x = [1.0, 2.0, 3.0, 4.0];
        let g1 = (0.75 - 0.25 + 0.75) / 4.0;
        let expected = 1.25 + 2.0 * 0.5 * g1;
        assert!((bartlett_long_run_variance(&x, 1) - expected).abs() < 1e-15);
    }

    #[test]
    fn alternating_series_shrinks() {
        let x: Vec<f64> = (0..100)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        assert!(bartlett_long_run_variance(&x, 4) < bartlett_long_run_variance(&x, 0));
    }
}
