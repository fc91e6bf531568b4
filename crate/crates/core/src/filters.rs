//! Derived predictors: Hodrick-Prescott trend/cycle, output gap, inflation.

use crate::error::{Error, Result};
use crate::timeseries::{diff, Frequency, TimeSeries};

/// Smoothing parameter conventionally used for each frequency
/// (1600 quarterly, Ravn-Uhlig scaling to 129600 monthly).
pub fn default_lambda(freq: Frequency) -> f64 {
    match freq {
        Frequency::Quarterly => 1600.0,
        Frequency::Monthly => 129_600.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendCycle {
    pub trend: TimeSeries,
    pub cycle: TimeSeries,
}

/// Hodrick-Prescott decomposition.
///
/// The trend solves `(I + lambda * D'D) tau = y`, where `D` is the
/// `(T-2) x T` second-difference operator. The cycle is computed first as
/// `c = lambda * D' (I + lambda * D D')^-1 D y`, an equivalent form whose
/// right-hand side vanishes for linear inputs; `I + lambda * D D'` is
/// symmetric positive definite with bandwidth 2 and is factored with a
/// banded Cholesky decomposition.
pub fn hp_filter(series: &TimeSeries, lambda: f64) -> Result<TrendCycle> {
    if series.len() < 4 {
        return Err(Error::SeriesTooShort {
            needed: 4,
            got: series.len(),
        });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "HP smoothing parameter must be positive, got {lambda}"
        )));
    }
    let y = series.values();
    let dy: Vec<f64> = y.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect();
    let band = PentaBand::toeplitz(dy.len(), 1.0 + 6.0 * lambda, -4.0 * lambda, lambda);
    let chol = band.cholesky();
    let mut u = chol.solve(&dy);
    // One step of iterative refinement.
    let r: Vec<f64> = band.mul(&u).iter().zip(&dy).map(|(a, b)| b - a).collect();
    for (ui, c) in u.iter_mut().zip(chol.solve(&r)) {
        *ui += c;
    }
    // cycle = lambda * D' u
    let mut cycle = vec![0.0; y.len()];
    for (k, uk) in u.iter().enumerate() {
        cycle[k] += lambda * uk;
        cycle[k + 1] -= 2.0 * lambda * uk;
        cycle[k + 2] += lambda * uk;
    }
    let trend = y.iter().zip(&cycle).map(|(a, c)| a - c).collect();
    Ok(TrendCycle {
        trend: TimeSeries::new(series.start(), trend)?,
        cycle: TimeSeries::new(series.start(), cycle)?,
    })
}

/// Deviation of log GDP from its HP trend.
pub fn output_gap(log_gdp: &TimeSeries, lambda: f64) -> Result<TimeSeries> {
    Ok(hp_filter(log_gdp, lambda)?.cycle)
}

/// First difference of log prices.
pub fn inflation(log_cpi: &TimeSeries) -> Result<TimeSeries> {
    diff(log_cpi, 1)
}

/// Symmetric matrix with two sub-diagonals, stored by diagonal.
#[derive(Debug, Clone)]
struct PentaBand {
    d0: Vec<f64>,
    /// `d1[i] = A[i+1][i]`
    d1: Vec<f64>,
    /// `d2[i] = A[i+2][i]`
    d2: Vec<f64>,
}

impl PentaBand {
    fn toeplitz(n: usize, diag: f64, off1: f64, off2: f64) -> Self {
        Self {
            d0: vec![diag; n],
            d1: vec![off1; n.saturating_sub(1)],
            d2: vec![off2; n.saturating_sub(2)],
        }
    }

    /// `I + lambda * D'D`.
    #[cfg(test)]
    fn hp(n: usize, lambda: f64) -> Self {
        let mut d0 = vec![1.0; n];
        let mut d1 = vec![0.0; n - 1];
        let mut d2 = vec![0.0; n - 2];
        // Accumulate lambda * D'D one second-difference row at a time.
        const C: [f64; 3] = [1.0, -2.0, 1.0];
        for r in 0..n - 2 {
            for a in 0..3 {
                d0[r + a] += lambda * C[a] * C[a];
                if a < 2 {
                    d1[r + a] += lambda * C[a] * C[a + 1];
                }
            }
            d2[r] += lambda * C[0] * C[2];
        }
        Self { d0, d1, d2 }
    }

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut s = self.d0[i] * x[i];
                if i >= 1 {
                    s += self.d1[i - 1] * x[i - 1];
                }
                if i >= 2 {
                    s += self.d2[i - 2] * x[i - 2];
                }
                if i + 1 < n {
                    s += self.d1[i] * x[i + 1];
                }
                if i + 2 < n {
                    s += self.d2[i] * x[i + 2];
                }
                s
            })
            .collect()
    }

    fn cholesky(&self) -> BandCholesky {
        let n = self.d0.len();
        let mut l0 = vec![0.0; n];
        let mut l1 = vec![0.0; n];
        let mut l2 = vec![0.0; n];
        for i in 0..n {
            if i >= 2 {
                l2[i] = self.d2[i - 2] / l0[i - 2];
            }
            if i >= 1 {
                l1[i] = (self.d1[i - 1] - l2[i] * l1[i - 1]) / l0[i - 1];
            }
            let pivot = self.d0[i] - l1[i] * l1[i] - l2[i] * l2[i];
            debug_assert!(pivot > 0.0, "I + lambda D'D is positive definite");
            l0[i] = pivot.sqrt();
        }
        BandCholesky { l0, l1, l2 }
    }
}

/// Lower factor `L` with `l1[i] = L[i][i-1]`, `l2[i] = L[i][i-2]`.
struct BandCholesky {
    l0: Vec<f64>,
    l1: Vec<f64>,
    l2: Vec<f64>,
}

impl BandCholesky {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut z = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            if i >= 1 {
                s -= self.l1[i] * z[i - 1];
            }
            if i >= 2 {
                s -= self.l2[i] * z[i - 2];
            }
            z[i] = s / self.l0[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = z[i];
            if i + 1 < n {
                s -= self.l1[i + 1] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.l2[i + 2] * x[i + 2];
            }
            x[i] = s / self.l0[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeseries::Period;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quarterly(v: Vec<f64>) -> TimeSeries {
        TimeSeries::new(Period::quarter(1985, 1).unwrap(), v).unwrap()
    }

    /// Dense `(I + lambda D'D) tau = y` solved by Gaussian elimination with
    /// partial pivoting.
    fn dense_oracle(y: &[f64], lambda: f64) -> Vec<f64> {
        let n = y.len();
        let mut a = vec![vec![0.0; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for r in 0..n - 2 {
            let d = [(r, 1.0), (r + 1, -2.0), (r + 2, 1.0)];
            for &(i, ci) in &d {
                for &(j, cj) in &d {
                    a[i][j] += lambda * ci * cj;
                }
            }
        }
        let mut b = y.to_vec();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            for row in col + 1..n {
                let f = a[row][col] / a[col][col];
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        x
    }

    fn random_walk(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut acc = 0.0;
        (0..n)
            .map(|_| {
                acc += rng.random_range(-1.0..1.0);
                acc
            })
            .collect()
    }

    #[test]
    fn linear_input_has_zero_cycle() {
        let s = quarterly((0..50).map(|t| 3.0 + 0.25 * t as f64).collect());
        for lambda in [1.0, 1600.0, 129_600.0] {
            let tc = hp_filter(&s, lambda).unwrap();
            let max = tc.cycle.values().iter().fold(0.0f64, |m, c| m.max(c.abs()));
            assert!(max < 1e-10, "lambda {lambda}: max cycle {max}");
        }
    }

    #[test]
    fn vanishing_penalty_returns_input() {
        let y = random_walk(40, 7);
        let tc = hp_filter(&quarterly(y.clone()), 1e-12).unwrap();
        for (t, v) in tc.trend.values().iter().zip(&y) {
            assert!((t - v).abs() < 1e-6);
        }
    }

    #[test]
    fn matches_dense_solver() {
        let y = random_walk(120, 11);
        let tc = hp_filter(&quarterly(y.clone()), 1600.0).unwrap();
        let oracle = dense_oracle(&y, 1600.0);
        for (a, b) in tc.trend.values().iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn trend_plus_cycle_reconstructs() {
        let y = random_walk(80, 3);
        let tc = hp_filter(&quarterly(y.clone()), 1600.0).unwrap();
        assert_eq!(tc.trend.start(), tc.cycle.start());
        for ((t, c), v) in tc.trend.values().iter().zip(tc.cycle.values()).zip(&y) {
            assert!((t + c - v).abs() <= 1e-10 * v.abs().max(1.0));
        }
    }

    #[test]
    fn residual_of_linear_system_is_small() {
        // Normwise backward error |A tau - y| / (|A| |tau| + |y|).
        let inf = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for lambda in [6.25, 1600.0, 129_600.0] {
            let y = random_walk(150, 5);
            let band = PentaBand::hp(y.len(), lambda);
            let tc = hp_filter(&quarterly(y.clone()), lambda).unwrap();
            let tau = tc.trend.values();
            let r: Vec<f64> = band.mul(tau).iter().zip(&y).map(|(a, b)| a - b).collect();
            let a_norm = 1.0 + 16.0 * lambda;
            assert!(inf(&r) / (a_norm * inf(tau) + inf(&y)) < 1e-10);
        }
    }

    #[test]
    fn affine_equivariance() {
        let y = random_walk(60, 9);
        let base = hp_filter(&quarterly(y.clone()), 1600.0).unwrap();
        let (a, b) = (-2.5, 4.0);
        let moved = hp_filter(&quarterly(y.iter().map(|v| a * v + b).collect()), 1600.0).unwrap();
        for (t0, t1) in base.trend.values().iter().zip(moved.trend.values()) {
            assert!((a * t0 + b - t1).abs() < 1e-9);
        }
    }

    #[test]
    fn cycle_sums_to_about_zero() {
        for seed in 0..5 {
            let y = random_walk(200, seed);
            let tc = hp_filter(&quarterly(y.clone()), 1600.0).unwrap();
            let sum: f64 = tc.cycle.values().iter().sum();
            let abs: f64 = y.iter().map(|v| v.abs()).sum();
            assert!(sum.abs() / abs < 1e-6, "seed {seed}: {}", sum.abs() / abs);
        }
    }

    #[test]
    fn errors() {
        let s = quarterly(vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            hp_filter(&s, 1600.0),
            Err(Error::SeriesTooShort { .. })
        ));
        let s = quarterly(vec![1.0, 2.0, 3.0, 5.0]);
        assert!(matches!(
            hp_filter(&s, 0.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn output_gap_examples() {
        let lin = quarterly((0..40).map(|t| 10.0 + 0.01 * t as f64).collect());
        assert!(output_gap(&lin, 1600.0)
            .unwrap()
            .values()
            .iter()
            .all(|g| g.abs() < 1e-10));
        let y = random_walk(60, 1);
        let g0 = output_gap(&quarterly(y.clone()), 1600.0).unwrap();
        let g1 = output_gap(&quarterly(y.iter().map(|v| v + 7.0).collect()), 1600.0).unwrap();
        for (a, b) in g0.values().iter().zip(g1.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn inflation_examples() {
        let m = |v: Vec<f64>| TimeSeries::new(Period::month(2000, 1).unwrap(), v).unwrap();
        assert!(inflation(&m(vec![4.6; 5]))
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
        let pi = inflation(&m(vec![4.60, 4.61])).unwrap();
        assert!((pi.values()[0] - 0.01).abs() < 1e-12);
        // 2% a year, compounded monthly on the log scale.
        let step = 1.02f64.ln() / 12.0;
        let pi = inflation(&m((0..24).map(|k| 4.6 + step * k as f64).collect())).unwrap();
        for v in pi.values() {
            assert!((v - 0.0016502189413483109).abs() < 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn agrees_with_dense_oracle(n in 4usize..=200, seed in any::<u64>()) {
                let y = random_walk(n, seed);
                let tc = hp_filter(&quarterly(y.clone()), 1600.0).unwrap();
                let oracle = dense_oracle(&y, 1600.0);
                for (a, b) in tc.trend.values().iter().zip(&oracle) {
                    prop_assert!((a - b).abs() < 1e-8);
                }
            }
        }
    }
}
