//! Least-squares estimation and MIDAS lag-weight curves.
//!
//! All model estimation goes through [`ols_fit`], which factors the design
//! with Householder QR. The weight generators are the normalised
//! exponential-Almon and Beta lag polynomials; they are utilities for
//! inspecting restricted lag shapes and are not used for estimation.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Label given to the intercept coefficient.
pub const INTERCEPT_LABEL: &str = "alpha";

/// Smallest admissible `|R_kk| / max |R_jj|` before a design is declared
/// rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Regressor matrix without the intercept column.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    /// Row-major.
    data: Vec<f64>,
    labels: Vec<String>,
}

impl DesignMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if labels.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: labels.len(),
            });
        }
        let mut seen = HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::DuplicateLabel(dup.clone()));
        }
        Ok(Self {
            rows,
            cols,
            data,
            labels,
        })
    }

    /// Build from named columns of equal length.
    pub fn from_columns(columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let rows = columns.first().map_or(0, |(_, c)| c.len());
        if let Some((_, c)) = columns.iter().find(|(_, c)| c.len() != rows) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: c.len(),
            });
        }
        let cols = columns.len();
        let mut data = vec![0.0; rows * cols];
        for (j, (_, col)) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                data[i * cols + j] = *v;
            }
        }
        let labels = columns.into_iter().map(|(l, _)| l).collect();
        Self::new(rows, cols, data, labels)
    }

    /// Zero-column design with `rows` observations.
    pub fn empty(rows: usize) -> Self {
        Self {
            rows,
            cols: 0,
            data: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Keep rows `range` only.
    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
            labels: self.labels.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionFit {
    /// Intercept first when present, then one per design column.
    pub coefficients: Vec<f64>,
    pub labels: Vec<String>,
    pub intercept: bool,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    /// `SSR / (n - p)`, `p` counting the intercept. NaN when `n == p`.
    pub sigma2: f64,
    /// `sigma2 * (X'X)^-1`, row-major `p x p`.
    pub covariance: Vec<f64>,
    pub r2: f64,
}

impl RegressionFit {
    pub fn nobs(&self) -> usize {
        self.residuals.len()
    }

    pub fn n_params(&self) -> usize {
        self.coefficients.len()
    }

    /// Slope coefficients (intercept excluded).
    pub fn slopes(&self) -> &[f64] {
        &self.coefficients[usize::from(self.intercept)..]
    }

    pub fn alpha(&self) -> f64 {
        if self.intercept {
            self.coefficients[0]
        } else {
            0.0
        }
    }

    pub fn std_errors(&self) -> Vec<f64> {
        let p = self.n_params();
        (0..p).map(|k| self.covariance[k * p + k].sqrt()).collect()
    }

    pub fn coefficient(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|k| self.coefficients[k])
    }
}

/// Ordinary least squares via Householder QR.
pub fn ols_fit(x: &DesignMatrix, y: &[f64], intercept: bool) -> Result<RegressionFit> {
    let n = x.rows();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let p = x.cols() + usize::from(intercept);
    if n < p {
        return Err(Error::RankDeficient { condition: 0.0 });
    }

    // Column-major copy of [1 | X].
    let mut a = vec![0.0; n * p];
    let offset = usize::from(intercept);
    if intercept {
        a[..n].fill(1.0);
    }
    for i in 0..n {
        for j in 0..x.cols() {
            a[(j + offset) * n + i] = x.get(i, j);
        }
    }
    let design = a.clone();

    let mut qty = y.to_vec();
    let mut r_diag = vec![0.0; p];
    for k in 0..p {
        let col = &mut a[k * n..(k + 1) * n];
        let norm = col[k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            r_diag[k] = 0.0;
            continue;
        }
        let alpha = if col[k] > 0.0 { -norm } else { norm };
        // v = col[k..] - alpha e_k, stored in place.
        col[k] -= alpha;
        let vtv: f64 = col[k..].iter().map(|v| v * v).sum();
        r_diag[k] = alpha;
        let v: Vec<f64> = col[k..].to_vec();
        for j in k + 1..p {
            let cj = &mut a[j * n + k..(j + 1) * n];
            let s = 2.0 * v.iter().zip(cj.iter()).map(|(a, b)| a * b).sum::<f64>() / vtv;
            for (c, vi) in cj.iter_mut().zip(&v) {
                *c -= s * vi;
            }
        }
        let s = 2.0 * v.iter().zip(&qty[k..]).map(|(a, b)| a * b).sum::<f64>() / vtv;
        for (c, vi) in qty[k..].iter_mut().zip(&v) {
            *c -= s * vi;
        }
    }

    let r = |i: usize, j: usize| if i == j { r_diag[i] } else { a[j * n + i] };
    if p > 0 {
        let max = r_diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let min = r_diag.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        let condition = if max > 0.0 { min / max } else { 0.0 };
        if condition < RANK_TOLERANCE {
            return Err(Error::RankDeficient { condition });
        }
    }

    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| r(i, j) * beta[j]).sum();
        beta[i] = (qty[i] - s) / r(i, i);
    }

    let residuals: Vec<f64> = (0..n)
        .map(|i| y[i] - (0..p).map(|j| design[j * n + i] * beta[j]).sum::<f64>())
        .collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let sigma2 = if n > p {
        ssr / (n - p) as f64
    } else {
        f64::NAN
    };

    // (X'X)^-1 = R^-1 R^-T.
    let mut rinv = vec![0.0; p * p];
    for c in 0..p {
        for i in (0..=c).rev() {
            let rhs = if i == c { 1.0 } else { 0.0 };
            let s: f64 = (i + 1..=c).map(|j| r(i, j) * rinv[j * p + c]).sum();
            rinv[i * p + c] = (rhs - s) / r(i, i);
        }
    }
    let mut covariance = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..p {
            let s: f64 = (i.max(j)..p)
                .map(|k| rinv[i * p + k] * rinv[j * p + k])
                .sum();
            covariance[i * p + j] = sigma2 * s;
        }
    }

    let mean = y.iter().sum::<f64>() / n.max(1) as f64;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r2 = if sst > 0.0 {
        1.0 - ssr / sst
    } else if ssr == 0.0 {
        1.0
    } else {
        0.0
    };

    let mut labels = Vec::with_capacity(p);
    if intercept {
        labels.push(INTERCEPT_LABEL.to_string());
    }
    labels.extend(x.labels().iter().cloned());

    Ok(RegressionFit {
        coefficients: beta,
        labels,
        intercept,
        residuals,
        ssr,
        sigma2,
        covariance,
        r2,
    })
}

/// `alpha + x_row . beta`.
pub fn predict(fit: &RegressionFit, x_row: &[f64]) -> Result<f64> {
    let slopes = fit.slopes();
    if x_row.len() != slopes.len() {
        return Err(Error::DimensionMismatch {
            expected: slopes.len(),
            got: x_row.len(),
        });
    }
    Ok(fit.alpha() + x_row.iter().zip(slopes).map(|(x, b)| x * b).sum::<f64>())
}

/// Normalised exponential Almon weights
/// `w_k = exp(t1 k + t2 k^2) / sum_j exp(t1 j + t2 j^2)`, `k = 0..=k_max`.
pub fn exp_almon_weights(theta: [f64; 2], k_max: usize) -> Vec<f64> {
    softmax((0..=k_max).map(|k| {
        let k = k as f64;
        theta[0] * k + theta[1] * k * k
    }))
}

/// Normalised Beta lag weights `w_k ~ u^(t1-1) (1-u)^(t2-1)` with
/// `u_k = (k+1)/(k_max+2)`.
pub fn beta_weights(theta1: f64, theta2: f64, k_max: usize) -> Result<Vec<f64>> {
    if !(theta1 > 0.0 && theta2 > 0.0) {
        return Err(Error::InvalidShape(format!(
            "theta1={theta1}, theta2={theta2}; both must be positive"
        )));
    }
    let denom = (k_max + 2) as f64;
    Ok(softmax((0..=k_max).map(|k| {
        let u = (k + 1) as f64 / denom;
        (theta1 - 1.0) * u.ln() + (theta2 - 1.0) * (1.0 - u).ln()
    })))
}

fn softmax(logits: impl Iterator<Item = f64>) -> Vec<f64> {
    let logits: Vec<f64> = logits.collect();
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}
