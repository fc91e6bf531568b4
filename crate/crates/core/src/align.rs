//! Frequency alignment: reshape a high-frequency series into a
//! low-frequency matrix of stacked vectors.
//!
//! For `m = 3` and no extra lag blocks, months `x1..x6` become
//!
//! ```text
//! [x3 x2 x1]
//! [x6 x5 x4]
//! ```
//!
//! so each quarter's row holds its own months, most recent first. With
//! `k_lags > 0` each row is extended with the blocks of the `k_lags`
//! preceding low-frequency periods.

use crate::error::{Error, Result};
use crate::timeseries::{Frequency, Period, TimeSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct AlignedMatrix {
    rows: usize,
    cols: usize,
    m: usize,
    k_lags: usize,
    data: Vec<f64>,
    /// High-frequency period of the oldest observation in block 0 of row 0.
    high_start: Period,
}

impl AlignedMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn freq_ratio(&self) -> usize {
        self.m
    }

    pub fn k_lags(&self) -> usize {
        self.k_lags
    }

    /// Row-major cells.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    /// Low-frequency period of row 0, when the ratio maps onto a calendar
    /// frequency (`m = 1`, or monthly data with `m = 3`).
    pub fn start(&self) -> Option<Period> {
        match (self.high_start.freq(), self.m) {
            (_, 1) => Some(self.high_start),
            (Frequency::Monthly, 3) => Some(self.high_start.to_quarter()),
            _ => None,
        }
    }

    /// High-frequency period of the earliest observation in row 0's
    /// current block.
    pub fn high_start(&self) -> Period {
        self.high_start
    }
}

/// Stack `high` into rows of `m * (k_lags + 1)` columns.
///
/// Leading observations before the first low-frequency boundary are
/// dropped, then the remaining length must be a multiple of `m`. The first
/// `k_lags` low-frequency rows are dropped so every row is complete.
pub fn stack(high: &TimeSeries, m: usize, k_lags: usize) -> Result<AlignedMatrix> {
    if m == 0 {
        return Err(Error::InvalidRatio);
    }
    let lead = boundary_offset(high.start(), m);
    let len = high.len().saturating_sub(lead);
    if len < m * (k_lags + 1) {
        return Err(Error::TooShort {
            len: high.len(),
            m,
            k_lags,
        });
    }
    if len % m != 0 {
        return Err(Error::NotDivisible { len, m });
    }
    let x = &high.values()[lead..];
    let t_total = len / m;
    let rows = t_total - k_lags;
    let cols = m * (k_lags + 1);
    let mut data = Vec::with_capacity(rows * cols);
    for t in k_lags..t_total {
        for l in 0..=k_lags {
            let block_end = m * (t - l + 1) - 1;
            data.extend((0..m).map(|j| x[block_end - j]));
        }
    }
    Ok(AlignedMatrix {
        rows,
        cols,
        m,
        k_lags,
        data,
        high_start: high.period_at(lead + k_lags * m),
    })
}

/// Inverse of [`stack`] for matrices without lag blocks.
pub fn unstack(mat: &AlignedMatrix) -> Result<TimeSeries> {
    if mat.k_lags != 0 {
        return Err(Error::NotInvertible { k_lags: mat.k_lags });
    }
    let values = (0..mat.rows)
        .flat_map(|r| mat.row(r).iter().rev().copied())
        .collect();
    TimeSeries::new(mat.high_start, values)
}

/// Number of leading observations to drop so the series starts on a
/// low-frequency boundary. Ratios that do not divide the calendar year
/// have no boundary and nothing is dropped.
fn boundary_offset(start: Period, m: usize) -> usize {
    let ppy = start.freq().periods_per_year() as usize;
    if m <= 1 || ppy % m != 0 {
        return 0;
    }
    let pos = (start.index() as usize - 1) % m;
    (m - pos) % m
}
