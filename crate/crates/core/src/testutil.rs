use crate::models::{Dataset, DatasetConfig, DatasetParts};
use crate::timeseries::{Period, TimeSeries};

/// Deterministic pseudo-random value in [-1, 1) (splitmix64).
pub fn noise(seed: u64, k: usize) -> f64 {
    let mut z = seed.wrapping_add((k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

pub fn series(start: Period, n: usize, f: impl Fn(usize) -> f64) -> TimeSeries {
    TimeSeries::new(start, (0..n).map(f).collect()).unwrap()
}

/// `years` years of irregular fundamentals from 1985 with a flat
/// exchange rate.
pub fn toy_parts(years: usize) -> DatasetParts {
    let m0 = Period::month(1985, 1).unwrap();
    let q0 = Period::quarter(1985, 1).unwrap();
    let (nm, nq) = (12 * years, 4 * years);
    DatasetParts {
        fx_log: series(q0, nq, |_| 0.0),
        i_diff: series(m0, nm, |k| noise(1, k)),
        p_diff: series(m0, nm, |k| 0.01 * k as f64 + 0.1 * noise(2, k)),
        m_diff: series(m0, nm, |k| noise(3, k)),
        inflation_domestic: series(m0, nm, |k| 0.002 + 0.001 * noise(4, k)),
        inflation_foreign: series(m0, nm, |k| 0.002 + 0.001 * noise(5, k)),
        gdp_domestic: series(q0, nq, |k| 10.0 + 0.01 * k as f64 + 0.01 * noise(6, k)),
        gdp_foreign: series(q0, nq, |k| 11.0 + 0.008 * k as f64 + 0.01 * noise(7, k)),
    }
}

/// Replace the exchange rate so that quarterly returns from the
/// dataset's second quarter on equal `ds(t)`.
pub fn with_returns(parts: &DatasetParts, ds: impl Fn(Period) -> f64) -> Dataset {
    let base = Dataset::from_parts(parts.clone(), DatasetConfig::default()).unwrap();
    let mut level = vec![0.0];
    for t in base.ds().periods() {
        let last = *level.last().unwrap();
        level.push(last + ds(t));
    }
    let mut p = parts.clone();
    p.fx_log = TimeSeries::new(base.start().pred(), level).unwrap();
    Dataset::from_parts(p, DatasetConfig::default()).unwrap()
}
