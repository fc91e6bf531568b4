//! Calendar-aware series container and the transforms every model needs.
//!
//! A [`TimeSeries`] is a gap-free run of observations on a monthly or
//! quarterly calendar. Values are immutable once constructed; every
//! transform returns a new series.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sampling frequency of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frequency {
    Monthly,
    Quarterly,
}

impl Frequency {
    pub fn periods_per_year(self) -> u32 {
        match self {
            Frequency::Monthly => 12,
            Frequency::Quarterly => 4,
        }
    }

    /// Number of `self` periods in one `low` period, if `low` is coarser or equal.
    pub fn ratio_to(self, low: Frequency) -> Option<usize> {
        let (hi, lo) = (self.periods_per_year(), low.periods_per_year());
        (hi % lo == 0).then_some((hi / lo) as usize)
    }
}

/// Months per quarter.
pub const MONTHS_PER_QUARTER: usize = 3;

/// A month or a quarter of a calendar year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Period {
    year: i32,
    index: u32,
    freq: Frequency,
}

impl Period {
    /// `index` is 1-based within the year (1..=12 or 1..=4).
    pub fn new(year: i32, index: u32, freq: Frequency) -> Result<Self> {
        if index == 0 || index > freq.periods_per_year() {
            return Err(Error::InvalidPeriod(format!(
                "index {index} out of range for {freq:?}"
            )));
        }
        Ok(Self { year, index, freq })
    }

    pub fn month(year: i32, month: u32) -> Result<Self> {
        Self::new(year, month, Frequency::Monthly)
    }

    pub fn quarter(year: i32, quarter: u32) -> Result<Self> {
        Self::new(year, quarter, Frequency::Quarterly)
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn freq(&self) -> Frequency {
        self.freq
    }

    /// Periods elapsed since year 0, period 1.
    pub fn ordinal(&self) -> i64 {
        self.year as i64 * self.freq.periods_per_year() as i64 + (self.index as i64 - 1)
    }

    pub fn from_ordinal(freq: Frequency, ordinal: i64) -> Self {
        let ppy = freq.periods_per_year() as i64;
        Self {
            year: ordinal.div_euclid(ppy) as i32,
            index: (ordinal.rem_euclid(ppy) + 1) as u32,
            freq,
        }
    }

    pub fn offset(&self, n: i64) -> Self {
        Self::from_ordinal(self.freq, self.ordinal() + n)
    }

    pub fn succ(&self) -> Self {
        self.offset(1)
    }

    pub fn pred(&self) -> Self {
        self.offset(-1)
    }

    /// Signed number of periods from `self` to `other`.
    ///
    /// # Panics
    /// Panics if the two periods have different frequencies.
    pub fn distance_to(&self, other: &Period) -> i64 {
        assert_eq!(self.freq, other.freq, "period frequency mismatch");
        other.ordinal() - self.ordinal()
    }

    /// Quarter containing this period (identity for quarters).
    pub fn to_quarter(&self) -> Self {
        match self.freq {
            Frequency::Quarterly => *self,
            Frequency::Monthly => Self {
                year: self.year,
                index: (self.index - 1) / 3 + 1,
                freq: Frequency::Quarterly,
            },
        }
    }

    /// First month of a quarter (identity for months).
    pub fn first_month(&self) -> Self {
        match self.freq {
            Frequency::Monthly => *self,
            Frequency::Quarterly => Self {
                year: self.year,
                index: (self.index - 1) * 3 + 1,
                freq: Frequency::Monthly,
            },
        }
    }

    /// Last month of a quarter (identity for months).
    pub fn last_month(&self) -> Self {
        self.first_month().offset(match self.freq {
            Frequency::Monthly => 0,
            Frequency::Quarterly => 2,
        })
    }

    /// True if this month opens a block of `m` months aligned to the year.
    fn starts_block(&self, m: usize) -> bool {
        m <= 1 || (self.index as usize - 1) % m == 0
    }

    /// Parse `s` and coerce it to `freq`. Accepts `YYYY-MM-DD`, `YYYY-MM`,
    /// `YYYYQn` and `YYYY-Qn`; monthly dates are mapped to their quarter
    /// when `freq` is quarterly.
    pub fn parse_as(s: &str, freq: Frequency) -> Result<Self> {
        let p: Period = s.parse()?;
        match (p.freq, freq) {
            (a, b) if a == b => Ok(p),
            (Frequency::Monthly, Frequency::Quarterly) => Ok(p.to_quarter()),
            _ => Err(Error::InvalidPeriod(format!(
                "{s:?} cannot be read as a {freq:?} period"
            ))),
        }
    }
}

impl PartialOrd for Period {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Period {
    fn cmp(&self, other: &Self) -> Ordering {
        // Compare by the first month of each period so mixed frequencies
        // still order consistently with calendar time.
        let a = self.first_month().ordinal();
        let b = other.first_month().ordinal();
        a.cmp(&b)
            .then((self.freq == Frequency::Quarterly).cmp(&(other.freq == Frequency::Quarterly)))
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.freq {
            Frequency::Monthly => write!(f, "{:04}-{:02}", self.year, self.index),
            Frequency::Quarterly => write!(f, "{:04}Q{}", self.year, self.index),
        }
    }
}

impl FromStr for Period {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPeriod(format!("cannot parse {s:?} as a period"));
        let s = s.trim();
        let (year, rest) = s.split_at_checked(4).ok_or_else(bad)?;
        let year: i32 = year.parse().map_err(|_| bad())?;
        let rest = rest.strip_prefix('-').unwrap_or(rest);
        if let Some(q) = rest.strip_prefix('Q').or_else(|| rest.strip_prefix('q')) {
            let q: u32 = q.parse().map_err(|_| bad())?;
            return Period::quarter(year, q);
        }
        let mut parts = rest.split('-');
        let month: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        match (parts.next(), parts.next()) {
            (None, None) => {}
            (Some(day), None) => {
                let day: u32 = day.parse().map_err(|_| bad())?;
                if !(1..=31).contains(&day) {
                    return Err(bad());
                }
            }
            _ => return Err(bad()),
        }
        Period::month(year, month)
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Gap-free, frequency-stamped numeric series.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    start: Period,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Rejects empty input and non-finite values (the missing-data markers).
    pub fn new(start: Period, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::MissingObservation { index });
        }
        Ok(Self { start, values })
    }

    pub fn start(&self) -> Period {
        self.start
    }

    pub fn end(&self) -> Period {
        self.period_at(self.values.len() - 1)
    }

    pub fn freq(&self) -> Frequency {
        self.start.freq()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn period_at(&self, k: usize) -> Period {
        self.start.offset(k as i64)
    }

    pub fn periods(&self) -> impl Iterator<Item = Period> + '_ {
        (0..self.len()).map(|k| self.period_at(k))
    }

    pub fn index_of(&self, p: Period) -> Option<usize> {
        if p.freq() != self.freq() {
            return None;
        }
        let d = self.start.distance_to(&p);
        (d >= 0 && (d as usize) < self.len()).then_some(d as usize)
    }

    pub fn get(&self, p: Period) -> Option<f64> {
        self.index_of(p).map(|k| self.values[k])
    }

    /// Restrict to `[from, to]` (inclusive, either bound optional).
    pub fn clip(&self, from: Option<Period>, to: Option<Period>) -> Result<TimeSeries> {
        let lo = from.map_or(0, |p| self.start.distance_to(&p).max(0));
        let hi = to.map_or(self.len() as i64 - 1, |p| {
            self.start.distance_to(&p).min(self.len() as i64 - 1)
        });
        if lo > hi {
            return Err(Error::EmptyOverlap);
        }
        Ok(TimeSeries {
            start: self.period_at(lo as usize),
            values: self.values[lo as usize..=hi as usize].to_vec(),
        })
    }

    /// Drop the first `n` observations.
    pub fn skip(&self, n: usize) -> Result<TimeSeries> {
        if n >= self.len() {
            return Err(Error::SeriesTooShort {
                needed: n + 1,
                got: self.len(),
            });
        }
        Ok(TimeSeries {
            start: self.period_at(n),
            values: self.values[n..].to_vec(),
        })
    }

    pub(crate) fn map_values(&self, f: impl Fn(f64) -> f64) -> TimeSeries {
        TimeSeries {
            start: self.start,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Element-wise natural logarithm.
pub fn log_transform(series: &TimeSeries) -> Result<TimeSeries> {
    if let Some((index, &value)) = series.values().iter().enumerate().find(|(_, v)| **v <= 0.0) {
        return Err(Error::NonPositiveValue { index, value });
    }
    Ok(series.map_values(f64::ln))
}

/// Element-wise exponential; inverse of [`log_transform`].
pub fn exp_transform(series: &TimeSeries) -> Result<TimeSeries> {
    let out = series.map_values(f64::exp);
    TimeSeries::new(out.start, out.values)
}

/// `order`-th difference. The result starts `order` periods later.
pub fn diff(series: &TimeSeries, order: usize) -> Result<TimeSeries> {
    if order == 0 {
        return Ok(series.clone());
    }
    if series.len() <= order {
        return Err(Error::SeriesTooShort {
            needed: order + 1,
            got: series.len(),
        });
    }
    let mut values = series.values().to_vec();
    for _ in 0..order {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(TimeSeries {
        start: series.period_at(order),
        values,
    })
}

/// `domestic - foreign` on the intersection of the two spans.
pub fn differential(domestic: &TimeSeries, foreign: &TimeSeries) -> Result<TimeSeries> {
    if domestic.freq() != foreign.freq() {
        return Err(Error::FrequencyMismatch {
            left: domestic.freq(),
            right: foreign.freq(),
        });
    }
    let aligned = align_span(&[domestic.clone(), foreign.clone()])?;
    let values = aligned[0]
        .values()
        .iter()
        .zip(aligned[1].values())
        .map(|(d, f)| d - f)
        .collect();
    Ok(TimeSeries {
        start: aligned[0].start(),
        values,
    })
}

/// How three months are collapsed into one quarter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Aggregation {
    /// End-of-period value (month 3 of the quarter).
    #[default]
    LastOfQuarter,
    /// Average of the three months.
    QuarterMean,
}

/// Collapse a monthly series to quarters, dropping partial edge quarters.
pub fn aggregate_to_quarterly(monthly: &TimeSeries, method: Aggregation) -> Result<TimeSeries> {
    if monthly.freq() != Frequency::Monthly {
        return Err(Error::WrongFrequency {
            expected: Frequency::Monthly,
            got: monthly.freq(),
        });
    }
    let lead = (0..MONTHS_PER_QUARTER)
        .find(|&k| monthly.period_at(k).starts_block(MONTHS_PER_QUARTER))
        .expect("one of three consecutive months opens a quarter");
    let quarters = monthly.len().saturating_sub(lead) / MONTHS_PER_QUARTER;
    if quarters == 0 {
        return Err(Error::NoCompleteQuarter);
    }
    let values = monthly.values()[lead..lead + quarters * MONTHS_PER_QUARTER]
        .chunks_exact(MONTHS_PER_QUARTER)
        .map(|c| match method {
            Aggregation::LastOfQuarter => c[MONTHS_PER_QUARTER - 1],
            Aggregation::QuarterMean => c.iter().sum::<f64>() / MONTHS_PER_QUARTER as f64,
        })
        .collect();
    Ok(TimeSeries {
        start: monthly.period_at(lead).to_quarter(),
        values,
    })
}

/// Trim every series to the common overlapping span, preserving order.
pub fn align_span(series: &[TimeSeries]) -> Result<Vec<TimeSeries>> {
    let Some(first) = series.first() else {
        return Ok(Vec::new());
    };
    let freq = first.freq();
    if let Some(s) = series.iter().find(|s| s.freq() != freq) {
        return Err(Error::FrequencyMismatch {
            left: freq,
            right: s.freq(),
        });
    }
    let start = series.iter().map(|s| s.start()).max().expect("non-empty");
    let end = series.iter().map(|s| s.end()).min().expect("non-empty");
    if start > end {
        return Err(Error::EmptyOverlap);
    }
    series
        .iter()
        .map(|s| s.clip(Some(start), Some(end)))
        .collect()
}

/// Trim a monthly series so it starts on the first month of a quarter and
/// ends on the last month of one.
pub fn trim_to_full_quarters(monthly: &TimeSeries) -> Result<TimeSeries> {
    if monthly.freq() != Frequency::Monthly {
        return Err(Error::WrongFrequency {
            expected: Frequency::Monthly,
            got: monthly.freq(),
        });
    }
    let q = aggregate_to_quarterly(monthly, Aggregation::LastOfQuarter)?;
    monthly.clip(Some(q.start().first_month()), Some(q.end().last_month()))
}
