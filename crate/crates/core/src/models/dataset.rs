//! The aligned bundle of dependent variable and fundamentals every model
//! draws its regressors from.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::output_gap;
use crate::timeseries::{
    aggregate_to_quarterly, align_span, diff, differential, Aggregation, Frequency, Period,
    TimeSeries, MONTHS_PER_QUARTER,
};

/// Construction settings shared by ingestion and synthetic generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetConfig {
    /// How the monthly exchange rate becomes a quarterly level.
    pub fx_aggregation: Aggregation,
    /// How monthly fundamentals become the classical models' quarterly regressors.
    pub regressor_aggregation: Aggregation,
    /// HP smoothing parameter for the (quarterly) output gap.
    pub hp_lambda: f64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            fx_aggregation: Aggregation::LastOfQuarter,
            regressor_aggregation: Aggregation::LastOfQuarter,
            hp_lambda: 1600.0,
        }
    }
}

/// A fundamental a model can use as a regressor. Every value is a
/// domestic-minus-foreign differential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Fundamental {
    Interest,
    Price,
    Money,
    Output,
    Inflation,
    OutputGap,
}

impl Fundamental {
    pub const ALL: [Fundamental; 6] = [
        Fundamental::Interest,
        Fundamental::Price,
        Fundamental::Money,
        Fundamental::Output,
        Fundamental::Inflation,
        Fundamental::OutputGap,
    ];

    /// Stem of design column labels.
    pub fn stem(self) -> &'static str {
        match self {
            Fundamental::Interest => "i_diff",
            Fundamental::Price => "p_diff",
            Fundamental::Money => "m_diff",
            Fundamental::Output => "y_diff",
            Fundamental::Inflation => "pi_diff",
            Fundamental::OutputGap => "ygap_diff",
        }
    }

    pub fn from_stem(stem: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.stem() == stem)
    }

    /// Whether the fundamental is observed monthly.
    pub fn is_monthly(self) -> bool {
        matches!(
            self,
            Fundamental::Interest
                | Fundamental::Price
                | Fundamental::Money
                | Fundamental::Inflation
        )
    }
}

/// Inputs to [`Dataset::from_parts`]; log levels where applicable.
#[derive(Debug, Clone)]
pub struct DatasetParts {
    /// Quarterly log exchange rate.
    pub fx_log: TimeSeries,
    /// Monthly interest-rate differential.
    pub i_diff: TimeSeries,
    /// Monthly log price-level differential.
    pub p_diff: TimeSeries,
    /// Monthly log money-supply differential.
    pub m_diff: TimeSeries,
    /// Monthly domestic inflation.
    pub inflation_domestic: TimeSeries,
    /// Monthly foreign inflation.
    pub inflation_foreign: TimeSeries,
    /// Quarterly domestic log GDP.
    pub gdp_domestic: TimeSeries,
    /// Quarterly foreign log GDP.
    pub gdp_foreign: TimeSeries,
}

/// Jointly aligned quarterly and monthly series.
///
/// Quarterly series span `[start, end]`; monthly series span the months of
/// those quarters exactly, so every monthly series is three times as long.
/// The quarterly log exchange rate additionally carries the quarter before
/// `start`, from which the first return is computed.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub(crate) config: DatasetConfig,
    pub(crate) fx_log: TimeSeries,
    pub(crate) ds: TimeSeries,
    pub(crate) monthly: BTreeMap<Fundamental, TimeSeries>,
    pub(crate) quarterly: BTreeMap<Fundamental, TimeSeries>,
    pub(crate) gdp_domestic: TimeSeries,
    pub(crate) gdp_foreign: TimeSeries,
    pub(crate) inflation_domestic: TimeSeries,
    pub(crate) inflation_foreign: TimeSeries,
    pub(crate) metadata: BTreeMap<String, String>,
}

impl Dataset {
    pub fn from_parts(parts: DatasetParts, config: DatasetConfig) -> Result<Self> {
        expect_freq(&parts.fx_log, Frequency::Quarterly)?;
        expect_freq(&parts.gdp_domestic, Frequency::Quarterly)?;
        expect_freq(&parts.gdp_foreign, Frequency::Quarterly)?;
        for s in [
            &parts.i_diff,
            &parts.p_diff,
            &parts.m_diff,
            &parts.inflation_domestic,
            &parts.inflation_foreign,
        ] {
            expect_freq(s, Frequency::Monthly)?;
        }

        let pi_diff = differential(&parts.inflation_domestic, &parts.inflation_foreign)?;
        let monthly = align_span(&[
            parts.i_diff,
            parts.p_diff,
            parts.m_diff,
            pi_diff,
            parts.inflation_domestic,
            parts.inflation_foreign,
        ])?;
        let monthly_q = aggregate_to_quarterly(&monthly[0], Aggregation::LastOfQuarter)?;
        let ds = diff(&parts.fx_log, 1)?;
        let gdp = align_span(&[parts.gdp_domestic, parts.gdp_foreign])?;

        let start = [ds.start(), monthly_q.start(), gdp[0].start()]
            .into_iter()
            .max()
            .expect("non-empty");
        let end = [ds.end(), monthly_q.end(), gdp[0].end()]
            .into_iter()
            .min()
            .expect("non-empty");
        if start > end {
            return Err(Error::EmptyOverlap);
        }
        let (m0, m1) = (Some(start.first_month()), Some(end.last_month()));
        let clip_q = |s: &TimeSeries| s.clip(Some(start), Some(end));
        let clip_m = |s: &TimeSeries| s.clip(m0, m1);

        let names = [
            Fundamental::Interest,
            Fundamental::Price,
            Fundamental::Money,
            Fundamental::Inflation,
        ];
        let mut monthly_map = BTreeMap::new();
        let mut quarterly_map = BTreeMap::new();
        for (f, s) in names.into_iter().zip(&monthly) {
            let m = clip_m(s)?;
            quarterly_map.insert(f, aggregate_to_quarterly(&m, config.regressor_aggregation)?);
            monthly_map.insert(f, m);
        }
        let gdp_domestic = clip_q(&gdp[0])?;
        let gdp_foreign = clip_q(&gdp[1])?;
        quarterly_map.insert(
            Fundamental::Output,
            differential(&gdp_domestic, &gdp_foreign)?,
        );
        quarterly_map.insert(
            Fundamental::OutputGap,
            gap_differential(&gdp_domestic, &gdp_foreign, config.hp_lambda)?,
        );

        let dataset = Self {
            config,
            fx_log: parts.fx_log.clip(Some(start.pred()), Some(end))?,
            ds: clip_q(&ds)?,
            monthly: monthly_map,
            quarterly: quarterly_map,
            gdp_domestic,
            gdp_foreign,
            inflation_domestic: clip_m(&monthly[4])?,
            inflation_foreign: clip_m(&monthly[5])?,
            metadata: BTreeMap::new(),
        };
        dataset.validate()?;
        Ok(dataset)
    }

    /// Check the joint-alignment invariants.
    pub(crate) fn validate(&self) -> Result<()> {
        let (start, end) = (self.start(), self.end());
        let n = self.len();
        let bad = |what: &str| Err(Error::InvalidManifest(format!("dataset invariant: {what}")));
        if self.fx_log.start() != start.pred() || self.fx_log.end() != end {
            return bad("exchange-rate level span");
        }
        for s in self
            .quarterly
            .values()
            .chain([&self.gdp_domestic, &self.gdp_foreign])
        {
            if s.start() != start || s.len() != n {
                return bad("quarterly span");
            }
        }
        for s in self
            .monthly
            .values()
            .chain([&self.inflation_domestic, &self.inflation_foreign])
        {
            if s.start() != start.first_month() || s.len() != MONTHS_PER_QUARTER * n {
                return bad("monthly span");
            }
        }
        if self.monthly.len() != 4 || self.quarterly.len() != 6 {
            return bad("fundamental set");
        }
        Ok(())
    }

    pub fn config(&self) -> &DatasetConfig {
        &self.config
    }

    /// First quarter with a return.
    pub fn start(&self) -> Period {
        self.ds.start()
    }

    pub fn end(&self) -> Period {
        self.ds.end()
    }

    /// Number of quarters.
    pub fn len(&self) -> usize {
        self.ds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ds.is_empty()
    }

    /// Quarterly log exchange rate, from the quarter before [`start`](Self::start).
    pub fn fx_log(&self) -> &TimeSeries {
        &self.fx_log
    }

    /// Quarterly log exchange-rate return.
    pub fn ds(&self) -> &TimeSeries {
        &self.ds
    }

    /// Monthly series of a monthly fundamental.
    pub fn monthly(&self, f: Fundamental) -> Option<&TimeSeries> {
        self.monthly.get(&f)
    }

    /// Quarterly series of any fundamental (aggregated for monthly ones,
    /// full-sample HP gap for the output gap).
    pub fn quarterly(&self, f: Fundamental) -> &TimeSeries {
        &self.quarterly[&f]
    }

    pub fn gdp_domestic(&self) -> &TimeSeries {
        &self.gdp_domestic
    }

    pub fn gdp_foreign(&self) -> &TimeSeries {
        &self.gdp_foreign
    }

    pub fn inflation_domestic(&self) -> &TimeSeries {
        &self.inflation_domestic
    }

    pub fn inflation_foreign(&self) -> &TimeSeries {
        &self.inflation_foreign
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn with_metadata(mut self, metadata: BTreeMap<String, String>) -> Self {
        self.metadata = metadata;
        self
    }

    /// Output-gap differential with both gaps filtered only on GDP up to
    /// and including `info_end`.
    pub fn gap_until(&self, info_end: Period) -> Result<TimeSeries> {
        let until = Some(info_end.min(self.end()));
        gap_differential(
            &self.gdp_domestic.clip(None, until)?,
            &self.gdp_foreign.clip(None, until)?,
            self.config.hp_lambda,
        )
    }

    /// First-difference the given fundamentals: monthly series at monthly
    /// frequency, quarterly series at quarterly frequency. The first quarter
    /// is dropped from every series so the calendar stays aligned.
    pub fn with_differenced(&self, fundamentals: &[Fundamental]) -> Result<Dataset> {
        if self.len() < 2 {
            return Err(Error::SeriesTooShort {
                needed: 2,
                got: self.len(),
            });
        }
        let start = self.start().succ();
        let (m0, q0) = (Some(start.first_month()), Some(start));
        let mut out = self.clone();
        for (f, s) in out.monthly.iter_mut() {
            *s = if fundamentals.contains(f) {
                diff(s, 1)?.clip(m0, None)?
            } else {
                s.clip(m0, None)?
            };
        }
        for (f, s) in out.quarterly.iter_mut() {
            *s = if fundamentals.contains(f) {
                diff(s, 1)?
            } else {
                s.clip(q0, None)?
            };
        }
        out.fx_log = self.fx_log.clip(Some(self.start()), None)?;
        out.ds = self.ds.clip(q0, None)?;
        out.gdp_domestic = self.gdp_domestic.clip(q0, None)?;
        out.gdp_foreign = self.gdp_foreign.clip(q0, None)?;
        out.inflation_domestic = self.inflation_domestic.clip(m0, None)?;
        out.inflation_foreign = self.inflation_foreign.clip(m0, None)?;
        out.validate()?;
        Ok(out)
    }
}

fn gap_differential(dom: &TimeSeries, foreign: &TimeSeries, lambda: f64) -> Result<TimeSeries> {
    differential(&output_gap(dom, lambda)?, &output_gap(foreign, lambda)?)
}

fn expect_freq(s: &TimeSeries, freq: Frequency) -> Result<()> {
    if s.freq() != freq {
        return Err(Error::WrongFrequency {
            expected: freq,
            got: s.freq(),
        });
    }
    Ok(())
}
