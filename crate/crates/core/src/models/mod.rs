//! The thirteen exchange-rate models: a driftless random walk, six classical
//! fundamentals regressions on quarterly data and their mixed-frequency
//! (U-MIDAS) counterparts that give each month of the quarter its own
//! coefficient.

mod dataset;
mod design;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dataset::{Dataset, DatasetConfig, DatasetParts, Fundamental};
pub use design::{
    build_design, build_design_with, column_timing, forecast_one_step, forecast_with, ColumnTiming,
    Forecast, ModelDesign,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ModelKind {
    RandomWalk,
    Uirp,
    Ppp,
    Mm1,
    Mm2,
    Tylr1,
    Tylr2,
    MfUirp,
    MfPpp,
    MfMm1,
    MfMm2,
    MfTylr1,
    MfTylr2,
}

/// One regressor block of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    /// A single quarterly column, `lag` quarters before the target.
    Quarterly { fundamental: Fundamental, lag: u32 },
    /// Three monthly columns of the target quarter, most recent first.
    Stacked(Fundamental),
}

impl ModelKind {
    /// Reporting order: benchmark, classical models, mixed-frequency models.
    pub const ALL: [ModelKind; 13] = [
        ModelKind::RandomWalk,
        ModelKind::Uirp,
        ModelKind::Ppp,
        ModelKind::Mm1,
        ModelKind::Mm2,
        ModelKind::Tylr1,
        ModelKind::Tylr2,
        ModelKind::MfUirp,
        ModelKind::MfPpp,
        ModelKind::MfMm1,
        ModelKind::MfMm2,
        ModelKind::MfTylr1,
        ModelKind::MfTylr2,
    ];

    pub fn acronym(self) -> &'static str {
        match self {
            ModelKind::RandomWalk => "RW",
            ModelKind::Uirp => "UIRP",
            ModelKind::Ppp => "PPP",
            ModelKind::Mm1 => "MM1",
            ModelKind::Mm2 => "MM2",
            ModelKind::Tylr1 => "TYLR1",
            ModelKind::Tylr2 => "TYLR2",
            ModelKind::MfUirp => "MF-UIRP",
            ModelKind::MfPpp => "MF-PPP",
            ModelKind::MfMm1 => "MF-MM1",
            ModelKind::MfMm2 => "MF-MM2",
            ModelKind::MfTylr1 => "MF-TYLR1",
            ModelKind::MfTylr2 => "MF-TYLR2",
        }
    }

    pub fn is_mixed_frequency(self) -> bool {
        matches!(
            self,
            ModelKind::MfUirp
                | ModelKind::MfPpp
                | ModelKind::MfMm1
                | ModelKind::MfMm2
                | ModelKind::MfTylr1
                | ModelKind::MfTylr2
        )
    }

    pub fn is_monetary(self) -> bool {
        matches!(
            self,
            ModelKind::Mm1 | ModelKind::Mm2 | ModelKind::MfMm1 | ModelKind::MfMm2
        )
    }

    /// The quarterly model a mixed-frequency model extends.
    pub fn classical_counterpart(self) -> ModelKind {
        match self {
            ModelKind::MfUirp => ModelKind::Uirp,
            ModelKind::MfPpp => ModelKind::Ppp,
            ModelKind::MfMm1 => ModelKind::Mm1,
            ModelKind::MfMm2 => ModelKind::Mm2,
            ModelKind::MfTylr1 => ModelKind::Tylr1,
            ModelKind::MfTylr2 => ModelKind::Tylr2,
            other => other,
        }
    }

    /// Regressor blocks in column order. Output (GDP) is only observed
    /// quarterly, so it stays a single column in the mixed-frequency
    /// monetary models; the output gap likewise enters once.
    pub fn blocks(self) -> Vec<Block> {
        use Fundamental::*;
        let q = |fundamental| Block::Quarterly {
            fundamental,
            lag: 0,
        };
        let s = Block::Stacked;
        match self {
            ModelKind::RandomWalk => vec![],
            ModelKind::Uirp => vec![q(Interest)],
            ModelKind::Ppp => vec![q(Price)],
            ModelKind::Mm1 => vec![q(Interest), q(Output), q(Money)],
            ModelKind::Mm2 => vec![q(Interest), q(Output), q(Money), q(Price)],
            ModelKind::Tylr1 => vec![q(Inflation), q(OutputGap)],
            ModelKind::Tylr2 => vec![
                q(Inflation),
                q(OutputGap),
                Block::Quarterly {
                    fundamental: Interest,
                    lag: 1,
                },
            ],
            ModelKind::MfUirp => vec![s(Interest)],
            ModelKind::MfPpp => vec![s(Price)],
            ModelKind::MfMm1 => vec![s(Interest), q(Output), s(Money)],
            ModelKind::MfMm2 => vec![s(Interest), q(Output), s(Money), s(Price)],
            ModelKind::MfTylr1 => vec![s(Inflation), q(OutputGap)],
            ModelKind::MfTylr2 => vec![s(Inflation), q(OutputGap), s(Interest)],
        }
    }

    /// Number of slope columns in the unrestricted design.
    pub fn n_regressors(self) -> usize {
        self.blocks()
            .iter()
            .map(|b| match b {
                Block::Quarterly { .. } => 1,
                Block::Stacked(_) => 3,
            })
            .sum()
    }

    pub fn uses(self, f: Fundamental) -> bool {
        self.blocks().iter().any(|b| match *b {
            Block::Quarterly { fundamental, .. } => fundamental == f,
            Block::Stacked(g) => g == f,
        })
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.acronym())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    /// Accepts the table acronyms case-insensitively, with `-` or `_`
    /// after the `MF` prefix.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('_', "-");
        if key == "RANDOMWALK" || key == "RANDOM-WALK" {
            return Ok(ModelKind::RandomWalk);
        }
        ModelKind::ALL
            .into_iter()
            .find(|k| k.acronym() == key)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

impl From<ModelKind> for String {
    fn from(k: ModelKind) -> String {
        k.acronym().to_string()
    }
}

impl TryFrom<String> for ModelKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A model together with its optional coefficient restrictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// Drop the intercept.
    #[serde(default)]
    pub restrict_alpha_zero: bool,
    /// Fix the money-differential coefficient at one (classical monetary
    /// models only).
    #[serde(default)]
    pub restrict_money_unity: bool,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            restrict_alpha_zero: false,
            restrict_money_unity: false,
        }
    }

    pub fn with_alpha_zero(mut self) -> Result<Self> {
        self.restrict_alpha_zero = true;
        self.validate()?;
        Ok(self)
    }

    pub fn with_money_unity(mut self) -> Result<Self> {
        self.restrict_money_unity = true;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.restrict_alpha_zero && self.kind == ModelKind::RandomWalk {
            return Err(Error::IllegalRestriction {
                model: self.kind.acronym(),
                restriction: "restrict_alpha_zero",
            });
        }
        if self.restrict_money_unity && !matches!(self.kind, ModelKind::Mm1 | ModelKind::Mm2) {
            return Err(Error::IllegalRestriction {
                model: self.kind.acronym(),
                restriction: "restrict_money_unity",
            });
        }
        Ok(())
    }

    pub fn has_intercept(&self) -> bool {
        self.kind != ModelKind::RandomWalk && !self.restrict_alpha_zero
    }
}

impl From<ModelKind> for ModelSpec {
    fn from(kind: ModelKind) -> Self {
        Self::new(kind)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.acronym())?;
        if self.restrict_alpha_zero {
            f.write_str("[a=0]")?;
        }
        if self.restrict_money_unity {
            f.write_str("[m=1]")?;
        }
        Ok(())
    }
}

/// Which quarter's fundamentals explain the return of quarter `t`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FundamentalTiming {
    /// Fundamentals of `t` itself: the contemporaneous relation is
    /// estimated and forecasts use the realized regressors of the target
    /// quarter.
    #[default]
    Realized,
    /// Fundamentals of `t - 1`: a genuine ex-ante forecast.
    Lagged,
}

impl FundamentalTiming {
    pub(crate) fn shift(self) -> u32 {
        match self {
            FundamentalTiming::Realized => 0,
            FundamentalTiming::Lagged => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForecastOptions {
    pub fundamentals: FundamentalTiming,
    /// Random walk forecasts the last observed return instead of zero.
    pub rw_in_differences: bool,
    /// Use the output gap filtered once on the whole sample instead of
    /// re-filtering GDP with only the data available at each origin.
    pub full_sample_gap: bool,
}
