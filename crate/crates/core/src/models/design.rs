use crate::align::{stack, AlignedMatrix};
use crate::error::{Error, Result};
use crate::regression::{ols_fit, predict, DesignMatrix, RegressionFit};
use crate::timeseries::{Period, TimeSeries, MONTHS_PER_QUARTER};

use super::{Block, Dataset, ForecastOptions, Fundamental, ModelKind, ModelSpec};

/// Regression inputs for one model over every quarter where all of its
/// regressors are observed.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelDesign {
    pub spec: ModelSpec,
    /// Left-hand side: the return minus `offset`.
    pub y: Vec<f64>,
    pub x: DesignMatrix,
    /// Quarter of each row.
    pub periods: Vec<Period>,
    /// Part of the return fixed by a restriction, added back to forecasts.
    pub offset: Vec<f64>,
    pub intercept: bool,
}

impl ModelDesign {
    pub fn row_of(&self, t: Period) -> Option<usize> {
        let first = *self.periods.first()?;
        let k = usize::try_from(first.distance_to(&t)).ok()?;
        (k < self.periods.len()).then_some(k)
    }
}

/// Calendar position of a design column relative to the row's quarter `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnTiming {
    pub fundamental: Fundamental,
    pub quarters_back: u32,
    /// `Some(j)`: the `j`-th month before the last month of quarter
    /// `t - quarters_back`. `None`: a quarterly observation.
    pub month_back: Option<u32>,
}

impl ColumnTiming {
    /// The observation period the column holds for row quarter `t`.
    pub fn observation(&self, t: Period) -> Period {
        let q = t.offset(-i64::from(self.quarters_back));
        match self.month_back {
            Some(j) => q.last_month().offset(-i64::from(j)),
            None => q,
        }
    }

    fn label(&self) -> String {
        let stem = self.fundamental.stem();
        match (self.month_back, self.quarters_back) {
            (None, 0) => format!("{stem}_t"),
            (None, k) => format!("{stem}_t-{k}"),
            (Some(0), 0) => format!("{stem}_3t"),
            (Some(j), 0) => format!("{stem}_3t-{j}"),
            (Some(0), k) => format!("{stem}_3(t-{k})"),
            (Some(j), k) => format!("{stem}_3(t-{k})-{j}"),
        }
    }
}

/// Parse a design column label back into its calendar position.
pub fn column_timing(label: &str) -> Option<ColumnTiming> {
    let (fundamental, rest) = Fundamental::ALL.into_iter().find_map(|f| {
        label
            .strip_prefix(f.stem())
            .and_then(|r| r.strip_prefix('_'))
            .map(|r| (f, r))
    })?;
    let num = |s: &str| s.parse::<u32>().ok().filter(|&v| v > 0);
    let (quarters_back, month_back) = if let Some(r) = rest.strip_prefix("3(t-") {
        let (k, tail) = r.split_once(')')?;
        let j = match tail {
            "" => 0,
            _ => num(tail.strip_prefix('-')?)?,
        };
        (num(k)?, Some(j))
    } else if let Some(r) = rest.strip_prefix("3t") {
        let j = match r {
            "" => 0,
            _ => num(r.strip_prefix('-')?)?,
        };
        (0, Some(j))
    } else if let Some(r) = rest.strip_prefix('t') {
        match r {
            "" => (0, None),
            _ => (num(r.strip_prefix('-')?)?, None),
        }
    } else {
        return None;
    };
    if month_back.is_some_and(|j| j as usize >= MONTHS_PER_QUARTER) {
        return None;
    }
    Some(ColumnTiming {
        fundamental,
        quarters_back,
        month_back,
    })
}

/// Design on the full sample with default options.
pub fn build_design(spec: &ModelSpec, data: &Dataset) -> Result<ModelDesign> {
    build_design_with(spec, data, &ForecastOptions::default(), None)
}

enum Source<'a> {
    Quarterly(&'a TimeSeries),
    Stacked(&'a AlignedMatrix, Period, usize),
}

impl Source<'_> {
    /// Value for row quarter `t` given the column's timing.
    fn value(&self, timing: &ColumnTiming, t: Period) -> Option<f64> {
        let u = t.offset(-i64::from(timing.quarters_back));
        match *self {
            Source::Quarterly(s) => s.get(u),
            Source::Stacked(mat, start, j) => {
                let r = usize::try_from(start.distance_to(&u)).ok()?;
                (r < mat.rows()).then(|| mat.get(r, j))
            }
        }
    }
}

/// Design under the given options. When `info_end` is set and the model
/// uses the output gap, the gap is filtered on GDP only up to `info_end`
/// (unless `opts.full_sample_gap`).
pub fn build_design_with(
    spec: &ModelSpec,
    data: &Dataset,
    opts: &ForecastOptions,
    info_end: Option<Period>,
) -> Result<ModelDesign> {
    spec.validate()?;
    let kind = spec.kind;
    if kind == ModelKind::RandomWalk {
        return Ok(ModelDesign {
            spec: *spec,
            y: data.ds().values().to_vec(),
            x: DesignMatrix::empty(data.len()),
            periods: data.ds().periods().collect(),
            offset: vec![0.0; data.len()],
            intercept: false,
        });
    }
    let shift = opts.fundamentals.shift();
    let gap = match info_end {
        Some(end) if kind.uses(Fundamental::OutputGap) && !opts.full_sample_gap => {
            Some(data.gap_until(end)?)
        }
        _ => None,
    };

    let mut stacked = Vec::new();
    for b in kind.blocks() {
        if let Block::Stacked(f) = b {
            let monthly = data.monthly(f).expect("stacked fundamentals are monthly");
            let mat = stack(monthly, MONTHS_PER_QUARTER, 0)?;
            let start = mat.start().expect("monthly data stacked by quarter");
            stacked.push((f, mat, start));
        }
    }

    let mut columns: Vec<(ColumnTiming, Source)> = Vec::new();
    for b in kind.blocks() {
        match b {
            Block::Quarterly { fundamental, lag } => {
                let series = match (&gap, fundamental) {
                    (Some(g), Fundamental::OutputGap) => g,
                    _ => data.quarterly(fundamental),
                };
                let timing = ColumnTiming {
                    fundamental,
                    quarters_back: lag + shift,
                    month_back: None,
                };
                columns.push((timing, Source::Quarterly(series)));
            }
            Block::Stacked(f) => {
                let (_, mat, start) = stacked.iter().find(|(g, _, _)| *g == f).expect("stacked");
                for j in 0..MONTHS_PER_QUARTER {
                    let timing = ColumnTiming {
                        fundamental: f,
                        quarters_back: shift,
                        month_back: Some(j as u32),
                    };
                    columns.push((timing, Source::Stacked(mat, *start, j)));
                }
            }
        }
    }

    let offset_col = if spec.restrict_money_unity {
        let k = columns
            .iter()
            .position(|(c, _)| c.fundamental == Fundamental::Money)
            .expect("monetary model has a money column");
        Some(columns.remove(k))
    } else {
        None
    };

    let p = columns.len();
    let mut data_x = Vec::new();
    let (mut y, mut periods, mut offset) = (Vec::new(), Vec::new(), Vec::new());
    let mut row = Vec::with_capacity(p);
    'rows: for (t, &ds) in data.ds().periods().zip(data.ds().values()) {
        row.clear();
        for (timing, src) in &columns {
            match src.value(timing, t) {
                Some(v) => row.push(v),
                None => continue 'rows,
            }
        }
        let off = match &offset_col {
            Some((timing, src)) => match src.value(timing, t) {
                Some(v) => v,
                None => continue 'rows,
            },
            None => 0.0,
        };
        data_x.extend_from_slice(&row);
        y.push(ds - off);
        offset.push(off);
        periods.push(t);
    }
    if periods.is_empty() {
        return Err(Error::InsufficientSpan(kind.acronym()));
    }
    let labels = columns.iter().map(|(c, _)| c.label()).collect();
    let x = DesignMatrix::new(periods.len(), p, data_x, labels)?;
    Ok(ModelDesign {
        spec: *spec,
        y,
        x,
        periods,
        offset,
        intercept: spec.has_intercept(),
    })
}

/// A one-step-ahead forecast and the fit that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub origin: Period,
    pub target: Period,
    pub value: f64,
    /// Estimation observations (0 for the random walk).
    pub nobs: usize,
    pub fit: Option<RegressionFit>,
}

/// Forecast of the return of `origin + 1`, estimated recursively on all
/// quarters up to `origin` with default options.
pub fn forecast_one_step(spec: &ModelSpec, data: &Dataset, origin: Period) -> Result<f64> {
    forecast_with(spec, data, origin, None, &ForecastOptions::default()).map(|f| f.value)
}

/// Forecast of the return of `origin + 1`. With `window = Some(w)` only the
/// `w` quarters ending at `origin` are used for estimation.
pub fn forecast_with(
    spec: &ModelSpec,
    data: &Dataset,
    origin: Period,
    window: Option<usize>,
    opts: &ForecastOptions,
) -> Result<Forecast> {
    spec.validate()?;
    let target = origin.succ();
    if origin < data.start() || target > data.end() {
        return Err(Error::InvalidRange(format!(
            "origin {origin} outside {}..{}",
            data.start(),
            data.end().pred()
        )));
    }
    if window == Some(0) {
        return Err(Error::InvalidWindow(0));
    }
    if spec.kind == ModelKind::RandomWalk {
        let value = if opts.rw_in_differences {
            data.ds().get(origin).expect("origin within span")
        } else {
            0.0
        };
        return Ok(Forecast {
            origin,
            target,
            value,
            nobs: 0,
            fit: None,
        });
    }

    let info_end = target.offset(-i64::from(opts.fundamentals.shift()));
    let design = build_design_with(spec, data, opts, Some(info_end))?;
    let first_kept = window.map(|w| origin.offset(-(w as i64)));
    let est: Vec<usize> = (0..design.periods.len())
        .filter(|&k| {
            let t = design.periods[k];
            t <= origin && first_kept.is_none_or(|f| t > f)
        })
        .collect();
    let needed = design.x.cols() + usize::from(design.intercept) + 2;
    if est.len() < needed {
        return Err(Error::InsufficientHistory {
            model: spec.kind.acronym(),
            origin: origin.to_string(),
            got: est.len(),
            needed,
        });
    }
    let range = est[0]..est[est.len() - 1] + 1;
    let x = design.x.select_rows(range.clone());
    let fit = ols_fit(&x, &design.y[range], design.intercept)?;
    let k = design
        .row_of(target)
        .ok_or(Error::InsufficientSpan(spec.kind.acronym()))?;
    let value = predict(&fit, design.x.row(k))? + design.offset[k];
    Ok(Forecast {
        origin,
        target,
        value,
        nobs: est.len(),
        fit: Some(fit),
    })
}
