//! Reading source CSV files, assembling a [`Dataset`] from them and freezing
//! it into a snapshot.

mod snapshot;

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::inflation;
use crate::models::{Dataset, DatasetConfig, DatasetParts};
use crate::timeseries::{
    aggregate_to_quarterly, differential, log_transform, Frequency, Period, TimeSeries,
};

pub use snapshot::{load_snapshot, snapshot, SNAPSHOT_FORMAT, SNAPSHOT_VERSION};

/// What a source series is in the dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    ExchangeRate,
    InterestDomestic,
    InterestForeign,
    CpiDomestic,
    CpiForeign,
    MoneyDomestic,
    MoneyForeign,
    GdpDomestic,
    GdpForeign,
}

impl Role {
    pub const ALL: [Role; 9] = [
        Role::ExchangeRate,
        Role::InterestDomestic,
        Role::InterestForeign,
        Role::CpiDomestic,
        Role::CpiForeign,
        Role::MoneyDomestic,
        Role::MoneyForeign,
        Role::GdpDomestic,
        Role::GdpForeign,
    ];

    /// GDP is quarterly; everything else monthly.
    pub fn frequency(self) -> Frequency {
        match self {
            Role::GdpDomestic | Role::GdpForeign => Frequency::Quarterly,
            _ => Frequency::Monthly,
        }
    }

    /// Transform the dataset expects the source to be declared with.
    pub fn conventional_transform(self) -> Transform {
        match self {
            Role::InterestDomestic | Role::InterestForeign => Transform::None,
            _ => Transform::Log,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transform {
    #[default]
    None,
    /// Natural logarithm; values must be positive.
    Log,
    /// Divide by 100.
    PercentToDecimal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSource {
    pub path: PathBuf,
    pub column_date: String,
    pub column_value: String,
    pub frequency: Frequency,
    #[serde(default)]
    pub transform: Transform,
    pub role: Role,
}

fn is_missing(raw: &str) -> bool {
    matches!(raw.trim(), "" | ".")
}

/// Read one source file.
///
/// Rows are numbered as lines of the file, the header being row 1. Dates
/// must be strictly increasing and contiguous at the declared frequency.
pub fn read_csv(source: &SeriesSource) -> Result<TimeSeries> {
    let path = source.path.display().to_string();
    let parse_err = |row: usize, message: String| Error::Parse {
        path: path.clone(),
        row,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(File::open(&source.path)?);
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(1, format!("no column named {name:?}")))
    };
    let (date_col, value_col) = (column(&source.column_date)?, column(&source.column_value)?);

    let mut start = None;
    let mut last: Option<Period> = None;
    let mut values = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let row = k + 2;
        let record = record.map_err(|e| parse_err(row, e.to_string()))?;
        let date = record.get(date_col).unwrap_or("");
        let period =
            Period::parse_as(date, source.frequency).map_err(|e| parse_err(row, e.to_string()))?;
        let raw = record.get(value_col).unwrap_or("");
        if is_missing(raw) {
            return Err(Error::MissingValue { path, row });
        }
        let value: f64 = raw
            .parse()
            .map_err(|_| parse_err(row, format!("{raw:?} is not a number")))?;
        if !value.is_finite() {
            return Err(Error::MissingValue { path, row });
        }
        if let Some(prev) = last {
            if period <= prev {
                return Err(Error::NonMonotonicDates { path, row });
            }
            if period != prev.succ() {
                return Err(parse_err(
                    row,
                    format!("gap in dates: expected {}, found {period}", prev.succ()),
                ));
            }
        } else {
            start = Some(period);
        }
        last = Some(period);
        values.push(value);
    }
    let start = start.ok_or_else(|| parse_err(1, "no data rows".into()))?;
    let series = TimeSeries::new(start, values)?;
    match source.transform {
        Transform::None => Ok(series),
        Transform::PercentToDecimal => Ok(series.map_values(|v| v / 100.0)),
        Transform::Log => log_transform(&series).map_err(|e| match e {
            Error::NonPositiveValue { index, value } => {
                parse_err(index + 2, format!("cannot take the log of {value}"))
            }
            other => other,
        }),
    }
}

/// Write `series` as a two-column CSV with ISO dates (first day of the
/// period).
pub fn write_csv(
    series: &TimeSeries,
    path: &Path,
    column_date: &str,
    column_value: &str,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_io)?;
    w.write_record([column_date, column_value])
        .map_err(csv_io)?;
    for (p, v) in series.periods().zip(series.values()) {
        let m = p.first_month();
        let date = format!("{:04}-{:02}-01", m.year(), m.index());
        w.write_record([date, format!("{v:?}")]).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Inclusive quarterly window applied to every source before assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: Period,
    pub end: Period,
}

impl Default for Span {
    fn default() -> Self {
        Self {
            start: Period::quarter(1985, 1).expect("valid"),
            end: Period::quarter(2019, 1).expect("valid"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub sources: Vec<SeriesSource>,
    #[serde(default)]
    pub span: Span,
    #[serde(default)]
    pub config: DatasetConfig,
    /// Free-form audit fields carried into the dataset and its snapshot.
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl Manifest {
    /// Load a manifest, resolving relative source paths against the
    /// manifest's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut manifest: Manifest = serde_json::from_reader(File::open(path)?)
            .map_err(|e| Error::InvalidManifest(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        for s in &mut manifest.sources {
            if s.path.is_relative() {
                s.path = dir.join(&s.path);
            }
        }
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeMap::new();
        for s in &self.sources {
            if seen.insert(s.role, ()).is_some() {
                return Err(Error::InvalidManifest(format!(
                    "role {} listed twice",
                    s.role
                )));
            }
            if s.frequency != s.role.frequency() {
                return Err(Error::InvalidManifest(format!(
                    "role {} must be {:?}, declared {:?}",
                    s.role,
                    s.role.frequency(),
                    s.frequency
                )));
            }
        }
        let Span { start, end } = self.span;
        if start.freq() != Frequency::Quarterly || end.freq() != Frequency::Quarterly || start > end
        {
            return Err(Error::InvalidManifest(format!(
                "invalid span {start}..{end}"
            )));
        }
        if !(self.config.hp_lambda > 0.0) {
            return Err(Error::InvalidManifest("hp_lambda must be positive".into()));
        }
        Ok(())
    }

    pub fn source(&self, role: Role) -> Option<&SeriesSource> {
        self.sources.iter().find(|s| s.role == role)
    }
}

/// Build the dataset a manifest describes.
///
/// Every source is clipped to the span, then differentials (domestic minus
/// foreign), inflation, quarterly returns and output gaps are derived and
/// everything is aligned. Returns and inflation need one earlier
/// observation, so the dataset starts one quarter after the first quarter
/// all sources share.
pub fn assemble_dataset(manifest: &Manifest) -> Result<Dataset> {
    manifest.validate()?;
    if let Some(role) = Role::ALL
        .into_iter()
        .find(|r| manifest.source(*r).is_none())
    {
        return Err(Error::MissingRole(role.to_string()));
    }
    let Span { start, end } = manifest.span;
    let mut raw = BTreeMap::new();
    for role in Role::ALL {
        let s = read_csv(manifest.source(role).expect("checked"))?;
        let clipped = match role.frequency() {
            Frequency::Quarterly => s.clip(Some(start), Some(end)),
            Frequency::Monthly => s.clip(Some(start.first_month()), Some(end.last_month())),
        }?;
        raw.insert(role, clipped);
    }
    let config = manifest.config;
    let parts = DatasetParts {
        fx_log: aggregate_to_quarterly(&raw[&Role::ExchangeRate], config.fx_aggregation)?,
        i_diff: differential(&raw[&Role::InterestDomestic], &raw[&Role::InterestForeign])?,
        p_diff: differential(&raw[&Role::CpiDomestic], &raw[&Role::CpiForeign])?,
        m_diff: differential(&raw[&Role::MoneyDomestic], &raw[&Role::MoneyForeign])?,
        inflation_domestic: inflation(&raw[&Role::CpiDomestic])?,
        inflation_foreign: inflation(&raw[&Role::CpiForeign])?,
        gdp_domestic: raw[&Role::GdpDomestic].clone(),
        gdp_foreign: raw[&Role::GdpForeign].clone(),
    };
    let mut metadata = manifest.metadata.clone();
    for s in &manifest.sources {
        metadata.insert(
            format!("source.{}", s.role),
            format!(
                "{} [{}; {:?}]",
                s.path.display(),
                s.column_value,
                s.transform
            ),
        );
    }
    metadata.insert("span".into(), format!("{start}..{end}"));
    metadata.insert(
        "generator".into(),
        format!("fxmidas {}", env!("CARGO_PKG_VERSION")),
    );
    Ok(Dataset::from_parts(parts, config)?.with_metadata(metadata))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        File::create(&p)
            .unwrap()
            .write_all(body.as_bytes())
            .unwrap();
        p
    }

    fn source(
        path: PathBuf,
        frequency: Frequency,
        transform: Transform,
        role: Role,
    ) -> SeriesSource {
        SeriesSource {
            path,
            column_date: "DATE".into(),
            column_value: "VALUE".into(),
            frequency,
            transform,
            role,
        }
    }

    #[test]
    fn reads_three_monthly_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "a.csv",
            "DATE,VALUE\n2000-01-01,1.5\n2000-02-01,2\n2000-03-01,3\n",
        );
        let s = read_csv(&source(
            p,
            Frequency::Monthly,
            Transform::None,
            Role::CpiDomestic,
        ))
        .unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.start(), Period::month(2000, 1).unwrap());
        assert_eq!(s.values(), &[1.5, 2.0, 3.0]);
    }

    #[test]
    fn sentinel_is_missing_value_with_row() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "a.csv",
            "DATE,VALUE\n2000-01-01,1\n2000-02-01,.\n",
        );
        let err = read_csv(&source(
            p.clone(),
            Frequency::Monthly,
            Transform::None,
            Role::CpiDomestic,
        ))
        .unwrap_err();
        assert!(matches!(err, Error::MissingValue { row: 3, .. }), "{err}");
        let p = write(dir.path(), "b.csv", "DATE,VALUE\n2000-01-01,\n");
        let err = read_csv(&source(
            p,
            Frequency::Monthly,
            Transform::None,
            Role::CpiDomestic,
        ))
        .unwrap_err();
        assert!(matches!(err, Error::MissingValue { row: 2, .. }));
    }

    #[test]
    fn percent_to_decimal() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "a.csv", "DATE,VALUE\n2000-01,5.0\n");
        let s = read_csv(&source(
            p,
            Frequency::Monthly,
            Transform::PercentToDecimal,
            Role::InterestDomestic,
        ))
        .unwrap();
        assert_eq!(s.values(), &[0.05]);
    }

    #[test]
    fn parse_and_order_errors() {
        let dir = tempfile::tempdir().unwrap();
        let cases = [
            ("DATE,VALUE\n2000-01-01,1\n2000-01-01,2\n", "dup"),
            ("DATE,VALUE\n2000-02-01,1\n2000-01-01,2\n", "back"),
            ("DATE,VALUE\n2000-01-01,abc\n", "num"),
            ("DATE,VALUE\nyesterday,1\n", "date"),
            ("DATE,VALUE\n2000-01-01,1\n2000-03-01,2\n", "gap"),
            ("DAY,VALUE\n2000-01-01,1\n", "col"),
            ("DATE,VALUE\n", "empty"),
        ];
        for (body, name) in cases {
            let p = write(dir.path(), name, body);
            let err = read_csv(&source(
                p,
                Frequency::Monthly,
                Transform::None,
                Role::CpiDomestic,
            ))
            .unwrap_err();
            match name {
                "dup" | "back" => assert!(
                    matches!(err, Error::NonMonotonicDates { row: 3, .. }),
                    "{err}"
                ),
                "num" | "date" => assert!(matches!(err, Error::Parse { row: 2, .. }), "{err}"),
                "gap" => assert!(matches!(err, Error::Parse { row: 3, .. }), "{err}"),
                _ => assert!(matches!(err, Error::Parse { row: 1, .. }), "{err}"),
            }
        }
    }

    #[test]
    fn quarterly_dates_in_either_style() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "a.csv",
            "DATE,VALUE\n1990-04-01,10\n1990-Q3,11\n1990Q4,12\n",
        );
        let s = read_csv(&source(
            p,
            Frequency::Quarterly,
            Transform::Log,
            Role::GdpDomestic,
        ))
        .unwrap();
        assert_eq!(s.start(), Period::quarter(1990, 2).unwrap());
        assert_eq!(s.values()[0], 10f64.ln());
    }

    #[test]
    fn log_of_non_positive_names_row() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "a.csv", "DATE,VALUE\n2000-01,1\n2000-02,0\n");
        let err = read_csv(&source(
            p,
            Frequency::Monthly,
            Transform::Log,
            Role::CpiDomestic,
        ))
        .unwrap_err();
        assert!(matches!(err, Error::Parse { row: 3, .. }), "{err}");
    }

    #[test]
    fn write_then_read_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let s = TimeSeries::new(
            Period::quarter(1999, 3).unwrap(),
            vec![0.1, 1.0 / 3.0, -2e-17],
        )
        .unwrap();
        let p = dir.path().join("q.csv");
        write_csv(&s, &p, "DATE", "VALUE").unwrap();
        let back = read_csv(&source(
            p,
            Frequency::Quarterly,
            Transform::None,
            Role::GdpForeign,
        ))
        .unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn manifest_validation() {
        let mut m = Manifest {
            sources: vec![
                source(
                    "a".into(),
                    Frequency::Monthly,
                    Transform::Log,
                    Role::CpiDomestic,
                ),
                source(
                    "b".into(),
                    Frequency::Monthly,
                    Transform::Log,
                    Role::CpiDomestic,
                ),
            ],
            span: Span::default(),
            config: DatasetConfig::default(),
            metadata: BTreeMap::new(),
        };
        assert!(matches!(m.validate(), Err(Error::InvalidManifest(_))));
        m.sources[1] = source(
            "b".into(),
            Frequency::Monthly,
            Transform::Log,
            Role::GdpDomestic,
        );
        assert!(matches!(m.validate(), Err(Error::InvalidManifest(_))));
        m.sources[1].frequency = Frequency::Quarterly;
        assert!(m.validate().is_ok());
        assert!(matches!(assemble_dataset(&m), Err(Error::MissingRole(r)) if r == "ExchangeRate"));
    }
}
