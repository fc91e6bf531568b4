//! Result tables and their text, CSV and JSON renderings.

use std::fmt::Write as _;

use fxmidas::evaluation::{Scheme, TestResult};
use fxmidas::models::ModelKind;
use fxmidas::timeseries::Period;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// Aligned columns for reading.
    #[default]
    Text,
    /// Comma-separated, 15 significant digits.
    Csv,
    /// Full-precision JSON.
    Json,
}

/// CSV cell with 15 significant digits.
fn num(x: f64) -> String {
    format!("{x:.14e}")
}

fn to_json(value: &impl Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::core("json", e.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityRow {
    pub variable: String,
    pub adf: TestResult,
    pub kpss: TestResult,
    /// `None` when no order up to the maximum passes both tests.
    pub integration_order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityTable {
    pub start: Period,
    pub end: Period,
    pub rows: Vec<StationarityRow>,
}

impl StationarityTable {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => Ok(self.csv()),
            Format::Text => Ok(self.text()),
        }
    }

    fn order_label(order: Option<usize>) -> String {
        order.map_or_else(|| "none".into(), |d| format!("I({d})"))
    }

    fn text(&self) -> String {
        let mut out = format!("Unit root tests, {}..{}\n", self.start, self.end);
        let width = self
            .rows
            .iter()
            .map(|r| r.variable.len())
            .max()
            .unwrap_or(8)
            .max(8);
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>12}  {:>17}",
            "", "ADF", "KPSS", "Integration order"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>12}  {:>12}  {:>17}",
                r.variable,
                format!("{:.4}{}", r.adf.statistic, r.adf.stars()),
                format!("{:.4}{}", r.kpss.statistic, r.kpss.stars()),
                Self::order_label(r.integration_order),
            );
        }
        out.push_str("*** significance at 1%, ** at 5% and * at 10%\n");
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from(
            "variable,adf_stat,adf_p,adf_lags,adf_stars,kpss_stat,kpss_p,kpss_bandwidth,kpss_stars,integration_order\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.variable,
                num(r.adf.statistic),
                num(r.adf.p_value),
                r.adf.meta.lags,
                r.adf.stars(),
                num(r.kpss.statistic),
                num(r.kpss.p_value),
                r.kpss.meta.lags,
                r.kpss.stars(),
                r.integration_order
                    .map_or_else(|| "NA".into(), |d| d.to_string()),
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacktestRow {
    pub model: ModelKind,
    pub msfe: f64,
    /// Absent for the benchmark itself.
    pub dm: Option<TestResult>,
    pub cw: Option<TestResult>,
    pub msfe_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacktestTable {
    pub scheme: Scheme,
    pub train_end: Period,
    pub test_end: Period,
    pub forecasts: usize,
    pub rows: Vec<BacktestRow>,
}

impl BacktestTable {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => Ok(self.csv()),
            Format::Text => Ok(self.text()),
        }
    }

    fn title(&self) -> String {
        let scheme = match self.scheme {
            Scheme::Recursive => "recursive approach".to_string(),
            Scheme::Rolling(w) => format!("rolling window approach ({w} quarters)"),
        };
        format!(
            "Out-of-sample analysis: {scheme}, origins {}..{} ({} one-step forecasts)",
            self.train_end,
            self.test_end.pred(),
            self.forecasts
        )
    }

    fn text(&self) -> String {
        let mut out = self.title();
        out.push('\n');
        let header = ["", "MSFE", "DM", "DM p", "CW", "CW p"];
        let mut lines: Vec<[String; 6]> = vec![header.map(String::from)];
        for r in &self.rows {
            let name = match r.model {
                ModelKind::RandomWalk => "Random Walk".to_string(),
                k => k.acronym().to_string(),
            };
            let line = match (&r.dm, &r.cw) {
                (Some(dm), Some(cw)) => [
                    name,
                    format!("{:.6}", r.msfe),
                    format!("{:.4}{}", dm.statistic, dm.stars()),
                    format!("{:.3e}", dm.p_value),
                    format!("{:.4}", cw.statistic),
                    format!("{:.3e}{}", cw.p_value, cw.stars()),
                ],
                _ => [
                    name,
                    format!("{:.6}", r.msfe),
                    "-".into(),
                    "-".into(),
                    "-".into(),
                    "-".into(),
                ],
            };
            lines.push(line);
        }
        let widths: Vec<usize> = (0..6)
            .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        for l in &lines {
            let mut row = format!("{:<w$}", l[0], w = widths[0]);
            for c in 1..6 {
                let _ = write!(row, "  {:>w$}", l[c], w = widths[c]);
            }
            out.push_str(row.trim_end());
            out.push('\n');
        }
        out.push_str("*** significance at 1%, ** at 5% and * at 10%\n");
        out
    }

    fn csv(&self) -> String {
        let mut out =
            String::from("model,msfe,dm_stat,dm_p,dm_stars,cw_stat,cw_p,cw_stars,msfe_ratio\n");
        for r in &self.rows {
            let _ = write!(out, "{},{}", r.model.acronym(), num(r.msfe));
            match (&r.dm, &r.cw, r.msfe_ratio) {
                (Some(dm), Some(cw), Some(ratio)) => {
                    let _ = writeln!(
                        out,
                        ",{},{},{},{},{},{},{}",
                        num(dm.statistic),
                        num(dm.p_value),
                        dm.stars(),
                        num(cw.statistic),
                        num(cw.p_value),
                        cw.stars(),
                        num(ratio)
                    );
                }
                _ => out.push_str(",-,-,-,-,-,-,-\n"),
            }
        }
        out
    }
}
