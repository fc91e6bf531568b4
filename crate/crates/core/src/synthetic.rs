//! Seeded synthetic data: model-consistent datasets with known
//! coefficients, plain white-noise / random-walk series, and a raw nine-file
//! panel shaped like the Canada/US source data.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::ingest::{write_csv, Manifest, Role, SeriesSource, Span};
use crate::models::{
    build_design_with, Dataset, DatasetConfig, DatasetParts, ForecastOptions, ModelSpec,
};
use crate::timeseries::{Period, TimeSeries};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normals(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn cumulative(start: f64, steps: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut level = start;
    steps
        .into_iter()
        .map(|s| {
            level += s;
            level
        })
        .collect()
}

/// `n` iid standard normal draws starting at `start`.
pub fn white_noise(seed: u64, start: Period, n: usize) -> TimeSeries {
    TimeSeries::new(start, normals(&mut rng(seed), n)).expect("non-empty finite")
}

/// Driftless Gaussian random walk of length `n` starting at zero.
pub fn random_walk(seed: u64, start: Period, n: usize) -> TimeSeries {
    TimeSeries::new(start, cumulative(0.0, normals(&mut rng(seed), n))).expect("non-empty finite")
}

/// Fundamentals for `n_quarters` quarters from `first`, plus one leading
/// quarter consumed by differencing: iid standard normal monthly
/// differentials and inflation rates, random-walk log GDP, flat exchange
/// rate.
pub fn random_parts(rng: &mut impl Rng, first: Period, n_quarters: usize) -> DatasetParts {
    let q0 = first.pred();
    let m0 = q0.first_month();
    let (nq, nm) = (n_quarters + 1, 3 * (n_quarters + 1));
    let series = |start, v| TimeSeries::new(start, v).expect("finite");
    DatasetParts {
        fx_log: series(q0, vec![0.0; nq]),
        i_diff: series(m0, normals(rng, nm)),
        p_diff: series(m0, normals(rng, nm)),
        m_diff: series(m0, normals(rng, nm)),
        inflation_domestic: series(m0, normals(rng, nm)),
        inflation_foreign: series(m0, normals(rng, nm)),
        gdp_domestic: series(q0, cumulative(0.0, normals(rng, nq))),
        gdp_foreign: series(q0, cumulative(0.0, normals(rng, nq))),
    }
}

/// A data-generating process following one model's regression.
#[derive(Debug, Clone, PartialEq)]
pub struct Dgp {
    pub spec: ModelSpec,
    pub alpha: f64,
    /// One per column of the model's (restricted) design.
    pub slopes: Vec<f64>,
    pub noise_sd: f64,
}

impl Dgp {
    /// Noiseless process with fixed, distinct coefficients.
    pub fn noiseless(spec: ModelSpec) -> Result<Self> {
        const SLOPES: [f64; 10] = [0.5, -0.3, 0.2, 0.4, -0.15, 0.25, -0.1, 0.35, 0.05, -0.45];
        let n = probe_columns(&spec)?;
        Ok(Self {
            spec,
            alpha: if spec.has_intercept() { 0.01 } else { 0.0 },
            slopes: SLOPES.iter().copied().cycle().take(n).collect(),
            noise_sd: 0.0,
        })
    }

    /// Simulate a dataset of `n_quarters` returns from `first`. Regressors
    /// are built with the full-sample output gap, so the same gap is needed
    /// to recover the coefficients exactly.
    pub fn simulate(&self, seed: u64, first: Period, n_quarters: usize) -> Result<Dataset> {
        let mut rng = rng(seed);
        let mut parts = random_parts(&mut rng, first, n_quarters);
        let base = Dataset::from_parts(parts.clone(), DatasetConfig::default())?;
        let opts = ForecastOptions {
            full_sample_gap: true,
            ..Default::default()
        };
        let design = build_design_with(&self.spec, &base, &opts, None)?;
        if design.x.cols() != self.slopes.len() {
            return Err(Error::DimensionMismatch {
                expected: design.x.cols(),
                got: self.slopes.len(),
            });
        }
        let shocks = normals(&mut rng, base.len());
        let returns = base.ds().periods().zip(&shocks).map(|(t, e)| {
            let noise = self.noise_sd * e;
            match design.row_of(t) {
                Some(r) => {
                    let fitted: f64 = design
                        .x
                        .row(r)
                        .iter()
                        .zip(&self.slopes)
                        .map(|(x, b)| x * b)
                        .sum();
                    design.offset[r] + self.alpha + fitted + noise
                }
                None => noise,
            }
        });
        let mut level = vec![0.0];
        level.extend(cumulative(0.0, returns));
        parts.fx_log = TimeSeries::new(base.start().pred(), level)?;
        Dataset::from_parts(parts, DatasetConfig::default())
    }
}

fn probe_columns(spec: &ModelSpec) -> Result<usize> {
    let mut rng = rng(0);
    let first = Period::quarter(2000, 1).expect("valid");
    let base = Dataset::from_parts(random_parts(&mut rng, first, 8), DatasetConfig::default())?;
    Ok(
        build_design_with(spec, &base, &ForecastOptions::default(), None)?
            .x
            .cols(),
    )
}

/// Raw source levels, one series per role, as they would be downloaded.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPanel {
    pub series: BTreeMap<Role, TimeSeries>,
}

/// Monthly AR(1) around `mean` with persistence `phi`.
fn ar1(rng: &mut impl Rng, n: usize, mean: f64, phi: f64, sd: f64) -> Vec<f64> {
    let mut x = mean;
    (0..n)
        .map(|_| {
            let e: f64 = StandardNormal.sample(rng);
            x = mean + phi * (x - mean) + sd * e;
            x
        })
        .collect()
}

/// Canada/US-like panel covering January 1985 to March 2019: CAD per USD,
/// percent short rates, CPI and M3 indices (monthly) and real GDP
/// (quarterly).
pub fn realistic_panel(seed: u64) -> RawPanel {
    let mut rng = rng(seed);
    let m0 = Period::month(1985, 1).expect("valid");
    let q0 = Period::quarter(1985, 1).expect("valid");
    let nm = m0.distance_to(&Period::month(2019, 3).expect("valid")) as usize + 1;
    let nq = nm / 3;

    let rate_us = ar1(&mut rng, nm, 4.5, 0.98, 0.25);
    let spread = ar1(&mut rng, nm, 0.6, 0.9, 0.2);
    let rate_ca: Vec<f64> = rate_us.iter().zip(&spread).map(|(a, b)| a + b).collect();
    let mut log_walk = |start: f64, drift: f64, sd: f64, n: usize| -> Vec<f64> {
        let steps: Vec<f64> = normals(&mut rng, n)
            .iter()
            .map(|e| drift + sd * e)
            .collect();
        cumulative(start, steps)
    };
    let cpi_us = log_walk(100f64.ln(), 0.0022, 0.002, nm);
    let cpi_ca = log_walk(95f64.ln(), 0.0020, 0.0025, nm);
    let m3_us = log_walk(100f64.ln(), 0.0045, 0.004, nm);
    let m3_ca = log_walk(100f64.ln(), 0.0055, 0.005, nm);
    let gdp_us = log_walk(8000f64.ln(), 0.0065, 0.006, nq);
    let gdp_ca = log_walk(900f64.ln(), 0.0060, 0.007, nq);
    // CAD per USD: a noisy walk leaning on the interest spread.
    let shocks = normals(&mut rng, nm);
    let fx_steps = (0..nm).map(|k| {
        let d_spread = if k == 0 {
            0.0
        } else {
            spread[k] - spread[k - 1]
        };
        -0.01 * d_spread + 0.022 * shocks[k]
    });
    let fx = cumulative(1.33f64.ln(), fx_steps);

    let exp = |v: Vec<f64>| v.into_iter().map(f64::exp).collect::<Vec<f64>>();
    let ts = |start, v| TimeSeries::new(start, v).expect("finite");
    let mut series = BTreeMap::new();
    series.insert(Role::ExchangeRate, ts(m0, exp(fx)));
    series.insert(Role::InterestDomestic, ts(m0, rate_ca));
    series.insert(Role::InterestForeign, ts(m0, rate_us));
    series.insert(Role::CpiDomestic, ts(m0, exp(cpi_ca)));
    series.insert(Role::CpiForeign, ts(m0, exp(cpi_us)));
    series.insert(Role::MoneyDomestic, ts(m0, exp(m3_ca)));
    series.insert(Role::MoneyForeign, ts(m0, exp(m3_us)));
    series.insert(Role::GdpDomestic, ts(q0, exp(gdp_ca)));
    series.insert(Role::GdpForeign, ts(q0, exp(gdp_us)));
    RawPanel { series }
}

impl RawPanel {
    /// Write one CSV per role plus `manifest.json` into `dir`; returns the
    /// manifest path.
    pub fn write(&self, dir: &Path, metadata: BTreeMap<String, String>) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let mut sources = Vec::new();
        for (role, s) in &self.series {
            let file = format!("{}.csv", snake_case(&role.to_string()));
            write_csv(s, &dir.join(&file), "DATE", "VALUE")?;
            sources.push(SeriesSource {
                path: PathBuf::from(file),
                column_date: "DATE".into(),
                column_value: "VALUE".into(),
                frequency: role.frequency(),
                transform: role.conventional_transform(),
                role: *role,
            });
        }
        let manifest = Manifest {
            sources,
            span: Span::default(),
            config: DatasetConfig::default(),
            metadata,
        };
        let path = dir.join("manifest.json");
        manifest.save(&path)?;
        Ok(path)
    }
}

fn snake_case(s: &str) -> String {
    let mut out = String::new();
    for (k, c) in s.chars().enumerate() {
        if c.is_ascii_uppercase() && k > 0 {
            out.push('_');
        }
        out.push(c.to_ascii_lowercase());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::assemble_dataset;
    use crate::models::{Fundamental, ModelKind};
    use crate::regression::ols_fit;

    #[test]
    fn same_seed_same_data() {
        let a = realistic_panel(5);
        let b = realistic_panel(5);
        assert_eq!(a, b);
        assert_ne!(a, realistic_panel(6));
        let fx = &a.series[&Role::ExchangeRate];
        assert_eq!(fx.len(), 411);
        assert_eq!(a.series[&Role::GdpDomestic].len(), 137);
        for (role, s) in &a.series {
            assert_eq!(s.freq(), role.frequency());
        }
    }

    #[test]
    fn panel_round_trips_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = realistic_panel(1)
            .write(dir.path(), BTreeMap::new())
            .unwrap();
        let manifest = Manifest::load(&path).unwrap();
        let d = assemble_dataset(&manifest).unwrap();
        assert_eq!(d.start(), Period::quarter(1985, 2).unwrap());
        assert_eq!(d.end(), Period::quarter(2019, 1).unwrap());
        assert_eq!(d.len(), 136);
        let sd = (d.ds().values().iter().map(|v| v * v).sum::<f64>() / d.len() as f64).sqrt();
        assert!((0.02..0.07).contains(&sd), "{sd}");
    }

    #[test]
    fn noiseless_dgp_recovers_coefficients() {
        let first = Period::quarter(1985, 2).unwrap();
        for kind in ModelKind::ALL.into_iter().skip(1) {
            let dgp = Dgp::noiseless(ModelSpec::new(kind)).unwrap();
            let data = dgp.simulate(9, first, 60).unwrap();
            let opts = ForecastOptions {
                full_sample_gap: true,
                ..Default::default()
            };
            let d = build_design_with(&dgp.spec, &data, &opts, None).unwrap();
            let fit = ols_fit(&d.x, &d.y, d.intercept).unwrap();
            assert!((fit.alpha() - dgp.alpha).abs() < 1e-6, "{kind}");
            for (b, e) in fit.slopes().iter().zip(&dgp.slopes) {
                assert!((b - e).abs() < 1e-6, "{kind}: {b} vs {e}");
            }
        }
    }

    #[test]
    fn restricted_dgp() {
        let spec = ModelSpec::new(ModelKind::Mm2).with_money_unity().unwrap();
        let dgp = Dgp::noiseless(spec).unwrap();
        assert_eq!(dgp.slopes.len(), 3);
        let data = dgp
            .simulate(4, Period::quarter(1990, 1).unwrap(), 40)
            .unwrap();
        let d = build_design_with(&spec, &data, &ForecastOptions::default(), None).unwrap();
        let m = data.quarterly(Fundamental::Money);
        assert_eq!(d.offset[0], m.values()[0]);
    }

    #[test]
    fn snake_case_file_names() {
        assert_eq!(snake_case("GdpDomestic"), "gdp_domestic");
        assert_eq!(snake_case("ExchangeRate"), "exchange_rate");
    }
}
