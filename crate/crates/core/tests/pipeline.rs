//! Source files -> dataset -> snapshot, on a synthetic Canada/US panel.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use fxmidas::filters::inflation;
use fxmidas::ingest::{assemble_dataset, load_snapshot, read_csv, snapshot, Manifest, Role, Span};
use fxmidas::models::Fundamental;
use fxmidas::synthetic::realistic_panel;
use fxmidas::timeseries::Period;
use fxmidas::Error;

fn q(y: i32, n: u32) -> Period {
    Period::quarter(y, n).unwrap()
}

fn write_panel(dir: &Path, seed: u64) -> PathBuf {
    let mut meta = BTreeMap::new();
    meta.insert("vintage".to_string(), format!("synthetic-{seed}"));
    realistic_panel(seed).write(dir, meta).unwrap()
}

#[test]
fn assemble_snapshot_load_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = Manifest::load(&write_panel(dir.path(), 8)).unwrap();
    let data = assemble_dataset(&manifest).unwrap();
    let path = dir.path().join("snap.json");
    snapshot(&data, &path).unwrap();
    let back = load_snapshot(&path).unwrap();
    assert_eq!(back, data);
    for f in Fundamental::ALL {
        let (a, b) = (back.quarterly(f).values(), data.quarterly(f).values());
        assert!(
            a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()),
            "{f:?}"
        );
    }
    assert_eq!(back.metadata()["vintage"], "synthetic-8");
    assert!(back.metadata().keys().any(|k| k.starts_with("source.")));
}

#[test]
fn ingestion_is_deterministic() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let a = assemble_dataset(&Manifest::load(&write_panel(d1.path(), 3)).unwrap()).unwrap();
    let b = assemble_dataset(&Manifest::load(&write_panel(d2.path(), 3)).unwrap()).unwrap();
    let c = assemble_dataset(&Manifest::load(&write_panel(d1.path(), 3)).unwrap()).unwrap();
    assert_eq!(a.ds(), b.ds());
    assert_eq!(
        a.quarterly(Fundamental::Money),
        b.quarterly(Fundamental::Money)
    );
    assert_eq!(a, c);
}

#[test]
fn identical_domestic_and_foreign_give_zero_differentials() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = Manifest::load(&write_panel(dir.path(), 5)).unwrap();
    let pairs = [
        (Role::InterestDomestic, Role::InterestForeign),
        (Role::CpiDomestic, Role::CpiForeign),
        (Role::MoneyDomestic, Role::MoneyForeign),
        (Role::GdpDomestic, Role::GdpForeign),
    ];
    for (domestic, foreign) in pairs {
        let path = manifest.source(foreign).unwrap().path.clone();
        manifest
            .sources
            .iter_mut()
            .find(|s| s.role == domestic)
            .unwrap()
            .path = path;
    }
    let data = assemble_dataset(&manifest).unwrap();
    for f in Fundamental::ALL {
        assert!(
            data.quarterly(f).values().iter().all(|&v| v == 0.0),
            "{f:?}"
        );
        if let Some(m) = data.monthly(f) {
            assert!(m.values().iter().all(|&v| v == 0.0), "{f:?} monthly");
        }
    }
}

#[test]
fn inflation_is_one_month_shorter_than_cpi() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = Manifest::load(&write_panel(dir.path(), 1)).unwrap();
    let cpi = read_csv(manifest.source(Role::CpiDomestic).unwrap()).unwrap();
    assert_eq!(
        (cpi.start(), cpi.len()),
        (Period::month(1985, 1).unwrap(), 411)
    );
    let pi = inflation(&cpi).unwrap();
    assert_eq!(
        (pi.start(), pi.len()),
        (Period::month(1985, 2).unwrap(), 410)
    );
}

#[test]
fn quarterly_span_is_manifest_intersection_after_differencing() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = Manifest::load(&write_panel(dir.path(), 2)).unwrap();
    let full = assemble_dataset(&manifest).unwrap();
    // 1985Q1..2019Q1 less the quarter consumed by returns and inflation.
    assert_eq!(
        (full.start(), full.end(), full.len()),
        (q(1985, 2), q(2019, 1), 136)
    );
    assert_eq!(full.fx_log().start(), q(1985, 1));

    manifest.span = Span {
        start: q(1990, 3),
        end: q(2005, 4),
    };
    let narrow = assemble_dataset(&manifest).unwrap();
    assert_eq!((narrow.start(), narrow.end()), (q(1990, 4), q(2005, 4)));

    // Foreign GDP ending early bounds the whole dataset.
    let gdp = manifest.source(Role::GdpForeign).unwrap().path.clone();
    let text = std::fs::read_to_string(&gdp).unwrap();
    let kept: Vec<&str> = text
        .lines()
        .take_while(|l| !l.starts_with("2001"))
        .collect();
    std::fs::write(&gdp, kept.join("\n") + "\n").unwrap();
    let short = assemble_dataset(&manifest).unwrap();
    assert_eq!((short.start(), short.end()), (q(1990, 4), q(2000, 4)));
}

#[test]
fn missing_sentinel_reports_file_row() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = Manifest::load(&write_panel(dir.path(), 4)).unwrap();
    let money = manifest.source(Role::MoneyForeign).unwrap().path.clone();
    let mut lines: Vec<String> = std::fs::read_to_string(&money)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    let date = lines[10].split(',').next().unwrap().to_string();
    lines[10] = format!("{date},.");
    std::fs::write(&money, lines.join("\n")).unwrap();
    match assemble_dataset(&manifest) {
        Err(Error::MissingValue { row, .. }) => assert_eq!(row, 11),
        other => panic!("expected MissingValue, got {other:?}"),
    }
}
