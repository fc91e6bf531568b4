//! Seeded Monte Carlo checks of the evaluation tests.

use fxmidas::evaluation::{
    adf_test, backtest, clark_west, compare_to_benchmark, AdfDeterministic, Scheme,
    SignificanceLevel,
};
use fxmidas::models::{ModelKind, ModelSpec};
use fxmidas::synthetic::{random_walk, Dgp};
use fxmidas::timeseries::{diff, Period};
use rayon::prelude::*;

fn q(y: i32, n: u32) -> Period {
    Period::quarter(y, n).unwrap()
}

#[test]
fn adf_rejects_on_differenced_random_walks() {
    for n in [200, 400] {
        let hits: usize = (0..400u64)
            .into_par_iter()
            .map(|seed| {
                let x = random_walk(9_000 + seed, q(1900, 1), n);
                let t = adf_test(&diff(&x, 1).unwrap(), AdfDeterministic::Constant, None).unwrap();
                usize::from(t.rejects(SignificanceLevel::Five))
            })
            .sum();
        assert!(hits as f64 / 400.0 >= 0.95, "n={n}: {hits}/400");
    }
}

#[test]
fn adf_size_on_random_walks() {
    let rejections: usize = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let x = random_walk(31_000 + seed, q(1900, 1), 300);
            let t = adf_test(&x, AdfDeterministic::Constant, None).unwrap();
            usize::from(t.rejects(SignificanceLevel::Five))
        })
        .sum();
    let rate = rejections as f64 / 1000.0;
    assert!((0.02..=0.09).contains(&rate), "{rate}");
}

#[test]
fn clark_west_detects_a_true_model() {
    let dgp = Dgp {
        spec: ModelSpec::new(ModelKind::Uirp),
        alpha: 0.0,
        slopes: vec![1.0],
        noise_sd: 0.3,
    };
    for seed in 0..5 {
        let data = dgp.simulate(seed, q(1985, 2), 136).unwrap();
        let (a, b) = (q(1994, 4), q(2019, 1));
        let rw = backtest(
            &ModelSpec::new(ModelKind::RandomWalk),
            &data,
            Scheme::Recursive,
            a,
            b,
        )
        .unwrap();
        let uirp = backtest(
            &ModelSpec::new(ModelKind::Uirp),
            &data,
            Scheme::Recursive,
            a,
            b,
        )
        .unwrap();
        let c = compare_to_benchmark(&rw, &uirp).unwrap();
        assert!(c.cw.p_value < 0.01, "seed {seed}: {}", c.cw.p_value);
        assert!(c.dm.statistic > 0.0 && c.msfe_ratio < 1.0);
        let direct = clark_west(&rw.errors, &uirp.errors, &rw.forecasts, &uirp.forecasts).unwrap();
        assert_eq!(direct, c.cw);
    }
}
