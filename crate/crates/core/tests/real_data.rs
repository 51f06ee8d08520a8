mod common;

use std::time::Instant;

use depmeter::bench::{
    air_lagged, heart_selection, lagged_ci_sweep, variable_selection, wine_normalized,
    write_lag_csv, write_selection_csv, write_wine_csv,
};
use depmeter::datasets::fixtures::{
    write_beijing_fixture, write_heart_fixture, write_wine_fixture,
};
use depmeter::datasets::{load_beijing_window, load_heart, load_wine_white, WineData};
use depmeter::registry::MeasureConfig;
use depmeter::rng::rng;
use depmeter::{DataMatrix, MeasureId};
use rand_distr::{Distribution, StandardNormal};

fn normal(r: &mut impl rand::Rng) -> f64 {
    let e: f64 = StandardNormal.sample(r);
    e
}

#[test]
fn heart_fixture_table_has_one_row_per_measure() {
    let dir = tempfile::tempdir().unwrap();
    write_heart_fixture(dir.path(), 7).unwrap();
    let heart = load_heart(dir.path()).unwrap();
    let measures = MeasureId::independence_measures().collect::<Vec<_>>();
    let t = Instant::now();
    let report = heart_selection(&heart, &measures, &MeasureConfig::default()).unwrap();
    eprintln!("heart selection: {:.1}s", t.elapsed().as_secs_f64());
    assert_eq!(report.table.rows.len(), 16);
    for row in &report.table.rows {
        eprintln!(
            "{:10} TP={:2} FP={:2} {:?}",
            row.measure.name(),
            row.tp,
            row.fp,
            row.note
        );
        if row.measure == MeasureId::JdCov {
            assert!(row.note.is_some());
        } else {
            assert!(row.note.is_none(), "{}: {:?}", row.measure.name(), row.note);
            // The fixture plants dependence on 12 recommended attributes
            // (all but fbs); the threshold attribute is never selected.
            assert!(!row.selected.contains(&report.table.threshold_col));
            assert!(row.tp >= 9, "{} TP={}", row.measure.name(), row.tp);
        }
    }
    assert!(report.dropped.iter().all(|&(_, d)| d < 100));
    let mut csv = Vec::new();
    write_selection_csv(&mut csv, &report.table, &report.names).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 2 + 16);
}

#[test]
fn wine_rows_pin_fixed_acidity_and_alcohol() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("winequality-white.csv");
    write_wine_fixture(&path, 400, 3).unwrap();
    let wine = load_wine_white(&path).unwrap();
    let report = wine_normalized(
        &wine,
        &MeasureId::independence_measures().collect::<Vec<_>>(),
        &MeasureConfig::default(),
    )
    .unwrap();
    assert_eq!(report.attributes.len(), 11);
    for row in &report.rows {
        if row.measure == MeasureId::JdCov {
            assert!(row.normalized.is_none());
            continue;
        }
        let v = row
            .normalized
            .as_ref()
            .unwrap_or_else(|| panic!("{:?}", row.note));
        assert_eq!(v[WineData::fixed_acidity()], 0.0);
        assert_eq!(v[WineData::alcohol()], 1.0);
    }
    let mut csv = Vec::new();
    write_wine_csv(&mut csv, &report).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 2 + 16);
}

#[test]
fn air_fixture_gives_24_lags_per_measure_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("PRSA_data.csv");
    write_beijing_fixture(&path, 11).unwrap();
    let window = load_beijing_window(&path).unwrap();
    let measures = MeasureId::ci_measures().collect::<Vec<_>>();
    let cfg = MeasureConfig::default();
    let t = Instant::now();
    let table = air_lagged(&window, &measures, &cfg, false).unwrap();
    eprintln!("air sweep: {:.1}s", t.elapsed().as_secs_f64());
    for &m in &measures {
        let n = table.records.iter().filter(|r| r.measure == m).count();
        assert_eq!(n, 24, "{}", m.name());
    }
    let again = air_lagged(&window, &[MeasureId::PCor, MeasureId::CodecCi], &cfg, false).unwrap();
    let pick = |t: &depmeter::bench::SweepTable| -> Vec<u8> {
        let mut sub = t.clone();
        sub.measures = vec![MeasureId::PCor, MeasureId::CodecCi];
        sub.records.retain(|r| sub.measures.contains(&r.measure));
        let mut out = Vec::new();
        write_lag_csv(&mut out, &sub).unwrap();
        out
    };
    assert_eq!(pick(&table), pick(&again));
}

#[test]
fn duplicated_target_is_selected_by_every_pair_measure() {
    let mut r = rng(5);
    let n = 200;
    let target: Vec<f64> = (0..n).map(|_| normal(&mut r)).collect();
    let mut cols = vec![
        target.clone(),
        target.iter().map(|t| 2.0 * t + 1.0).collect(),
    ];
    for _ in 0..3 {
        cols.push((0..n).map(|_| normal(&mut r)).collect());
    }
    let d = DataMatrix::from_columns(cols).unwrap();
    let measures: Vec<MeasureId> = MeasureId::independence_measures()
        .filter(|&m| m != MeasureId::JdCov)
        .collect();
    let tab = variable_selection(&d, 0, 2, &measures, &[1], &MeasureConfig::default()).unwrap();
    for row in &tab.rows {
        assert!(
            row.selected.contains(&1),
            "{} missed the copy",
            row.measure.name()
        );
        assert_eq!(row.tp, 1);
    }
}

#[test]
fn independent_factor_stays_in_the_null_band() {
    let mut r = rng(17);
    let n = 600;
    let mut target = vec![0.0; n];
    for t in 1..n {
        target[t] = 0.7 * target[t - 1] + normal(&mut r);
    }
    let factor: Vec<f64> = (0..n).map(|_| normal(&mut r)).collect();
    let d = DataMatrix::from_columns(vec![factor, target]).unwrap();
    let lags: Vec<usize> = (1..=6).collect();
    let table = lagged_ci_sweep(
        &d,
        0,
        1,
        &lags,
        &[MeasureId::PCor],
        &MeasureConfig::default(),
        false,
    )
    .unwrap();
    // |pcor| under the null is about N(0, 1/n); 4 standard errors.
    let band = 4.0 / (n as f64).sqrt();
    for rec in &table.records {
        assert!(
            rec.value.abs() < band,
            "lag {} pcor {}",
            table.grid[rec.cell],
            rec.value
        );
    }
}

#[test]
fn factor_equal_to_target_is_a_conditioning_degeneracy() {
    let mut r = rng(23);
    let target: Vec<f64> = (0..300).map(|_| normal(&mut r)).collect();
    let d = DataMatrix::from_columns(vec![target.clone(), target]).unwrap();
    // X and Z are the same series, so nothing is left once Z is regressed out.
    let err = lagged_ci_sweep(
        &d,
        0,
        1,
        &[1, 2],
        &[MeasureId::PCor],
        &MeasureConfig::default(),
        false,
    )
    .unwrap_err();
    assert!(err.is_numeric_degeneracy(), "{err}");
}
