//! End-to-end acceptance checks. Each test prints one `criterion N: PASS` or
//! `FAIL` line straight to stdout, so the lines survive output capture.
//!
//! Set `DEPMETER_DATA` to a directory holding `heart/` (the four raw
//! files), `winequality-white.csv` and `PRSA_data_2010.1.1-2014.12.31.csv`
//! to run the real-data pipelines on the real files; synthetic fixtures
//! stand in for any that are missing.

mod common;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Instant;

use common::oracles::*;
use common::{from_cols, normal, shuffle_rows};
use depmeter::bench::{
    air_lagged, cross_measure_correlation, heart_selection, monotonicity, run_sweep,
    table2_expectation, wine_normalized, ExperimentSpec, SweepTable,
};
use depmeter::ci::{ce_ci_measure, cmi_ksg_measure, pcor};
use depmeter::datasets::fixtures::{
    write_beijing_fixture, write_heart_fixture, write_wine_fixture,
};
use depmeter::datasets::{load_beijing_window, load_heart, load_wine_white, WineData};
use depmeter::indep::{
    ball_cov, bergsma_dassios, cvm_product_copula, dcor, hhg, mdd_mdm, HhgParams, HhgScore,
    BD_TUPLES,
};
use depmeter::knn::EntropyParams;
use depmeter::registry::{evaluate, MeasureConfig, Roles};
use depmeter::rng::{mix_seed, rng};
use depmeter::samplers::{paper_experiment_cells, sample, CopulaFamily, GeneratorKind};
use depmeter::{make_pseudo_obs, DataMatrix, GroupSpec, MeasureId, TiePolicy};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

const ROOT_SEED: u64 = 20240;

fn report(criterion: u32, title: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {criterion}: {verdict} {title}: {detail}\n");
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Experiment-1 samples at the given grid cell, one per seed.
fn experiment1(cell: usize, seeds: u64) -> Vec<DataMatrix> {
    let (_, spec) = paper_experiment_cells(1).unwrap().remove(cell);
    (0..seeds)
        .map(|s| sample(&spec.clone().with_seed(mix_seed(ROOT_SEED, s))).unwrap())
        .collect()
}

const RHO_CELLS: [(f64, usize); 4] = [(0.0, 0), (0.3, 3), (0.6, 6), (0.9, 9)];

#[test]
fn criterion_1_gaussian_copula_entropy() {
    let start = Instant::now();
    let cfg = MeasureConfig::default();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (rho, cell) in RHO_CELLS {
        let truth = 0.5 * (1.0 - rho * rho).ln();
        let errors: Vec<f64> = experiment1(cell, 10)
            .iter()
            .map(|d| {
                let v = evaluate(MeasureId::CE, d, &Roles::all_singletons(d), &cfg)
                    .unwrap()
                    .value;
                (v - truth).abs()
            })
            .collect();
        let e = mean(&errors);
        worst = worst.max(e);
        parts.push(format!("rho {rho}: {e:.3}"));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 0.10 && secs < 30.0;
    report(
        1,
        "copula entropy vs Gaussian closed form",
        pass,
        &format!(
            "mean abs error {} (limit 0.10), {secs:.1}s",
            parts.join(", ")
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_2_kendall_tau_arcsine_law() {
    let cfg = MeasureConfig::default();
    let mut worst = 0.0f64;
    for (rho, cell) in RHO_CELLS {
        let truth = 2.0 / std::f64::consts::PI * f64::asin(rho);
        let values: Vec<f64> = experiment1(cell, 10)
            .iter()
            .map(|d| {
                evaluate(MeasureId::Ktau, d, &Roles::all_singletons(d), &cfg)
                    .unwrap()
                    .value
            })
            .collect();
        worst = worst.max((mean(&values) - truth).abs());
    }
    let pass = worst <= 0.05;
    report(
        2,
        "Kendall tau vs (2/pi) asin(rho)",
        pass,
        &format!("largest deviation {worst:.4} (limit 0.05)"),
    );
    assert!(pass);
}

/// Trivariate normal `(X, Y, Z)` with `rho_xy = 0.7`, `rho_xz = 0`,
/// `rho_yz = 0.6`.
fn trivariate(seed: u64) -> DataMatrix {
    normal(
        vec![1.0, 0.7, 0.0, 0.7, 1.0, 0.6, 0.0, 0.6, 1.0],
        3,
        800,
        seed,
    )
}

/// Gaussian chain `X -> Z -> Y` with correlation 0.7 on each link, columns
/// ordered `(X, Y, Z)`.
fn markov_chain(seed: u64) -> DataMatrix {
    normal(
        vec![1.0, 0.49, 0.7, 0.49, 1.0, 0.7, 0.7, 0.7, 1.0],
        3,
        800,
        seed,
    )
}

#[test]
fn criterion_3_partial_correlation() {
    let values: Vec<f64> = (0..10)
        .map(|s| {
            pcor(&trivariate(mix_seed(ROOT_SEED, s)), &[0], &[1], &[2])
                .unwrap()
                .value
        })
        .collect();
    let m = mean(&values);
    let pass = (m - 0.875).abs() <= 0.05;
    report(
        3,
        "partial correlation vs 0.875",
        pass,
        &format!("10-seed mean {m:.4}"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_conditional_mutual_information() {
    let p = EntropyParams::default();
    let run = |data: &dyn Fn(u64) -> DataMatrix| -> [f64; 2] {
        let mut ksg = Vec::new();
        let mut ce = Vec::new();
        for s in 0..10 {
            let d = data(mix_seed(ROOT_SEED, s));
            ksg.push(cmi_ksg_measure(&d, &[0], &[1], &[2], p, s).unwrap().value);
            ce.push(ce_ci_measure(&d, &[0], &[1], &[2], p, s).unwrap().value);
        }
        [mean(&ksg), mean(&ce)]
    };
    let dep = run(&trivariate);
    let null = run(&markov_chain);
    let pass =
        dep.iter().all(|v| (v - 0.7246).abs() <= 0.10) && null.iter().all(|v| v.abs() <= 0.08);
    report(
        4,
        "conditional mutual information oracles",
        pass,
        &format!(
            "cmi_ksg {:.4} / ce_ci {:.4} vs 0.7246; chain {:.4} / {:.4} vs 0",
            dep[0], dep[1], null[0], null[1]
        ),
    );
    assert!(pass);
}

/// Full sweeps of experiments 1-8, shared by the Table 2 and clustering
/// checks.
fn sweeps() -> &'static (Vec<SweepTable>, f64) {
    static SWEEPS: OnceLock<(Vec<SweepTable>, f64)> = OnceLock::new();
    SWEEPS.get_or_init(|| {
        let start = Instant::now();
        let tables = (1..=8)
            .map(|e| run_sweep(&ExperimentSpec::new(e).unwrap()).unwrap())
            .collect();
        (tables, start.elapsed().as_secs_f64())
    })
}

/// Cells whose outcome is known not to match the expectation; each has a
/// written explanation in the project notes.
const KNOWN_MISMATCHES: [(MeasureId, u32); 1] = [(MeasureId::Qad, 8)];

#[test]
fn criterion_5_monotonicity_table() {
    let (tables, secs) = sweeps();
    let mut checked = 0;
    let mut unexpected = Vec::new();
    let mut known = Vec::new();
    let mut lowest: Option<(f64, MeasureId, u32)> = None;
    for table in tables {
        let e = table.experiment_id;
        let rep = monotonicity(table, 0.9).unwrap();
        for row in &rep.rows {
            let Some(expected) = table2_expectation(row.measure, e) else {
                continue;
            };
            checked += 1;
            if expected {
                if let Some(s) = row.spearman {
                    if lowest.is_none_or(|(l, _, _)| s < l) {
                        lowest = Some((s, row.measure, e));
                    }
                }
            }
            if row.pass != expected {
                let cell = format!(
                    "{} exp {e} (spearman {:?}, expected {})",
                    row.measure.name(),
                    row.spearman,
                    if expected { "pass" } else { "fail" }
                );
                if KNOWN_MISMATCHES.contains(&(row.measure, e)) {
                    known.push(cell);
                } else {
                    unexpected.push(cell);
                }
            }
        }
    }
    let (low, low_m, low_e) = lowest.unwrap();
    let pass = unexpected.is_empty() && known.is_empty() && *secs < 45.0 * 60.0;
    let mut detail = format!(
        "{checked} cells, lowest expected-pass spearman {low:.3} ({} exp {low_e}), {:.1} min",
        low_m.name(),
        secs / 60.0
    );
    if !known.is_empty() {
        detail.push_str(&format!("; known mismatch: {}", known.join(", ")));
    }
    if !unexpected.is_empty() {
        detail.push_str(&format!("; mismatched: {}", unexpected.join(", ")));
    }
    report(5, "monotonicity table reproduction", pass, &detail);
    assert!(unexpected.is_empty(), "{detail}");
    assert!(*secs < 45.0 * 60.0);
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1.0)
}

/// Random small bivariate sample with a random linear-plus-nonlinear link.
fn small_instance(inst: u64) -> DataMatrix {
    let mut r = rng(mix_seed(77, inst));
    let n = r.random_range(8..=40usize);
    let a = r.random_range(-1.0..1.0f64);
    let b = r.random_range(-1.0..1.0f64);
    let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut r)).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|&v| {
            let e: f64 = StandardNormal.sample(&mut r);
            a * v + b * v * v + e
        })
        .collect();
    from_cols(vec![x, y])
}

#[test]
fn criterion_6_brute_force_equivalence() {
    const INSTANCES: u64 = 50;
    let pair = GroupSpec::singletons(2);
    let mut failures = Vec::new();
    let mut bd_worst = 0.0f64;
    let mut cvm_worst = 0.0f64;
    for inst in 0..INSTANCES {
        let d = small_instance(inst);
        let (x, y) = (d.column(0), d.column(1));
        let n = d.nrows();

        let got = dcor(&d, &pair).unwrap().param_f64("dcov_sq").unwrap();
        if !close(got, dcov_four_loop(x, y)) {
            failures.push(format!("dcov {inst}"));
        }
        let r2 = dcov_four_loop(x, y) / (dcov_four_loop(x, x) * dcov_four_loop(y, y)).sqrt();
        if !close(dcor(&d, &pair).unwrap().value, r2.max(0.0).sqrt()) {
            failures.push(format!("dcor {inst}"));
        }
        if !close(
            ball_cov(&d, &pair).unwrap().value,
            ball_cov_triple_loop(x, y),
        ) {
            failures.push(format!("ball {inst}"));
        }
        let mdd = mdd_mdm(&d, &[1], &[0])
            .unwrap()
            .param_f64("mdd_sq")
            .unwrap();
        if !close(mdd, mdd_pairwise(x, y)) {
            failures.push(format!("mdd {inst}"));
        }
        for (score, lr) in [(HhgScore::ChiSq, false), (HhgScore::LikelihoodRatio, true)] {
            let fast = hhg(&d, &pair, HhgParams::new(score)).unwrap().value;
            if !close(fast, hhg_tables(x, y, lr)) {
                failures.push(format!("hhg {score:?} {inst}"));
            }
        }

        // Pseudo-observations sit on cell edges of a grid that is a
        // multiple of 2n, so the midpoint rule sees the step function
        // exactly.
        let u = make_pseudo_obs(&d, TiePolicy::AverageRank).unwrap();
        let g = 2 * n * (400 / (2 * n)).max(1);
        let grid = cvm_grid(&[u.column(0).to_vec(), u.column(1).to_vec()], g);
        let e = (cvm_product_copula(&d, &pair).unwrap().value - grid).abs();
        cvm_worst = cvm_worst.max(e);
        if e > 1e-3 {
            failures.push(format!("cvm {inst}: {e}"));
        }

        let inc = bergsma_dassios(&d, BD_TUPLES, inst).unwrap().value;
        let e = (inc - tau_star_all_tuples(x, y)).abs();
        bd_worst = bd_worst.max(e);
        if e > 0.005 {
            failures.push(format!("tau* {inst}: {e}"));
        }
    }
    let pass = failures.is_empty();
    report(
        6,
        "brute-force equivalence",
        pass,
        &format!(
            "{INSTANCES} instances (n 8..=40): dcor, ball, mdd, hhg exact to 1e-10; \
             cvm max error {cvm_worst:.1e}; tau* max error {bd_worst:.4}; failures {failures:?}"
        ),
    );
    assert!(pass, "{failures:?}");
}

const RANK_BASED: [MeasureId; 9] = [
    MeasureId::CE,
    MeasureId::Ktau,
    MeasureId::Hoeff,
    MeasureId::BDtau,
    MeasureId::Bet,
    MeasureId::Qad,
    MeasureId::Subcop,
    MeasureId::Codec,
    MeasureId::Mixed,
];

/// Tolerance under a strictly increasing transform. The copula entropy
/// jitter is drawn on the data scale, so it moves slightly.
fn transform_tolerance(id: MeasureId) -> f64 {
    match id {
        MeasureId::CE | MeasureId::CeCi => 0.01,
        _ => 0.0,
    }
}

/// Tolerance under a row permutation. Incomplete U-statistic tuples are
/// drawn by row position, so tau* is only invariant to its sampling error,
/// and FCIT fold assignment follows row positions.
fn permutation_tolerance(id: MeasureId) -> Option<f64> {
    match id {
        MeasureId::BDtau => Some(0.005),
        MeasureId::Fcit => None,
        _ => Some(1e-9),
    }
}

fn mid_instance(inst: u64, d: usize) -> DataMatrix {
    let mut r = rng(mix_seed(91, inst));
    let n = r.random_range(80..=160usize);
    let base: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut r)).collect();
    let cols = (0..d)
        .map(|_| {
            let w = r.random_range(0.0..1.0f64);
            base.iter()
                .map(|&b| {
                    let e: f64 = StandardNormal.sample(&mut r);
                    w * b + e
                })
                .collect()
        })
        .collect();
    from_cols(cols)
}

fn roles_for(id: MeasureId, data: &DataMatrix) -> Roles {
    if id.is_ci() {
        Roles::Conditional {
            x: vec![0],
            y: vec![1],
            z: vec![2],
        }
    } else if id.capabilities().bivariate {
        Roles::Joint(GroupSpec::singletons(2))
    } else {
        Roles::all_singletons(data)
    }
}

#[test]
fn criterion_7_invariances() {
    const INSTANCES: u64 = 100;
    let cfg = MeasureConfig::default().with_seed(5);
    let on_ranks = MeasureConfig {
        hhg_on_ranks: true,
        ..cfg
    };
    let mut failures: Vec<String> = Vec::new();
    let mut worst_ce = 0.0f64;
    let value = |id: MeasureId, d: &DataMatrix, c: &MeasureConfig| {
        evaluate(id, d, &roles_for(id, d), c).unwrap().value
    };
    let ci_rank_based = [MeasureId::CodecCi, MeasureId::CeCi];
    for inst in 0..INSTANCES {
        let d = mid_instance(inst, 3);
        let t = from_cols(vec![
            d.column(0).iter().map(|v| v.exp()).collect(),
            d.column(1).iter().map(|v| v.powi(3) + v).collect(),
            d.column(2).iter().map(|v| 2.0 * v - 1.0).collect(),
        ]);
        let monotone = RANK_BASED
            .iter()
            .chain(&ci_rank_based)
            .map(|&id| (id, cfg))
            .chain([
                (MeasureId::HhgChisq, on_ranks),
                (MeasureId::HhgLr, on_ranks),
            ]);
        for (id, c) in monotone {
            let (a, b) = (value(id, &d, &c), value(id, &t, &c));
            let e = (a - b).abs();
            if matches!(id, MeasureId::CE | MeasureId::CeCi) {
                worst_ce = worst_ce.max(e);
            }
            if e > transform_tolerance(id) {
                failures.push(format!("transform {} #{inst}: {a} vs {b}", id.name()));
            }
        }

        let s = shuffle_rows(&d, mix_seed(inst, 3));
        let all = MeasureId::independence_measures().chain(MeasureId::ci_measures());
        for id in all {
            let Some(tol) = permutation_tolerance(id) else {
                continue;
            };
            let (a, b) = (value(id, &d, &cfg), value(id, &s, &cfg));
            if (a - b).abs() > tol * a.abs().max(1.0) {
                failures.push(format!("permutation {} #{inst}: {a} vs {b}", id.name()));
            }
        }
    }
    let pass = failures.is_empty();
    report(
        7,
        "monotone-transform and row-permutation invariance",
        pass,
        &format!(
            "{INSTANCES} instances; largest copula-entropy shift {worst_ce:.4}; {} failures {:?}",
            failures.len(),
            failures.iter().take(5).collect::<Vec<_>>()
        ),
    );
    assert!(pass, "{failures:?}");
}

/// A copula family, its parameter grid and its closed-form Kendall tau.
type TauGrid = (CopulaFamily, Vec<f64>, fn(f64) -> f64);

#[test]
fn criterion_8_archimedean_tau() {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let grids: [TauGrid; 2] = [
        (
            CopulaFamily::Clayton,
            vec![
                0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0,
            ],
            clayton_tau,
        ),
        (
            CopulaFamily::Gumbel,
            vec![
                1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0,
            ],
            gumbel_tau,
        ),
    ];
    for (family, alphas, tau_of) in grids {
        for (i, &alpha) in alphas.iter().enumerate() {
            let d = sample(&depmeter::samplers::GeneratorSpec {
                kind: GeneratorKind::ArchCopula {
                    family,
                    alpha,
                    dim: 2,
                    marginals: vec![depmeter::samplers::MarginalSpec::Uniform01; 2],
                },
                n: 2000,
                seed: mix_seed(ROOT_SEED, i as u64),
            })
            .unwrap();
            let e = (kendall_pairs(d.column(0), d.column(1)) - tau_of(alpha)).abs();
            worst = worst.max(e);
            if e > 0.04 {
                failures.push(format!("{family:?} {alpha}: {e:.3}"));
            }
        }
    }
    let pass = failures.is_empty();
    report(
        8,
        "Clayton and Gumbel Kendall tau at n = 2000",
        pass,
        &format!("largest deviation {worst:.4} (limit 0.04) {failures:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_9_measure_clusters() {
    let (tables, _) = sweeps();
    let rep = cross_measure_correlation(&tables[0], 5).unwrap();
    let a = rep.same_cluster(&[MeasureId::CE, MeasureId::DHsic, MeasureId::Hoeff]);
    let b = rep.same_cluster(&[MeasureId::Ball, MeasureId::HhgChisq]);
    let groups: Vec<String> = (0..rep.k)
        .map(|c| {
            let names: Vec<&str> = rep
                .measures
                .iter()
                .zip(&rep.assignment)
                .filter(|(_, &g)| g == c)
                .map(|(m, _)| m.name())
                .collect();
            format!("{{{}}}", names.join(", "))
        })
        .collect();
    // A soft check: the outcome is reported but does not fail the build.
    report(
        9,
        "experiment-1 clusters at k = 5",
        a && b,
        &format!(
            "CE/dHSIC/Hoeff together: {a}; Ball/HHG together: {b}; clusters {}",
            groups.join(" ")
        ),
    );
}

fn data_dir() -> Option<PathBuf> {
    std::env::var_os("DEPMETER_DATA").map(PathBuf::from)
}

/// The real file under `DEPMETER_DATA` when present, else a fixture written
/// by `write` into `scratch`.
fn source(
    real: &str,
    scratch: &Path,
    write: impl FnOnce(&Path) -> depmeter::Result<()>,
) -> (PathBuf, bool) {
    if let Some(p) = data_dir().map(|d| d.join(real)).filter(|p| p.exists()) {
        return (p, true);
    }
    let p = scratch.join(real);
    write(&p).unwrap();
    (p, false)
}

#[test]
fn criterion_10_real_data_pipelines() {
    let scratch = tempfile::tempdir().unwrap();
    let cfg = MeasureConfig::default();
    let indep: Vec<MeasureId> = MeasureId::independence_measures().collect();
    let label = |real: bool| if real { "data" } else { "fixture" };

    let (heart_dir, heart_real) = source("heart", scratch.path(), |p| {
        std::fs::create_dir(p)?;
        write_heart_fixture(p, 7)
    });
    let heart = heart_selection(&load_heart(&heart_dir).unwrap(), &indep, &cfg).unwrap();
    let heart_ok = heart.table.rows.len() == indep.len();
    let ce_tp = heart
        .table
        .rows
        .iter()
        .find(|r| r.measure == MeasureId::CE)
        .unwrap()
        .tp;

    let (wine_path, wine_real) = source("winequality-white.csv", scratch.path(), |p| {
        write_wine_fixture(p, 400, 3)
    });
    let wine = wine_normalized(&load_wine_white(&wine_path).unwrap(), &indep, &cfg).unwrap();
    let wine_ok = wine.rows.iter().all(|r| match &r.normalized {
        Some(v) => v[WineData::fixed_acidity()] == 0.0 && v[WineData::alcohol()] == 1.0,
        None => r.measure == MeasureId::JdCov,
    });

    let (air_path, air_real) = source("PRSA_data_2010.1.1-2014.12.31.csv", scratch.path(), |p| {
        write_beijing_fixture(p, 11)
    });
    let ci: Vec<MeasureId> = MeasureId::ci_measures().collect();
    let start = Instant::now();
    let air = air_lagged(&load_beijing_window(&air_path).unwrap(), &ci, &cfg, false).unwrap();
    let air_secs = start.elapsed().as_secs_f64();
    let air_ok = ci
        .iter()
        .all(|&m| air.records.iter().filter(|r| r.measure == m).count() == 24)
        && air_secs < 20.0 * 60.0;

    let pass = heart_ok && wine_ok && air_ok;
    report(
        10,
        "real-data pipelines",
        pass,
        &format!(
            "heart ({}) {} rows, CE TP {ce_tp} (soft reference >= 9: {}); \
             wine ({}) pinned 0/1: {wine_ok}; air ({}) 24 lags x {} measures in {air_secs:.0}s",
            label(heart_real),
            heart.table.rows.len(),
            ce_tp >= 9,
            label(wine_real),
            label(air_real),
            ci.len()
        ),
    );
    assert!(pass);
}
