use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use depmeter::bench::{
    air_lagged, cross_measure_correlation, default_measures, heart_selection, monotonicity,
    run_sweep, table2_expectation, wine_normalized, write_correlation_csv, write_dendrogram_csv,
    write_failures_csv, write_lag_csv, write_monotonicity_csv, write_selection_csv,
    write_sweep_csv, write_timings_csv, write_wine_csv, ExperimentSpec, SweepTable,
};
use depmeter::datasets::{load_beijing_window, load_heart, load_wine_white};
use depmeter::registry::{evaluate, Roles};
use depmeter::samplers::{paper_experiment_cells, sample as draw};
use depmeter::{DataMatrix, Error, GroupSpec, MeasureId, Result};
use serde_json::json;

use crate::config::{echo, RunConfig};
use crate::input::{columns, read_matrix};
use crate::{BenchArgs, Common, Dataset, Family, MeasureArgs, RealArgs, SampleArgs};

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(common.config.as_deref())?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if !common.measures.is_empty() {
        cfg.measures = common.measures.clone();
    }
    Ok(cfg)
}

fn measure_roles(a: &MeasureArgs, data: &DataMatrix, id: MeasureId) -> Result<Roles> {
    let pick = |spec: &Option<String>| -> Result<Vec<usize>> {
        spec.as_deref().map_or(Ok(Vec::new()), |s| columns(s, data))
    };
    let (x, y, z) = (pick(&a.x)?, pick(&a.y)?, pick(&a.z)?);
    if id.is_ci() {
        let x = if x.is_empty() { vec![0] } else { x };
        let y = if y.is_empty() { vec![1] } else { y };
        return Ok(Roles::Conditional { x, y, z });
    }
    if !z.is_empty() {
        return Err(Error::Capability(format!(
            "{} takes no conditioning columns",
            id.name()
        )));
    }
    match (x.is_empty(), y.is_empty()) {
        (true, true) => Ok(Roles::all_singletons(data)),
        (false, false) => Ok(Roles::Joint(GroupSpec::pair(x, y)?)),
        _ => Err(Error::Capability(
            "give both --x and --y, or neither".into(),
        )),
    }
}

pub fn measure(a: MeasureArgs) -> Result<()> {
    let mut cfg = RunConfig::load(a.config.as_deref())?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let id: MeasureId = a.measure.parse()?;
    let data = read_matrix(&a.data)?;
    let roles = measure_roles(&a, &data, id)?;
    let r = evaluate(id, &data, &roles, &cfg.measure_config())?;
    let line = json!({
        "measure": id.name(),
        "value": r.value,
        "params": r.params,
        "elapsed_ms": r.elapsed.as_secs_f64() * 1e3,
    });
    println!("{line}");
    Ok(())
}

fn write_failures(dir: &Path, table: &SweepTable) -> Result<()> {
    if table.failures.is_empty() {
        return Ok(());
    }
    eprintln!(
        "warning: {} estimates failed; see failures.csv",
        table.failures.len()
    );
    write_failures_csv(create(&dir.join("failures.csv"))?, table)
}

pub fn bench(a: BenchArgs) -> Result<()> {
    let mut cfg = load_config(&a.common)?;
    if let Some(s) = a.seeds {
        cfg.seeds = s;
    }
    if let Some(n) = a.n {
        cfg.n = n;
    }
    cfg.allow_partial |= a.allow_partial;
    let expected = match a.family {
        Family::Indep => 1..=8,
        Family::Ci => 9..=10,
    };
    if !expected.contains(&a.experiment) {
        return Err(Error::ParamRange(format!(
            "experiment {} is not in {}..={} for this family",
            a.experiment,
            expected.start(),
            expected.end()
        )));
    }
    let spec = ExperimentSpec {
        experiment_id: a.experiment,
        measures: cfg.measure_ids(default_measures(a.experiment)?)?,
        seeds: cfg.seeds,
        n: cfg.n,
        root_seed: cfg.seed,
        allow_partial: cfg.allow_partial,
        config: cfg.measure_config(),
    };
    let table = run_sweep(&spec)?;
    let dir = &a.out;
    out_dir(dir)?;
    write_sweep_csv(create(&dir.join("sweep.csv"))?, &table)?;
    write_timings_csv(create(&dir.join("timings.csv"))?, &table)?;
    write_failures(dir, &table)?;
    let report = monotonicity(&table, cfg.threshold)?;
    write_monotonicity_csv(create(&dir.join("monotonicity.csv"))?, &report)?;
    if table.measures.len() >= 2 {
        let k = cfg.clusters.clamp(1, table.measures.len());
        let clusters = cross_measure_correlation(&table, k)?;
        for w in &clusters.warnings {
            eprintln!("warning: {w}");
        }
        write_correlation_csv(create(&dir.join("corr_matrix.csv"))?, &clusters)?;
        write_dendrogram_csv(create(&dir.join("dendrogram.csv"))?, &clusters)?;
    } else {
        eprintln!("note: clustering skipped, it needs at least two measures");
    }
    let family = match a.family {
        Family::Indep => "indep",
        Family::Ci => "ci",
    };
    echo(
        dir,
        &json!({"name": "bench", "family": family, "experiment": a.experiment}),
        &cfg,
    )?;
    let mut stdout = io::stdout().lock();
    for row in &report.rows {
        let expected = match table2_expectation(row.measure, a.experiment) {
            Some(true) => " (expected pass)",
            Some(false) => " (expected fail)",
            None => "",
        };
        let rho = row
            .spearman
            .map_or("n/a".to_string(), |s| format!("{s:.3}"));
        let verdict = if row.pass { "pass" } else { "fail" };
        writeln!(
            stdout,
            "{:10} spearman {rho:>6} {verdict}{expected}",
            row.measure.name()
        )?;
    }
    Ok(())
}

pub fn real(a: RealArgs) -> Result<()> {
    let mut cfg = load_config(&a.common)?;
    cfg.allow_partial |= a.allow_partial;
    let mc = cfg.measure_config();
    let dir = &a.out;
    out_dir(dir)?;
    let mut stdout = io::stdout().lock();
    let name = match a.dataset {
        Dataset::Heart => {
            let heart = load_heart(&a.path)?;
            let measures = cfg.measure_ids(MeasureId::independence_measures().collect())?;
            let report = heart_selection(&heart, &measures, &mc)?;
            write_selection_csv(
                create(&dir.join("selection.csv"))?,
                &report.table,
                &report.names,
            )?;
            write_heart_scores(&dir.join("scores.csv"), &report)?;
            writeln!(
                stdout,
                "{} records; threshold attribute fbs",
                heart.n_records()
            )?;
            for row in &report.table.rows {
                let note = row.note.as_deref().unwrap_or("");
                writeln!(
                    stdout,
                    "{:10} TP {:2} FP {:2} {note}",
                    row.measure.name(),
                    row.tp,
                    row.fp
                )?;
            }
            "heart"
        }
        Dataset::Wine => {
            let wine = load_wine_white(&a.path)?;
            let measures = cfg.measure_ids(MeasureId::independence_measures().collect())?;
            let report = wine_normalized(&wine, &measures, &mc)?;
            write_wine_csv(create(&dir.join("wine_normalized.csv"))?, &report)?;
            writeln!(
                stdout,
                "{} samples; {} measures",
                wine.data.nrows(),
                report.rows.len()
            )?;
            "wine"
        }
        Dataset::Air => {
            let window = load_beijing_window(&a.path)?;
            if let Some(w) = &window.warning {
                eprintln!("warning: {w}");
            }
            let measures = cfg.measure_ids(MeasureId::ci_measures().collect())?;
            let table = air_lagged(&window, &measures, &mc, cfg.allow_partial)?;
            write_lag_csv(create(&dir.join("lagged.csv"))?, &table)?;
            write_failures(dir, &table)?;
            writeln!(
                stdout,
                "{} hourly rows; {} lags x {} measures",
                window.data.nrows(),
                table.grid.len(),
                table.measures.len()
            )?;
            "air"
        }
    };
    echo(
        dir,
        &json!({"name": "real", "dataset": name, "path": a.path.display().to_string()}),
        &cfg,
    )
}

/// Oriented score of every scored heart attribute under every measure,
/// with the rows dropped for missing values.
fn write_heart_scores(path: &Path, report: &depmeter::bench::HeartReport) -> Result<()> {
    let mut out = create(path)?;
    writeln!(
        out,
        "#schema=heart_scores/{}",
        depmeter::bench::SCHEMA_VERSION
    )?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["attribute".to_string(), "dropped_rows".to_string()];
    header.extend(
        report
            .table
            .rows
            .iter()
            .map(|r| r.measure.name().to_string()),
    );
    w.write_record(&header)?;
    for &(a, dropped) in &report.dropped {
        let mut rec = vec![report.names[a].clone(), dropped.to_string()];
        rec.extend(
            report
                .table
                .rows
                .iter()
                .map(|r| r.scores[a].map(|s| s.to_string()).unwrap_or_default()),
        );
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn sample(a: SampleArgs) -> Result<()> {
    let cells = paper_experiment_cells(a.experiment)?;
    let (_, spec) = cells.get(a.cell).ok_or_else(|| {
        Error::ParamRange(format!(
            "experiment {} has cells 0..{}",
            a.experiment,
            cells.len()
        ))
    })?;
    let data = draw(&spec.clone().with_n(a.n).with_seed(a.seed))?;
    let sink: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record((0..data.ncols()).map(|c| format!("x{c}")))?;
    for i in 0..data.nrows() {
        w.write_record(data.row(i).iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
