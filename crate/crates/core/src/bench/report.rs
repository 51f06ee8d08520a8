//! CSV writers for harness outputs. Every file starts with a
//! `#schema=<kind>/<version>` line followed by a header row.

use std::io::Write;

use super::{
    table2_expectation, ClusterReport, MonotonicityReport, SelectionTable, SweepTable, WineReport,
};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn writer<W: Write>(mut w: W, kind: &str, header: &[&str]) -> Result<csv::Writer<W>> {
    writeln!(w, "#schema={kind}/{SCHEMA_VERSION}").map_err(io)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(io)?;
    Ok(out)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per estimate: `experiment,cell_param,seed,measure,value`.
pub fn write_sweep_csv<W: Write>(w: W, table: &SweepTable) -> Result<()> {
    let mut out = writer(
        w,
        "sweep",
        &["experiment", "cell_param", "seed", "measure", "value"],
    )?;
    for r in &table.records {
        out.write_record([
            table.experiment_id.to_string(),
            table.grid[r.cell].to_string(),
            r.seed.to_string(),
            r.measure.name().to_string(),
            r.value.to_string(),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Estimates that raised an error: `experiment,cell_param,seed,measure,error`.
pub fn write_failures_csv<W: Write>(w: W, table: &SweepTable) -> Result<()> {
    let mut out = writer(
        w,
        "failures",
        &["experiment", "cell_param", "seed", "measure", "error"],
    )?;
    for f in &table.failures {
        out.write_record([
            table.experiment_id.to_string(),
            table.grid[f.cell].to_string(),
            f.seed.to_string(),
            f.measure.name().to_string(),
            f.error.to_string(),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Wall-clock time per estimate; kept apart from the estimates so those
/// files stay byte-identical across reruns.
pub fn write_timings_csv<W: Write>(w: W, table: &SweepTable) -> Result<()> {
    let mut out = writer(
        w,
        "timings",
        &["experiment", "cell_param", "seed", "measure", "elapsed_ms"],
    )?;
    for r in &table.records {
        out.write_record([
            table.experiment_id.to_string(),
            table.grid[r.cell].to_string(),
            r.seed.to_string(),
            r.measure.name().to_string(),
            format!("{:.3}", r.elapsed_ms),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn write_monotonicity_csv<W: Write>(w: W, report: &MonotonicityReport) -> Result<()> {
    let mut out = writer(
        w,
        "monotonicity",
        &[
            "experiment",
            "measure",
            "spearman",
            "threshold",
            "pass",
            "expected",
            "reason",
        ],
    )?;
    for r in &report.rows {
        let expected = match table2_expectation(r.measure, report.experiment_id) {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "",
        };
        out.write_record([
            report.experiment_id.to_string(),
            r.measure.name().to_string(),
            opt(r.spearman),
            report.threshold.to_string(),
            r.pass.to_string(),
            expected.to_string(),
            r.reason.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn write_correlation_csv<W: Write>(w: W, report: &ClusterReport) -> Result<()> {
    let mut header = vec!["measure"];
    header.extend(report.measures.iter().map(|m| m.name()));
    let mut out = writer(w, "correlation", &header)?;
    for (m, row) in report.measures.iter().zip(&report.correlation) {
        let mut rec = vec![m.name().to_string()];
        rec.extend(row.iter().map(|c| c.to_string()));
        out.write_record(&rec).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Merge list (leaves are measure indices in id order) followed by the
/// cluster label of each measure at the report's cut.
pub fn write_dendrogram_csv<W: Write>(w: W, report: &ClusterReport) -> Result<()> {
    let mut out = writer(
        w,
        "dendrogram",
        &[
            "kind", "step", "left", "right", "distance", "size", "linkage",
        ],
    )?;
    for (s, m) in report.merges.iter().enumerate() {
        out.write_record([
            "merge".to_string(),
            s.to_string(),
            m.left.to_string(),
            m.right.to_string(),
            m.distance.to_string(),
            m.size.to_string(),
            report.linkage.to_string(),
        ])
        .map_err(io)?;
    }
    for (i, (id, label)) in report.measures.iter().zip(&report.assignment).enumerate() {
        out.write_record([
            format!("cluster_k{}", report.k),
            i.to_string(),
            id.name().to_string(),
            label.to_string(),
            String::new(),
            String::new(),
            report.linkage.to_string(),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Table of true and false positives per measure; `names` labels columns.
pub fn write_selection_csv<W: Write>(w: W, table: &SelectionTable, names: &[String]) -> Result<()> {
    let mut out = writer(
        w,
        "selection",
        &["measure", "TP", "FP", "threshold", "selected", "note"],
    )?;
    let name = |c: usize| names.get(c).cloned().unwrap_or_else(|| c.to_string());
    for r in &table.rows {
        let selected: Vec<String> = r.selected.iter().map(|&c| name(c)).collect();
        out.write_record([
            r.measure.name().to_string(),
            r.tp.to_string(),
            r.fp.to_string(),
            opt(r.threshold),
            selected.join(";"),
            r.note.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(io)
}
/// One row per measure with the normalized score of every attribute
/// (empty when the row could not be normalized).
pub fn write_wine_csv<W: Write>(w: W, report: &WineReport) -> Result<()> {
    let mut header = vec!["measure"];
    header.extend(report.attributes.iter().map(String::as_str));
    header.push("note");
    let mut out = writer(w, "wine", &header)?;
    for r in &report.rows {
        let mut rec = vec![r.measure.name().to_string()];
        match &r.normalized {
            Some(v) => rec.extend(v.iter().map(|x| x.to_string())),
            None => rec.extend(std::iter::repeat_n(String::new(), report.attributes.len())),
        }
        rec.push(r.note.clone().unwrap_or_default());
        out.write_record(&rec).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// One row per lag and measure: `lag,measure,value`. Failed cells are
/// omitted.
pub fn write_lag_csv<W: Write>(w: W, table: &SweepTable) -> Result<()> {
    let mut out = writer(w, "lagged", &["lag", "measure", "value"])?;
    for &m in &table.measures {
        for r in table.records.iter().filter(|r| r.measure == m) {
            out.write_record([
                table.grid[r.cell].to_string(),
                m.name().to_string(),
                r.value.to_string(),
            ])
            .map_err(io)?;
        }
    }
    out.flush().map_err(io)
}
