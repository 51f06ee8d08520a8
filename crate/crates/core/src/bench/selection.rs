//! Threshold-based attribute selection and lagged conditional-independence
//! sweeps on real data.

use rayon::prelude::*;
use serde::Serialize;

use super::analysis::oriented;
use super::{with_thread_cap, CellFailure, SweepRecord, SweepTable};
use crate::data::{DataMatrix, GroupSpec};
use crate::error::{Error, Result};
use crate::measure::MeasureId;
use crate::registry::{check_capabilities, evaluate, MeasureConfig, Roles};
use crate::rng::mix_seed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionRow {
    pub measure: MeasureId,
    /// Oriented dependence between the target and the threshold attribute.
    pub threshold: Option<f64>,
    /// Oriented dependence of every attribute on the target, by column.
    pub scores: Vec<Option<f64>>,
    pub selected: Vec<usize>,
    pub tp: usize,
    pub fp: usize,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionTable {
    pub target: usize,
    pub threshold_col: usize,
    pub recommended: Vec<usize>,
    pub rows: Vec<SelectionRow>,
}

fn check_column(data: &DataMatrix, c: usize, what: &str) -> Result<()> {
    if c >= data.ncols() {
        return Err(Error::Schema(format!(
            "{what} column {c} missing; data has {} columns",
            data.ncols()
        )));
    }
    Ok(())
}

/// For every measure, scores each attribute by its dependence with the
/// target and selects those strictly above the score of `threshold_col`.
/// TP counts selected attributes in `recommended`, FP the rest.
/// Measures that cannot compare two scalars get an explanatory note and
/// an empty selection.
pub fn variable_selection(
    data: &DataMatrix,
    target: usize,
    threshold_col: usize,
    measures: &[MeasureId],
    recommended: &[usize],
    cfg: &MeasureConfig,
) -> Result<SelectionTable> {
    check_column(data, target, "target")?;
    let attributes: Vec<usize> = (0..data.ncols()).filter(|&a| a != target).collect();
    select_with_pairs(
        data.ncols(),
        target,
        &attributes,
        threshold_col,
        measures,
        recommended,
        cfg,
        |a| data.select_columns(&[a, target]),
    )
}

/// Like [`variable_selection`], but the `(attribute, target)` sample for
/// each attribute comes from `pair`, so attributes may be scored on
/// different rows (for example after pairwise deletion of missing values).
/// Only `attributes` are scored; `ncols` sizes the score vectors.
#[allow(clippy::too_many_arguments)]
pub fn select_with_pairs<F>(
    ncols: usize,
    target: usize,
    attributes: &[usize],
    threshold_col: usize,
    measures: &[MeasureId],
    recommended: &[usize],
    cfg: &MeasureConfig,
    pair: F,
) -> Result<SelectionTable>
where
    F: Fn(usize) -> Result<DataMatrix> + Sync,
{
    let in_range = |c: usize, what: &str| {
        if c < ncols {
            Ok(())
        } else {
            Err(Error::Schema(format!(
                "{what} column {c} missing; data has {ncols} columns"
            )))
        }
    };
    in_range(target, "target")?;
    in_range(threshold_col, "threshold")?;
    for &c in recommended.iter().chain(attributes) {
        in_range(c, "attribute")?;
    }
    if threshold_col == target {
        return Err(Error::Schema("threshold column equals the target".into()));
    }
    if !attributes.contains(&threshold_col) {
        return Err(Error::Schema(format!(
            "threshold column {threshold_col} is not among the scored attributes"
        )));
    }
    let samples: Vec<Option<DataMatrix>> = attributes
        .iter()
        .map(|&a| if a == target { None } else { pair(a).ok() })
        .collect();
    let roles = Roles::Joint(GroupSpec::singletons(2));
    let rows = with_thread_cap(|| {
        measures
            .par_iter()
            .map(|&id| {
                if id.is_ci() || check_capabilities(id, &GroupSpec::singletons(2)).is_err() {
                    return SelectionRow {
                        measure: id,
                        threshold: None,
                        scores: vec![None; ncols],
                        selected: vec![],
                        tp: 0,
                        fp: 0,
                        note: Some(format!("{} does not compare two variables", id.name())),
                    };
                }
                let scored: Vec<Option<f64>> = samples
                    .par_iter()
                    .zip(attributes)
                    .map(|(sample, &a)| {
                        let c = cfg.with_seed(mix_seed(cfg.seed, a as u64));
                        let r = evaluate(id, sample.as_ref()?, &roles, &c).ok()?;
                        Some(oriented(id, r.value))
                    })
                    .collect();
                let mut scores = vec![None; ncols];
                for (&a, s) in attributes.iter().zip(&scored) {
                    scores[a] = *s;
                }
                let failed = scored.iter().filter(|s| s.is_none()).count();
                let threshold = scores[threshold_col];
                let selected: Vec<usize> = match threshold {
                    Some(t) => attributes
                        .iter()
                        .copied()
                        .filter(|&a| scores[a].is_some_and(|s| s > t))
                        .collect(),
                    None => vec![],
                };
                let tp = selected.iter().filter(|a| recommended.contains(a)).count();
                let note = match (threshold, failed) {
                    (None, _) => Some("threshold attribute could not be scored".into()),
                    (_, 0) => None,
                    (_, f) => Some(format!("{f} attributes could not be scored")),
                };
                SelectionRow {
                    measure: id,
                    threshold,
                    scores,
                    fp: selected.len() - tp,
                    tp,
                    selected,
                    note,
                }
            })
            .collect()
    });
    Ok(SelectionTable {
        target,
        threshold_col,
        recommended: recommended.to_vec(),
        rows,
    })
}

/// For each lag `l`, evaluates the conditional measures on
/// `X = factor[t]`, `Y = target[t + l]`, `Z = target[t]`. The grid of the
/// returned table is the lag list. Failures are recorded when
/// `allow_partial` is set and returned otherwise.
pub fn lagged_ci_sweep(
    data: &DataMatrix,
    factor_col: usize,
    target_col: usize,
    lags: &[usize],
    measures: &[MeasureId],
    cfg: &MeasureConfig,
    allow_partial: bool,
) -> Result<SweepTable> {
    check_column(data, factor_col, "factor")?;
    check_column(data, target_col, "target")?;
    let n = data.nrows();
    if let Some(&l) = lags.iter().find(|&&l| l == 0 || 2 * l >= n) {
        return Err(Error::ParamRange(format!(
            "lag {l} must be in 1..{}",
            n.div_ceil(2)
        )));
    }
    if let Some(id) = measures.iter().find(|m| !m.is_ci()) {
        return Err(Error::Capability(format!(
            "{} is not a conditional measure",
            id.name()
        )));
    }
    let factor = data.column(factor_col);
    let target = data.column(target_col);
    let roles = Roles::Conditional {
        x: vec![0],
        y: vec![1],
        z: vec![2],
    };
    let per_lag: Vec<Result<Vec<std::result::Result<SweepRecord, CellFailure>>>> =
        with_thread_cap(|| {
            lags.par_iter()
                .enumerate()
                .map(|(cell, &l)| {
                    let m = n - l;
                    let lagged = DataMatrix::from_columns(vec![
                        factor[..m].to_vec(),
                        target[l..].to_vec(),
                        target[..m].to_vec(),
                    ])?;
                    Ok(measures
                        .iter()
                        .map(|&id| {
                            let c = cfg.with_seed(mix_seed(cfg.seed, l as u64));
                            evaluate(id, &lagged, &roles, &c)
                                .map(|r| SweepRecord {
                                    cell,
                                    seed: 0,
                                    measure: id,
                                    value: r.value,
                                    elapsed_ms: r.elapsed.as_secs_f64() * 1e3,
                                })
                                .map_err(|error| CellFailure {
                                    cell,
                                    seed: 0,
                                    measure: id,
                                    error,
                                })
                        })
                        .collect())
                })
                .collect()
        });
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for lag in per_lag {
        for item in lag? {
            match item {
                Ok(r) => records.push(r),
                Err(f) if allow_partial => failures.push(f),
                Err(f) => return Err(f.error),
            }
        }
    }
    Ok(SweepTable {
        experiment_id: 0,
        grid: lags.iter().map(|&l| l as f64).collect(),
        measures: measures.to_vec(),
        seeds: 1,
        records,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_above_threshold_selects_nothing() {
        // Target equals the threshold column, so nothing can beat it.
        let t: Vec<f64> = (0..60).map(|i| ((i * 17) % 61) as f64).collect();
        let noise: Vec<f64> = (0..60).map(|i| ((i * 29) % 59) as f64).collect();
        let d = DataMatrix::from_columns(vec![t.clone(), t, noise]).unwrap();
        let tab = variable_selection(
            &d,
            0,
            1,
            &[MeasureId::Ktau],
            &[2],
            &MeasureConfig::default(),
        )
        .unwrap();
        assert_eq!((tab.rows[0].tp, tab.rows[0].fp), (0, 0));
    }

    #[test]
    fn missing_columns_are_schema_errors() {
        let d = DataMatrix::from_columns(vec![vec![1.0, 2.0, 3.0]; 2]).unwrap();
        let r = variable_selection(&d, 0, 5, &[MeasureId::Ktau], &[], &MeasureConfig::default());
        assert!(matches!(r, Err(Error::Schema(_))));
    }

    #[test]
    fn jdcov_row_is_annotated() {
        let d = DataMatrix::from_columns(vec![
            (0..30).map(f64::from).collect(),
            (0..30).map(|i| ((i * 7) % 31) as f64).collect(),
            (0..30).map(|i| ((i * 11) % 31) as f64).collect(),
        ])
        .unwrap();
        let tab = variable_selection(
            &d,
            0,
            1,
            &[MeasureId::JdCov],
            &[],
            &MeasureConfig::default(),
        )
        .unwrap();
        assert!(tab.rows[0].note.is_some());
        assert!(tab.rows[0].selected.is_empty());
    }

    #[test]
    fn lags_must_be_short() {
        let d = DataMatrix::from_columns(vec![(0..20).map(f64::from).collect(); 2]).unwrap();
        let r = lagged_ci_sweep(
            &d,
            0,
            1,
            &[10],
            &[MeasureId::PCor],
            &MeasureConfig::default(),
            false,
        );
        assert!(matches!(r, Err(Error::ParamRange(_))));
    }
}
