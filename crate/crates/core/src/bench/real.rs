//! The three real-data analyses: attribute selection for the heart
//! diagnosis, normalized attribute scores for wine quality, and lagged
//! pressure effects on PM2.5.

use serde::Serialize;

use super::analysis::oriented;
use super::{lagged_ci_sweep, select_with_pairs, SelectionTable, SweepTable};
use crate::data::GroupSpec;
use crate::datasets::{
    normalize_pinned, BeijingWindow, HeartData, WineData, HEART_ATTRIBUTES, WINE_COLUMNS,
};
use crate::error::Result;
use crate::measure::MeasureId;
use crate::registry::{evaluate, MeasureConfig, Roles};
use crate::rng::mix_seed;

/// Lags, in hours, of the pressure analysis.
pub const AIR_LAGS: std::ops::RangeInclusive<usize> = 1..=24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeartReport {
    pub table: SelectionTable,
    /// Attribute names, indexed like the table's columns.
    pub names: Vec<String>,
    /// `(attribute, rows dropped because either value was missing)`.
    pub dropped: Vec<(usize, usize)>,
}

/// Scores every analysis attribute against the diagnosis on the rows
/// where both are present and selects those above `fbs`.
pub fn heart_selection(
    heart: &HeartData,
    measures: &[MeasureId],
    cfg: &MeasureConfig,
) -> Result<HeartReport> {
    let target = HeartData::target();
    let attributes = HeartData::analysis_attributes();
    let dropped = attributes
        .iter()
        .map(|&a| {
            heart
                .complete_rows(&[a, target])
                .map(|(_, d)| (a, d))
                .unwrap_or((a, heart.n_records()))
        })
        .collect();
    let table = select_with_pairs(
        HEART_ATTRIBUTES.len(),
        target,
        &attributes,
        HeartData::threshold_attribute(),
        measures,
        &HeartData::recommended(),
        cfg,
        |a| heart.complete_rows(&[a, target]).map(|(m, _)| m),
    )?;
    Ok(HeartReport {
        table,
        names: HEART_ATTRIBUTES.iter().map(|s| s.to_string()).collect(),
        dropped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WineRow {
    pub measure: MeasureId,
    /// Oriented dependence of each physicochemical attribute on quality.
    pub raw: Vec<Option<f64>>,
    /// `raw` mapped so fixed acidity is 0 and alcohol is 1.
    pub normalized: Option<Vec<f64>>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WineReport {
    pub attributes: Vec<String>,
    pub rows: Vec<WineRow>,
}

/// Dependence of every physicochemical attribute on quality, per measure,
/// rescaled so that fixed acidity scores 0 and alcohol scores 1.
///
/// Runs one estimate at a time: the distance and kernel measures hold
/// several `n x n` matrices, which at the full dataset size would not fit
/// in memory many times over.
pub fn wine_normalized(
    wine: &WineData,
    measures: &[MeasureId],
    cfg: &MeasureConfig,
) -> Result<WineReport> {
    let attributes = WineData::physicochemical();
    let quality = WineData::quality();
    let pair = GroupSpec::singletons(2);
    let roles = Roles::Joint(pair.clone());
    let mut rows = Vec::with_capacity(measures.len());
    for &id in measures {
        if id.is_ci() || crate::registry::check_capabilities(id, &pair).is_err() {
            rows.push(WineRow {
                measure: id,
                raw: vec![None; attributes.len()],
                normalized: None,
                note: Some(format!("{} does not compare two variables", id.name())),
            });
            continue;
        }
        let mut raw = Vec::with_capacity(attributes.len());
        for &a in &attributes {
            let sample = wine.data.select_columns(&[a, quality])?;
            let c = cfg.with_seed(mix_seed(cfg.seed, a as u64));
            raw.push(
                evaluate(id, &sample, &roles, &c)
                    .ok()
                    .map(|r| oriented(id, r.value)),
            );
        }
        let (normalized, note) = match raw.iter().copied().collect::<Option<Vec<f64>>>() {
            None => (
                None,
                Some("some attributes could not be scored".to_string()),
            ),
            Some(v) => match normalize_pinned(&v, WineData::fixed_acidity(), WineData::alcohol()) {
                Ok(n) => (Some(n), None),
                Err(e) => (None, Some(e.to_string())),
            },
        };
        rows.push(WineRow {
            measure: id,
            raw,
            normalized,
            note,
        });
    }
    Ok(WineReport {
        attributes: attributes
            .iter()
            .map(|&a| WINE_COLUMNS[a].to_string())
            .collect(),
        rows,
    })
}

/// Conditional dependence of PM2.5 `l` hours ahead on the current
/// pressure, given the current PM2.5, for `l` in 1..=24.
pub fn air_lagged(
    window: &BeijingWindow,
    measures: &[MeasureId],
    cfg: &MeasureConfig,
    allow_partial: bool,
) -> Result<SweepTable> {
    let lags: Vec<usize> = AIR_LAGS.collect();
    lagged_ci_sweep(
        &window.data,
        BeijingWindow::column("PRES"),
        BeijingWindow::column("pm2.5"),
        &lags,
        measures,
        cfg,
        allow_partial,
    )
}
