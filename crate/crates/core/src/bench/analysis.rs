//! Monotonicity of trajectories and clustering of measures by the
//! correlation of their trajectories.

use serde::Serialize;

use super::SweepTable;
use crate::error::{Error, Result};
use crate::measure::{Direction, MeasureId};
use crate::stats::{pearson, spearman};

/// Oriented strength: `|mean|` for direct measures, `-mean` for inverse
/// ones where smaller values mean more dependence.
pub(crate) fn oriented(id: MeasureId, v: f64) -> f64 {
    match id.direction() {
        Direction::Direct => v.abs(),
        Direction::Inverse => -v,
    }
}

fn trajectory(table: &SweepTable, id: MeasureId) -> Option<Vec<f64>> {
    table
        .means(id)
        .into_iter()
        .map(|m| m.map(|v| oriented(id, v)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityRow {
    pub measure: MeasureId,
    pub spearman: Option<f64>,
    pub pass: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub experiment_id: u32,
    pub threshold: f64,
    pub rows: Vec<MonotonicityRow>,
}

impl MonotonicityReport {
    pub fn row(&self, id: MeasureId) -> Option<&MonotonicityRow> {
        self.rows.iter().find(|r| r.measure == id)
    }
}

/// Spearman correlation between the grid parameter and each measure's
/// oriented mean trajectory; a measure passes when it reaches `threshold`.
pub fn monotonicity(table: &SweepTable, threshold: f64) -> Result<MonotonicityReport> {
    if table.grid.len() < 3 {
        return Err(Error::ParamRange(
            "monotonicity needs at least 3 grid points".into(),
        ));
    }
    let rows = table
        .measures
        .iter()
        .map(|&id| match trajectory(table, id) {
            None => MonotonicityRow {
                measure: id,
                spearman: None,
                pass: false,
                reason: Some("cells without estimates".into()),
            },
            Some(t) => match spearman(&table.grid, &t) {
                None => MonotonicityRow {
                    measure: id,
                    spearman: None,
                    pass: false,
                    reason: Some("constant trajectory".into()),
                },
                Some(s) => MonotonicityRow {
                    measure: id,
                    spearman: Some(s),
                    pass: s >= threshold,
                    reason: None,
                },
            },
        })
        .collect();
    Ok(MonotonicityReport {
        experiment_id: table.experiment_id,
        threshold,
        rows,
    })
}

/// One agglomeration step. Leaves are `0..n`; the cluster formed at step
/// `s` gets id `n + s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub distance: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterReport {
    /// Measures in id order; indexes rows and columns of `correlation`.
    pub measures: Vec<MeasureId>,
    pub correlation: Vec<Vec<f64>>,
    pub linkage: &'static str,
    pub merges: Vec<Merge>,
    pub k: usize,
    /// Cluster label per measure after cutting to `k` clusters; labels are
    /// numbered by each cluster's first member.
    pub assignment: Vec<usize>,
    pub warnings: Vec<String>,
}

impl ClusterReport {
    pub fn same_cluster(&self, ids: &[MeasureId]) -> bool {
        let labels: Vec<Option<usize>> = ids
            .iter()
            .map(|id| {
                self.measures
                    .iter()
                    .position(|m| m == id)
                    .map(|i| self.assignment[i])
            })
            .collect();
        labels.iter().all(|l| l.is_some() && *l == labels[0])
    }
}

/// Complete-linkage agglomerative clustering of a distance matrix, cut to
/// `k` clusters. Ties go to the pair whose first members come first.
pub fn linkage_clusters(dist: &[Vec<f64>], k: usize) -> (Vec<Merge>, Vec<usize>) {
    let n = dist.len();
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    let mut assignment = (0..n).collect::<Vec<_>>();
    let k = k.clamp(1, n.max(1));
    while clusters.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let d = clusters[a]
                    .1
                    .iter()
                    .flat_map(|&i| clusters[b].1.iter().map(move |&j| dist[i][j]))
                    .fold(f64::NEG_INFINITY, f64::max);
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, a, b));
                }
            }
        }
        let (d, a, b) = best.expect("at least two clusters");
        let (id_b, members_b) = clusters.remove(b);
        let (id_a, members_a) = std::mem::take(&mut clusters[a]);
        let mut members = members_a;
        members.extend(members_b);
        members.sort_unstable();
        merges.push(Merge {
            left: id_a,
            right: id_b,
            distance: d,
            size: members.len(),
        });
        clusters[a] = (n + merges.len() - 1, members);
        clusters.sort_by_key(|c| c.1[0]);
        if clusters.len() == k {
            for (label, c) in clusters.iter().enumerate() {
                for &m in &c.1 {
                    assignment[m] = label;
                }
            }
        }
    }
    if k == n {
        assignment = (0..n).collect();
    }
    (merges, assignment)
}

/// Pearson correlations between the measures' oriented mean trajectories
/// and their complete-linkage clustering on `1 - correlation`.
pub fn cross_measure_correlation(table: &SweepTable, k: usize) -> Result<ClusterReport> {
    if table.grid.len() < 3 || table.measures.len() < 2 {
        return Err(Error::ParamRange(
            "clustering needs at least 3 grid points and 2 measures".into(),
        ));
    }
    let mut measures = table.measures.clone();
    measures.sort();
    let mut warnings = Vec::new();
    let trajectories: Vec<Option<Vec<f64>>> = measures
        .iter()
        .map(|&id| {
            let t = trajectory(table, id);
            if t.is_none() {
                warnings.push(format!("{} has cells without estimates", id.name()));
            }
            t
        })
        .collect();
    let m = measures.len();
    let mut corr = vec![vec![0.0; m]; m];
    for a in 0..m {
        corr[a][a] = 1.0;
        for b in a + 1..m {
            let c = match (&trajectories[a], &trajectories[b]) {
                (Some(x), Some(y)) => pearson(x, y),
                _ => None,
            };
            corr[a][b] = c.unwrap_or(0.0);
            corr[b][a] = corr[a][b];
        }
    }
    for (i, t) in trajectories.iter().enumerate() {
        if let Some(t) = t {
            if t.iter().all(|&v| v == t[0]) {
                warnings.push(format!(
                    "{} has a constant trajectory; its correlations are set to 0",
                    measures[i].name()
                ));
            }
        }
    }
    let dist: Vec<Vec<f64>> = corr
        .iter()
        .map(|r| r.iter().map(|c| 1.0 - c).collect())
        .collect();
    let (merges, assignment) = linkage_clusters(&dist, k);
    Ok(ClusterReport {
        measures,
        correlation: corr,
        linkage: "complete",
        merges,
        k,
        assignment,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::SweepRecord;

    fn table(trajs: &[(MeasureId, Vec<f64>)]) -> SweepTable {
        let grid: Vec<f64> = (0..trajs[0].1.len()).map(|i| i as f64).collect();
        let mut records = Vec::new();
        for (cell, _) in grid.iter().enumerate() {
            for (id, t) in trajs {
                records.push(SweepRecord {
                    cell,
                    seed: 0,
                    measure: *id,
                    value: t[cell],
                    elapsed_ms: 0.0,
                });
            }
        }
        SweepTable {
            experiment_id: 0,
            grid,
            measures: trajs.iter().map(|t| t.0).collect(),
            seeds: 1,
            records,
            failures: vec![],
        }
    }

    #[test]
    fn inverse_measures_flip() {
        let t = table(&[
            (MeasureId::Fcit, vec![0.9, 0.5, 0.2, 0.01]),
            (MeasureId::Ktau, vec![0.9, 0.5, 0.2, 0.01]),
        ]);
        let r = monotonicity(&t, 0.9).unwrap();
        assert!(r.row(MeasureId::Fcit).unwrap().pass);
        assert!(!r.row(MeasureId::Ktau).unwrap().pass);
    }

    #[test]
    fn constant_trajectory_fails_with_reason() {
        let t = table(&[(MeasureId::Ktau, vec![0.3; 5])]);
        let row = monotonicity(&t, 0.9).unwrap().rows[0].clone();
        assert!(!row.pass);
        assert_eq!(row.reason.as_deref(), Some("constant trajectory"));
    }

    #[test]
    fn identical_trajectories_merge_first_and_opposite_last() {
        let up = vec![0.1, 0.2, 0.4, 0.8, 0.9];
        let t = table(&[
            (MeasureId::Ktau, up.clone()),
            (MeasureId::DCor, up.clone()),
            (MeasureId::Hoeff, vec![0.3, 0.2, 0.25, 0.1, 0.15]),
        ]);
        let r = cross_measure_correlation(&t, 2).unwrap();
        let ktau = r
            .measures
            .iter()
            .position(|&m| m == MeasureId::Ktau)
            .unwrap();
        let dcor = r
            .measures
            .iter()
            .position(|&m| m == MeasureId::DCor)
            .unwrap();
        assert!((r.correlation[ktau][dcor] - 1.0).abs() < 1e-12);
        let first = &r.merges[0];
        assert_eq!(
            (first.left.min(first.right), first.left.max(first.right)),
            (ktau.min(dcor), ktau.max(dcor))
        );
        assert!(r.same_cluster(&[MeasureId::Ktau, MeasureId::DCor]));
        assert!(!r.same_cluster(&[MeasureId::Ktau, MeasureId::Hoeff]));
        assert_eq!(r.merges.len(), 2);
    }

    #[test]
    fn anticorrelated_pair_has_distance_two() {
        let dist = vec![vec![0.0, 2.0], vec![2.0, 0.0]];
        let (merges, assignment) = linkage_clusters(&dist, 1);
        assert_eq!(merges[0].distance, 2.0);
        assert_eq!(assignment, vec![0, 0]);
    }
}
