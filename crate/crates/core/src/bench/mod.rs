//! Benchmark harness: seeded simulation sweeps over the experiment grids,
//! monotonicity and clustering analysis, variable selection and lagged
//! conditional-independence sweeps.

mod analysis;
mod real;
mod report;
mod selection;

pub use analysis::{
    cross_measure_correlation, linkage_clusters, monotonicity, ClusterReport, Merge,
    MonotonicityReport, MonotonicityRow,
};
pub use real::{
    air_lagged, heart_selection, wine_normalized, HeartReport, WineReport, WineRow, AIR_LAGS,
};
pub use report::{
    write_correlation_csv, write_dendrogram_csv, write_failures_csv, write_lag_csv,
    write_monotonicity_csv, write_selection_csv, write_sweep_csv, write_timings_csv,
    write_wine_csv, SCHEMA_VERSION,
};
pub use selection::{
    lagged_ci_sweep, select_with_pairs, variable_selection, SelectionRow, SelectionTable,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::data::GroupSpec;
use crate::error::{Error, Result};
use crate::measure::MeasureId;
use crate::registry::{check_capabilities, evaluate, MeasureConfig, Roles};
use crate::rng::mix_seed;
use crate::samplers::{paper_experiment_cells, sample, PAPER_N};

/// Expected Table 2 outcome for a measure in a simulated experiment:
/// `Some(true)` for a check mark, `Some(false)` for a cross and `None` where
/// the measure does not apply.
pub fn table2_expectation(id: MeasureId, experiment: u32) -> Option<bool> {
    use MeasureId::*;
    let cols: &[u32] = match id {
        CE | Bet | DHsic => &[1, 2, 3, 4, 5, 6, 7, 8],
        Ktau | Hoeff | BDtau | Codec => &[1, 2, 3, 4, 5],
        HhgChisq | HhgLr | Ball | DCor | Mdm => &[1, 2, 3, 4, 5, 8],
        Qad => {
            return match experiment {
                1..=5 => Some(true),
                8 => Some(false),
                _ => None,
            }
        }
        Mixed | Subcop => &[1, 2, 3, 4, 5, 6, 7],
        _ => &[],
    };
    cols.contains(&experiment).then_some(true)
}

/// Column roles used by a simulated experiment.
pub fn experiment_roles(experiment: u32) -> Result<Roles> {
    Ok(match experiment {
        1..=5 => Roles::Joint(GroupSpec::singletons(2)),
        6 | 7 => Roles::Joint(GroupSpec::singletons(3)),
        8 => Roles::Joint(GroupSpec::new(vec![vec![0, 1], vec![2, 3]])?),
        9 | 10 => Roles::Conditional {
            x: vec![0],
            y: vec![1],
            z: vec![2],
        },
        other => return Err(Error::UnknownExperiment(other)),
    })
}

/// Every implemented measure whose capabilities fit the experiment.
pub fn default_measures(experiment: u32) -> Result<Vec<MeasureId>> {
    Ok(match experiment_roles(experiment)? {
        Roles::Joint(g) => MeasureId::independence_measures()
            .filter(|&id| check_capabilities(id, &g).is_ok())
            .collect(),
        Roles::Conditional { .. } => MeasureId::ci_measures().collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment_id: u32,
    pub measures: Vec<MeasureId>,
    pub seeds: usize,
    pub n: usize,
    pub root_seed: u64,
    /// Keep going when an estimator fails in some cell.
    pub allow_partial: bool,
    pub config: MeasureConfig,
}

impl ExperimentSpec {
    /// All applicable measures, 10 seeds per cell and `n = 800`.
    pub fn new(experiment_id: u32) -> Result<Self> {
        Ok(ExperimentSpec {
            experiment_id,
            measures: default_measures(experiment_id)?,
            seeds: 10,
            n: PAPER_N,
            root_seed: 20240,
            allow_partial: false,
            config: MeasureConfig::default(),
        })
    }

    pub fn with_measures(mut self, measures: Vec<MeasureId>) -> Self {
        self.measures = measures;
        self
    }

    pub fn with_seeds(mut self, seeds: usize) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds == 0 || self.measures.is_empty() {
            return Err(Error::ParamRange(
                "a sweep needs at least one seed and one measure".into(),
            ));
        }
        let roles = experiment_roles(self.experiment_id)?;
        for &id in &self.measures {
            match &roles {
                Roles::Joint(g) if id.is_ci() => {
                    return Err(Error::Capability(format!(
                        "{} is conditional but experiment {} tests independence",
                        id.name(),
                        self.experiment_id
                    )))
                }
                Roles::Joint(g) => check_capabilities(id, g)?,
                Roles::Conditional { .. } if !id.is_ci() => {
                    return Err(Error::Capability(format!(
                        "{} cannot run the conditional experiment {}",
                        id.name(),
                        self.experiment_id
                    )))
                }
                Roles::Conditional { .. } => {}
            }
        }
        Ok(())
    }
}

/// One estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub cell: usize,
    pub seed: usize,
    pub measure: MeasureId,
    pub value: f64,
    pub elapsed_ms: f64,
}

/// An estimator failure kept when a sweep runs with `allow_partial`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub cell: usize,
    pub seed: usize,
    pub measure: MeasureId,
    pub error: Error,
}

/// Estimates over a one-dimensional parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Experiment number, or 0 for sweeps not tied to a simulated design.
    pub experiment_id: u32,
    pub grid: Vec<f64>,
    pub measures: Vec<MeasureId>,
    pub seeds: usize,
    /// Sorted by `(cell, seed, measure position)`.
    pub records: Vec<SweepRecord>,
    pub failures: Vec<CellFailure>,
}

impl SweepTable {
    /// Mean estimate per grid cell for `id`; `None` for cells without any
    /// successful estimate.
    pub fn means(&self, id: MeasureId) -> Vec<Option<f64>> {
        let mut sum = vec![0.0; self.grid.len()];
        let mut count = vec![0usize; self.grid.len()];
        for r in self.records.iter().filter(|r| r.measure == id) {
            sum[r.cell] += r.value;
            count[r.cell] += 1;
        }
        sum.iter()
            .zip(&count)
            .map(|(&s, &c)| (c > 0).then(|| s / c as f64))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
            && self.records.len() == self.grid.len() * self.seeds * self.measures.len()
    }
}

/// Seed of the sampled data in grid cell `cell`, replicate `seed`.
pub fn data_seed(root: u64, experiment: u32, cell: usize, seed: usize) -> u64 {
    mix_seed(
        mix_seed(mix_seed(root, u64::from(experiment)), cell as u64),
        seed as u64,
    )
}

/// Runs `f` on a thread pool capped by `DEPMETER_THREADS` when set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match std::env::var("DEPMETER_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(t) if t > 0 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

/// Samples every (cell, seed) of the experiment and evaluates each measure.
/// Cells run in parallel; every number depends only on the spec.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepTable> {
    spec.validate()?;
    let roles = experiment_roles(spec.experiment_id)?;
    let cells = paper_experiment_cells(spec.experiment_id)?;
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.seeds).map(move |s| (c, s)))
        .collect();
    type JobOut = Vec<std::result::Result<SweepRecord, CellFailure>>;
    let outputs: Vec<Result<JobOut>> = with_thread_cap(|| {
        jobs.par_iter()
            .map(|&(cell, seed)| {
                let ds = data_seed(spec.root_seed, spec.experiment_id, cell, seed);
                let gen = cells[cell].1.clone().with_n(spec.n).with_seed(ds);
                let data = sample(&gen)?;
                Ok(spec
                    .measures
                    .iter()
                    .enumerate()
                    .map(|(mi, &id)| {
                        let cfg = spec.config.with_seed(mix_seed(ds, 1000 + mi as u64));
                        evaluate(id, &data, &roles, &cfg)
                            .map(|r| SweepRecord {
                                cell,
                                seed,
                                measure: id,
                                value: r.value,
                                elapsed_ms: r.elapsed.as_secs_f64() * 1e3,
                            })
                            .map_err(|error| CellFailure {
                                cell,
                                seed,
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
    for out in outputs {
        for item in out? {
            match item {
                Ok(r) => records.push(r),
                Err(f) if spec.allow_partial => failures.push(f),
                Err(f) => return Err(f.error),
            }
        }
    }
    Ok(SweepTable {
        experiment_id: spec.experiment_id,
        grid: cells.iter().map(|(p, _)| *p).collect(),
        measures: spec.measures.clone(),
        seeds: spec.seeds,
        records,
        failures,
    })
}
