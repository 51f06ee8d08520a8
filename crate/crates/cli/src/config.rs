//! Run configuration read from an optional JSON file and overridden by
//! command-line flags. The effective configuration is echoed next to every
//! output.

use std::path::Path;

use depmeter::ci::{CdcParams, RegressorSpec, WeightFamily};
use depmeter::indep::{BetParams, CheckerboardParams};
use depmeter::registry::MeasureConfig;
use depmeter::{Error, MeasureId, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 20240;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    /// Replicates per grid cell.
    pub seeds: usize,
    /// Sample size per replicate.
    pub n: usize,
    /// Measure names; empty means every applicable measure.
    pub measures: Vec<String>,
    pub allow_partial: bool,
    /// Spearman cut-off of the monotonicity report.
    pub threshold: f64,
    /// Number of clusters cut from the dendrogram.
    pub clusters: usize,
    pub params: EstimatorParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            seeds: 10,
            n: depmeter::samplers::PAPER_N,
            measures: Vec::new(),
            allow_partial: false,
            threshold: 0.9,
            clusters: 5,
            params: EstimatorParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimatorParams {
    /// Neighbors in the k-NN entropy estimators.
    pub entropy_k: usize,
    pub bet_depth: u32,
    /// QAD grid resolution; `null` uses `floor(sqrt(n))`.
    pub qad_resolution: Option<usize>,
    pub hhg_on_ranks: bool,
    /// Random tuples in the incomplete Bergsma-Dassios statistic.
    pub bd_tuples: usize,
    pub regressor: RegressorSpec,
    pub weights: WeightFamily,
    /// CDC kernel bandwidth; `null` uses the Silverman rule.
    pub cdc_bandwidth: Option<f64>,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        let m = MeasureConfig::default();
        EstimatorParams {
            entropy_k: m.entropy.k,
            bet_depth: m.bet.depth,
            qad_resolution: m.checkerboard.resolution,
            hhg_on_ranks: m.hhg_on_ranks,
            bd_tuples: m.bd_tuples,
            regressor: m.regressor,
            weights: m.weights,
            cdc_bandwidth: m.cdc.bandwidth,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::ParamRange(format!("config {}: {e}", path.display())))
    }

    pub fn measure_config(&self) -> MeasureConfig {
        let p = &self.params;
        let mut m = MeasureConfig::default().with_seed(self.seed);
        m.entropy.k = p.entropy_k;
        m.bet = BetParams { depth: p.bet_depth };
        m.checkerboard = CheckerboardParams {
            resolution: p.qad_resolution,
        };
        m.hhg_on_ranks = p.hhg_on_ranks;
        m.bd_tuples = p.bd_tuples;
        m.regressor = p.regressor;
        m.weights = p.weights;
        m.cdc = CdcParams {
            bandwidth: p.cdc_bandwidth,
        };
        m
    }

    /// The configured measures, or `fallback` when none are named.
    pub fn measure_ids(&self, fallback: Vec<MeasureId>) -> Result<Vec<MeasureId>> {
        if self.measures.is_empty() {
            return Ok(fallback);
        }
        self.measures.iter().map(|m| m.parse()).collect()
    }
}

/// Writes `config.json` into `dir`: the command, its arguments and the
/// effective configuration.
pub fn echo(dir: &Path, command: &serde_json::Value, cfg: &RunConfig) -> Result<()> {
    let doc = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": cfg,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(dir.join("config.json"), text + "\n")
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}
