//! Uniform dispatch over every measure with capability checks.

use serde_json::json;

use crate::ci::{ci_dispatch, CdcParams, CiConfig, RegressorSpec, WeightFamily};
use crate::data::{DataMatrix, GroupSpec};
use crate::error::{Error, Result};
use crate::indep::{self, BetParams, CheckerboardParams, HhgParams, HhgScore};
use crate::knn::EntropyParams;
use crate::measure::{Capabilities, Direction, MeasureId, MeasureResult, Params};

/// What the registry knows about a measure before running it.
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptor {
    pub id: MeasureId,
    pub capabilities: Capabilities,
    pub direction: Direction,
    pub defaults: Params,
}

/// How the columns of a matrix are assigned to the measure's arguments.
#[derive(Debug, Clone, PartialEq)]
pub enum Roles {
    /// Independence between the blocks.
    Joint(GroupSpec),
    /// Conditional independence of `x` and `y` given `z`.
    Conditional {
        x: Vec<usize>,
        y: Vec<usize>,
        z: Vec<usize>,
    },
}

impl Roles {
    /// Every column as its own block.
    pub fn all_singletons(data: &DataMatrix) -> Self {
        Roles::Joint(GroupSpec::singletons(data.ncols()))
    }
}

/// Knobs for every estimator. Each field only affects the measures that
/// use it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureConfig {
    pub seed: u64,
    pub entropy: EntropyParams,
    pub bet: BetParams,
    pub checkerboard: CheckerboardParams,
    pub hhg_on_ranks: bool,
    pub bd_tuples: usize,
    pub regressor: RegressorSpec,
    pub weights: WeightFamily,
    pub cdc: CdcParams,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            seed: 20240,
            entropy: EntropyParams::default(),
            bet: BetParams::default(),
            checkerboard: CheckerboardParams::default(),
            hhg_on_ranks: false,
            bd_tuples: indep::BD_TUPLES,
            regressor: RegressorSpec::default(),
            weights: WeightFamily::default(),
            cdc: CdcParams::default(),
        }
    }
}

impl MeasureConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        MeasureConfig { seed, ..self }
    }

    fn ci(&self) -> CiConfig {
        CiConfig {
            seed: self.seed,
            entropy: self.entropy,
            regressor: self.regressor,
            weights: self.weights,
            cdc: self.cdc,
        }
    }
}

pub fn lookup(id: MeasureId) -> Descriptor {
    use MeasureId::*;
    let cfg = MeasureConfig::default();
    let defaults = match id {
        CE | CeCi | CmiKsg | CmiMixed => json!({ "k": cfg.entropy.k }),
        BDtau => json!({ "tuples": cfg.bd_tuples }),
        Bet => json!({ "depth": cfg.bet.depth }),
        Qad => json!({ "resolution": "floor(sqrt(n))" }),
        HhgChisq | HhgLr => json!({ "on_ranks": false }),
        DHsic => json!({ "bandwidth": "median heuristic" }),
        JdCov => json!({ "c": 1.0 }),
        Gcm | Wgcm | Fcit => json!({ "regressor": cfg.regressor.label() }),
        Cdc => json!({ "bandwidth": "silverman" }),
        _ => json!({}),
    };
    let defaults = match defaults {
        serde_json::Value::Object(m) => m.into_iter().collect(),
        _ => Params::new(),
    };
    Descriptor {
        id,
        capabilities: id.capabilities(),
        direction: id.direction(),
        defaults,
    }
}

/// Rejects block layouts outside the declared capabilities of `id`.
pub fn check_capabilities(id: MeasureId, groups: &GroupSpec) -> Result<()> {
    let caps = id.capabilities();
    let vector = groups.blocks().iter().any(|b| b.len() > 1);
    let ok = match (groups.len(), vector) {
        (0 | 1, _) => false,
        (2, false) => caps.bivariate,
        (2, true) => caps.vector_vs_vector,
        (_, false) => caps.multivariate,
        (_, true) => caps.multivariate && caps.vector_vs_vector,
    };
    if ok {
        Ok(())
    } else {
        let shape: Vec<usize> = groups.blocks().iter().map(Vec::len).collect();
        Err(Error::Capability(format!(
            "{} does not accept blocks of sizes {shape:?}",
            id.name()
        )))
    }
}

/// Runs measure `id` on `data` with the given column roles.
pub fn evaluate(
    id: MeasureId,
    data: &DataMatrix,
    roles: &Roles,
    cfg: &MeasureConfig,
) -> Result<MeasureResult> {
    match roles {
        Roles::Conditional { x, y, z } => {
            if !id.is_ci() {
                return Err(Error::Capability(format!(
                    "{} is an independence measure and takes no conditioning block",
                    id.name()
                )));
            }
            ci_dispatch(id, data, x, y, z, &cfg.ci())
        }
        Roles::Joint(groups) => {
            if id.is_ci() {
                return Err(Error::Capability(format!(
                    "{} needs a conditioning block",
                    id.name()
                )));
            }
            groups.validate_for(data)?;
            check_capabilities(id, groups)?;
            evaluate_joint(id, data, groups, cfg)
        }
    }
}

fn evaluate_joint(
    id: MeasureId,
    data: &DataMatrix,
    groups: &GroupSpec,
    cfg: &MeasureConfig,
) -> Result<MeasureResult> {
    use MeasureId::*;
    let blocks = groups.blocks();
    let pair = || data.select_columns(&groups.columns());
    let hhg = |score| {
        indep::hhg(
            data,
            groups,
            HhgParams {
                score,
                on_ranks: cfg.hhg_on_ranks,
            },
        )
    };
    match id {
        CE => indep::copula_entropy_measure(data, groups, cfg.entropy, cfg.seed),
        Ktau => indep::kendall_tau(&pair()?),
        Hoeff => indep::hoeffding_d(&pair()?),
        BDtau => indep::bergsma_dassios(&pair()?, cfg.bd_tuples, cfg.seed),
        Codec => indep::codec_xi(&pair()?, cfg.seed),
        HhgChisq => hhg(HhgScore::ChiSq),
        HhgLr => hhg(HhgScore::LikelihoodRatio),
        Ball => indep::ball_cov(data, groups),
        Bet => indep::bet(data, groups, cfg.bet, cfg.seed),
        Qad => indep::qad_zeta(data, groups, cfg.checkerboard, cfg.seed),
        Mixed => indep::cvm_product_copula(data, groups),
        Subcop => indep::subcop_measure(data, groups),
        DCor => indep::dcor(data, groups),
        JdCov => indep::jdcov(data, groups),
        Mdm => indep::mdd_mdm(data, &blocks[1], &blocks[0]),
        DHsic => indep::dhsic(data, groups),
        CeCi | PCor | Gcm | Wgcm | CmiKsg | CmiMixed | CodecCi | Cdc | Fcit => {
            unreachable!("conditional ids are rejected before this point")
        }
    }
}
