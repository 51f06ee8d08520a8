//! Conditional-independence measures of `X` and `Y` given `Z`, all with
//! the calling convention `(data, x_cols, y_cols, z_cols)`.

mod cdc;
mod codec_ci;
mod fcit;
mod gcm;
mod pcor;
mod regress;

pub use cdc::{cdc, silverman_bandwidth, CdcParams};
pub use codec_ci::codec_ci;
pub use fcit::{fcit, FCIT_FOLDS};
pub use gcm::{gcm, wgcm, WeightFamily};
pub use pcor::{pcor, pcor_residual, pcor_schur};
pub use regress::{default_k, fit_predict, residuals, RegressorSpec};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::knn::{self, check_roles, EntropyParams};
use crate::measure::{put, MeasureId, MeasureResult};

/// Checks role sets and requires scalar `x` and `y`. `z` may be empty here;
/// the dispatcher is what insists on a conditioning block.
pub(crate) fn scalar_pair(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
) -> Result<(usize, usize)> {
    roles_allow_empty_z(data, x, y, z)?;
    if x.len() != 1 || y.len() != 1 {
        return Err(Error::Capability("x and y must be single columns".into()));
    }
    Ok((x[0], y[0]))
}

/// Like [`scalar_pair`] but only `y` must be scalar and `z` must be nonempty.
pub(crate) fn scalar_y(data: &DataMatrix, x: &[usize], y: &[usize], z: &[usize]) -> Result<usize> {
    if z.is_empty() {
        return Err(Error::Capability("a conditioning block is required".into()));
    }
    check_roles(data, x, y, z)?;
    if y.len() != 1 {
        return Err(Error::Capability("y must be a single column".into()));
    }
    Ok(y[0])
}

fn roles_allow_empty_z(data: &DataMatrix, x: &[usize], y: &[usize], z: &[usize]) -> Result<()> {
    if z.is_empty() {
        if x.is_empty() || y.is_empty() {
            return Err(Error::Shape("x and y column sets must be nonempty".into()));
        }
        if let Some(&c) = x.iter().chain(y).find(|&&c| c >= data.ncols()) {
            return Err(Error::Shape(format!("column {c} out of range")));
        }
        if x.iter().any(|c| y.contains(c)) {
            return Err(Error::Shape("x and y column sets must be disjoint".into()));
        }
        return Ok(());
    }
    check_roles(data, x, y, z)
}

/// Knobs shared by the conditional measures; unused ones are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiConfig {
    pub seed: u64,
    pub entropy: EntropyParams,
    pub regressor: RegressorSpec,
    pub weights: WeightFamily,
    pub cdc: CdcParams,
}

impl Default for CiConfig {
    fn default() -> Self {
        CiConfig {
            seed: 20240,
            entropy: EntropyParams::default(),
            regressor: RegressorSpec::default(),
            weights: WeightFamily::default(),
            cdc: CdcParams::default(),
        }
    }
}

/// Copula-entropy conditional independence `H_c(X,Z) + H_c(Y,Z) - H_c(X,Y,Z)`.
pub fn ce_ci_measure(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    params: EntropyParams,
    seed: u64,
) -> Result<MeasureResult> {
    check_roles(data, x, y, z)?;
    MeasureResult::timed(MeasureId::CeCi, |p| {
        put(p, "k", params.k);
        put(p, "seed", seed);
        knn::ce_ci(data, x, y, z, params, seed)
    })
}

pub fn cmi_ksg_measure(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    params: EntropyParams,
    seed: u64,
) -> Result<MeasureResult> {
    check_roles(data, x, y, z)?;
    MeasureResult::timed(MeasureId::CmiKsg, |p| {
        put(p, "k", params.k);
        put(p, "seed", seed);
        knn::cmi_ksg(data, x, y, z, params, seed)
    })
}

pub fn cmi_mixed_measure(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    params: EntropyParams,
) -> Result<MeasureResult> {
    check_roles(data, x, y, z)?;
    MeasureResult::timed(MeasureId::CmiMixed, |p| {
        put(p, "k", params.k);
        knn::cmi_mixed(data, x, y, z, params)
    })
}

/// Runs conditional measure `id` on `(x, y | z)`. Independence measures and
/// an empty `z` are capability errors.
pub fn ci_dispatch(
    id: MeasureId,
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    cfg: &CiConfig,
) -> Result<MeasureResult> {
    if !id.is_ci() {
        return Err(Error::Capability(format!(
            "{} is not a conditional measure",
            id.name()
        )));
    }
    if z.is_empty() {
        return Err(Error::Capability(format!(
            "{} needs a conditioning block",
            id.name()
        )));
    }
    match id {
        MeasureId::CeCi => ce_ci_measure(data, x, y, z, cfg.entropy, cfg.seed),
        MeasureId::CmiKsg => cmi_ksg_measure(data, x, y, z, cfg.entropy, cfg.seed),
        MeasureId::CmiMixed => cmi_mixed_measure(data, x, y, z, cfg.entropy),
        MeasureId::PCor => pcor(data, x, y, z),
        MeasureId::Gcm => gcm(data, x, y, z, cfg.regressor),
        MeasureId::Wgcm => wgcm(data, x, y, z, cfg.regressor, cfg.weights),
        MeasureId::CodecCi => codec_ci(data, x, y, z, cfg.seed),
        MeasureId::Cdc => cdc(data, x, y, z, cfg.cdc),
        MeasureId::Fcit => fcit(data, x, y, z, cfg.regressor, cfg.seed),
        _ => unreachable!("is_ci covers every conditional id"),
    }
}
