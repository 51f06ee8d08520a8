//! Independence measures. Each estimator takes a [`DataMatrix`] (plus the
//! blocks or columns it compares) and returns a [`MeasureResult`].

mod bet;
mod dcov;
mod dhsic;
pub mod distances;
mod hhg;
mod qad;
mod rank_based;

pub use bet::{bet, BetParams};
pub use copula_tests::{cvm_product_copula, subcop_measure};
pub use dcov::{dcor, dcov_sq, jdcov, jdcov_pairwise, mdd_mdm};
pub use dhsic::{dhsic, median_bandwidth};
pub use distances::DistanceMatrix;
pub use hhg::{
    ball_cov, ball_cov_reference, hhg, hhg_from_distances, hhg_reference, HhgParams, HhgScore,
};
pub use qad::{qad_zeta, CheckerboardParams};
pub use rank_based::{
    bergsma_dassios, bergsma_dassios_exact, codec_xi, hoeffding_d, kendall_tau, BD_TUPLES,
};

use crate::data::{DataMatrix, GroupSpec};
use crate::error::{Error, Result};
use crate::knn::{copula_entropy_of, EntropyParams};
use crate::measure::{put, MeasureId, MeasureResult};

pub(crate) fn two_columns(data: &DataMatrix) -> Result<(&[f64], &[f64])> {
    if data.ncols() != 2 {
        return Err(Error::Capability(format!(
            "bivariate measure given {} columns",
            data.ncols()
        )));
    }
    Ok((data.column(0), data.column(1)))
}

/// Copula entropy of the blocks: `H_c(all) - sum_g H_c(block g)`, which is
/// minus the multi-information. With scalar blocks this is the copula
/// entropy of the selected columns; it is 0 under joint independence and
/// negative otherwise.
pub fn copula_entropy_measure(
    data: &DataMatrix,
    groups: &GroupSpec,
    params: EntropyParams,
    seed: u64,
) -> Result<MeasureResult> {
    groups.validate_for(data)?;
    if groups.len() < 2 {
        return Err(Error::Capability(
            "copula entropy needs at least 2 blocks".into(),
        ));
    }
    MeasureResult::timed(MeasureId::CE, |p| {
        put(p, "k", params.k);
        put(p, "metric", format!("{:?}", params.metric));
        put(
            p,
            "tie_policy",
            crate::ranks::TiePolicy::RandomJitter(seed).label(),
        );
        let mut h = copula_entropy_of(data, &groups.columns(), params, seed)?;
        for b in groups.blocks() {
            h -= copula_entropy_of(data, b, params, seed)?;
        }
        Ok(h)
    })
}
