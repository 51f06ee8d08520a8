//! Kozachenko–Leonenko entropy and copula entropy.

use statrs::function::gamma::digamma;

use super::index::{Metric, NeighborSearch, Searcher};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::ranks::{pseudo_obs_columns, TiePolicy};

/// Parameters shared by the k-NN estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyParams {
    pub k: usize,
    pub metric: Metric,
    pub search: NeighborSearch,
}

impl Default for EntropyParams {
    fn default() -> Self {
        Self {
            k: 3,
            metric: Metric::Chebyshev,
            search: NeighborSearch::KdTree,
        }
    }
}

impl EntropyParams {
    pub fn with_k(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }
}

/// k-NN differential entropy estimate in nats:
/// `psi(n) - psi(k) + log c_d + (d/n) sum_i log eps_i`, where `eps_i` is the
/// distance from point `i` to its k-th neighbor and `c_d` the unit-ball
/// volume of the metric.
pub fn knn_entropy(data: &DataMatrix, params: EntropyParams) -> Result<f64> {
    let cols: Vec<&[f64]> = (0..data.ncols()).map(|c| data.column(c)).collect();
    knn_entropy_columns(&cols, params)
}

pub(crate) fn knn_entropy_columns(cols: &[&[f64]], params: EntropyParams) -> Result<f64> {
    let n = cols[0].len();
    let d = cols.len();
    if params.k == 0 || params.k >= n {
        return Err(Error::ParamRange(format!(
            "k = {} needs 0 < k < n = {n}",
            params.k
        )));
    }
    let searcher = Searcher::build(cols, params.metric, params.search);
    let mut sum_log = 0.0;
    for i in 0..n {
        let eps = searcher.kth_distance(i, params.k);
        if eps <= 0.0 {
            return Err(Error::DegenerateGeometry(format!(
                "point {i} has {} duplicates; apply jitter first",
                params.k
            )));
        }
        sum_log += eps.ln();
    }
    Ok(digamma(n as f64) - digamma(params.k as f64)
        + params.metric.log_unit_ball_volume(d)
        + d as f64 * sum_log / n as f64)
}

/// Copula entropy: the k-NN entropy of the rank pseudo-observations.
///
/// Non-positive in population and zero iff the columns are independent;
/// it equals minus the mutual information. Ties are broken with seeded
/// random ranks so no two pseudo-observations coincide.
pub fn copula_entropy(data: &DataMatrix, params: EntropyParams, seed: u64) -> Result<f64> {
    if data.ncols() < 2 {
        return Err(Error::Shape(
            "copula entropy needs at least two columns".into(),
        ));
    }
    let cols: Vec<usize> = (0..data.ncols()).collect();
    copula_entropy_of(data, &cols, params, seed)
}

/// Copula entropy of a column subset with jitter streams keyed by the
/// original column indices. A single column has copula entropy 0.
pub fn copula_entropy_of(
    data: &DataMatrix,
    cols: &[usize],
    params: EntropyParams,
    seed: u64,
) -> Result<f64> {
    if cols.len() < 2 {
        return Ok(0.0);
    }
    let u = pseudo_obs_columns(data, cols, TiePolicy::RandomJitter(seed))?;
    knn_entropy(&u, params)
}

/// Copula entropy between two random vectors:
/// `H_c(x, y) - H_c(x) - H_c(y)` (minus their mutual information).
pub fn copula_entropy_between(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    params: EntropyParams,
    seed: u64,
) -> Result<f64> {
    let joint: Vec<usize> = x.iter().chain(y).copied().collect();
    let hxy = copula_entropy_of(data, &joint, params, seed)?;
    let hx = copula_entropy_of(data, x, params, seed)?;
    let hy = copula_entropy_of(data, y, params, seed)?;
    Ok(hxy - hx - hy)
}
