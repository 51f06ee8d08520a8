//! Regressors used to residualize variables on a conditioning block.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knn::{KnnIndex, Metric};
use crate::stats::standardize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegressorSpec {
    /// Ordinary least squares with intercept.
    Linear,
    /// Mean of the `k` nearest neighbors in standardized feature space;
    /// `None` means `ceil(n^0.4)` with `n` the training size.
    KnnRegression(Option<usize>),
}

impl Default for RegressorSpec {
    fn default() -> Self {
        RegressorSpec::KnnRegression(None)
    }
}

impl RegressorSpec {
    pub fn label(&self) -> String {
        match self {
            RegressorSpec::Linear => "linear".into(),
            RegressorSpec::KnnRegression(Some(k)) => format!("knn(k={k})"),
            RegressorSpec::KnnRegression(None) => "knn(k=ceil(n^0.4))".into(),
        }
    }
}

/// Default neighbor count for a training set of size `n`.
pub fn default_k(n: usize) -> usize {
    ((n as f64).powf(0.4).ceil() as usize).max(1)
}

/// Row-major standardized copy of the feature columns.
fn standardized_rows(features: &[&[f64]]) -> Vec<f64> {
    let cols: Vec<Vec<f64>> = features.iter().map(|c| standardize(c)).collect();
    let n = features[0].len();
    let mut rows = Vec::with_capacity(n * cols.len());
    for i in 0..n {
        rows.extend(cols.iter().map(|c| c[i]));
    }
    rows
}

/// In-sample residuals `target - m(features)`. k-NN fits are leave-one-out
/// so a point never predicts itself.
pub fn residuals(target: &[f64], features: &[&[f64]], spec: RegressorSpec) -> Result<Vec<f64>> {
    let n = target.len();
    if features.is_empty() {
        let m = crate::stats::mean(target);
        return Ok(target.iter().map(|v| v - m).collect());
    }
    match spec {
        RegressorSpec::Linear => linear_residuals(target, features),
        RegressorSpec::KnnRegression(k) => {
            let k = k.unwrap_or_else(|| default_k(n));
            if k == 0 || k >= n {
                return Err(Error::ParamRange(format!("k = {k} needs 0 < k < n = {n}")));
            }
            let dim = features.len();
            let rows = standardized_rows(features);
            let index = KnnIndex::new(rows.clone(), dim, Metric::Euclidean);
            Ok((0..n)
                .map(|i| {
                    let nb = index.knn(&rows[i * dim..(i + 1) * dim], k, Some(i));
                    let pred = nb.iter().map(|&(_, j)| target[j]).sum::<f64>() / nb.len() as f64;
                    target[i] - pred
                })
                .collect())
        }
    }
}

fn design(features: &[&[f64]], rows: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), features.len() + 1, |r, c| {
        if c == 0 {
            1.0
        } else {
            features[c - 1][rows[r]]
        }
    })
}

fn linear_residuals(target: &[f64], features: &[&[f64]]) -> Result<Vec<f64>> {
    let all: Vec<usize> = (0..target.len()).collect();
    let beta = ols(target, features, &all)?;
    let x = design(features, &all);
    let fitted = &x * beta;
    Ok(target
        .iter()
        .zip(fitted.iter())
        .map(|(t, f)| t - f)
        .collect())
}

fn ols(target: &[f64], features: &[&[f64]], rows: &[usize]) -> Result<DVector<f64>> {
    let x = design(features, rows);
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|&i| target[i]));
    let xtx = x.transpose() * &x;
    let chol = xtx.cholesky().ok_or(Error::SingularConditioning)?;
    Ok(chol.solve(&(x.transpose() * y)))
}

/// Fits on `train` rows and predicts `test` rows.
pub fn fit_predict(
    target: &[f64],
    features: &[&[f64]],
    train: &[usize],
    test: &[usize],
    spec: RegressorSpec,
) -> Result<Vec<f64>> {
    match spec {
        RegressorSpec::Linear => {
            let beta = ols(target, features, train)?;
            Ok((design(features, test) * beta).iter().copied().collect())
        }
        RegressorSpec::KnnRegression(k) => {
            let k = k.unwrap_or_else(|| default_k(train.len()));
            if k == 0 || k > train.len() {
                return Err(Error::ParamRange(format!(
                    "k = {k} exceeds training size {}",
                    train.len()
                )));
            }
            let dim = features.len();
            let rows = standardized_rows(features);
            let pick = |idx: &[usize]| -> Vec<f64> {
                idx.iter()
                    .flat_map(|&i| rows[i * dim..(i + 1) * dim].iter().copied())
                    .collect()
            };
            let index = KnnIndex::new(pick(train), dim, Metric::Euclidean);
            let test_rows = pick(test);
            Ok((0..test.len())
                .map(|t| {
                    let nb = index.knn(&test_rows[t * dim..(t + 1) * dim], k, None);
                    nb.iter().map(|&(_, j)| target[train[j]]).sum::<f64>() / nb.len() as f64
                })
                .collect())
        }
    }
}
