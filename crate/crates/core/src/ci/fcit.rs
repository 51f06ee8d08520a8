//! Fast conditional independence test: does adding `X` to `Z` improve
//! out-of-fold prediction of `Y`?

use rand::seq::SliceRandom;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::regress::{fit_predict, RegressorSpec};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::measure::{put, MeasureId, MeasureResult};
use crate::rng::rng;

pub const FCIT_FOLDS: usize = 8;
const MIN_ROWS: usize = 80;

fn mse(pred: &[f64], target: &[f64], rows: &[usize]) -> f64 {
    rows.iter()
        .zip(pred)
        .map(|(&i, p)| (target[i] - p).powi(2))
        .sum::<f64>()
        / rows.len() as f64
}

/// One-sided p-value of the paired t statistic for `mean(d) > 0`.
fn one_sided_p(d: &[f64]) -> f64 {
    let k = d.len() as f64;
    let m = d.iter().sum::<f64>() / k;
    let sd = (d.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (k - 1.0)).sqrt();
    if !(sd > 0.0) {
        return if m > 0.0 { 0.0 } else { 1.0 };
    }
    let t = m / (sd / k.sqrt());
    let dist = StudentsT::new(0.0, 1.0, k - 1.0).expect("positive degrees of freedom");
    1.0 - dist.cdf(t)
}

/// P-value for conditional dependence of `y` on `x` given `z`.
///
/// Rows are split into 8 seeded folds. In each fold `y` is predicted from
/// `z` alone and from `(x, z)`; the per-fold MSE differences are tested
/// with a one-sided paired t-test (7 degrees of freedom). Small values
/// mean `x` carries information about `y` beyond `z`.
pub fn fcit(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    reg: RegressorSpec,
    seed: u64,
) -> Result<MeasureResult> {
    let y = super::scalar_y(data, x, y, z)?;
    let n = data.nrows();
    if n < MIN_ROWS {
        return Err(Error::ParamRange(format!(
            "{FCIT_FOLDS}-fold cross-validation needs at least {MIN_ROWS} rows, got {n}"
        )));
    }
    MeasureResult::timed(MeasureId::Fcit, |p| {
        put(p, "regressor", reg.label());
        put(p, "folds", FCIT_FOLDS);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng(seed));
        let target = data.column(y);
        let zc: Vec<&[f64]> = z.iter().map(|&c| data.column(c)).collect();
        let xzc: Vec<&[f64]> = x.iter().chain(z).map(|&c| data.column(c)).collect();
        let mut diffs = Vec::with_capacity(FCIT_FOLDS);
        for f in 0..FCIT_FOLDS {
            let test: Vec<usize> = order.iter().copied().skip(f).step_by(FCIT_FOLDS).collect();
            let train: Vec<usize> = order
                .iter()
                .enumerate()
                .filter(|(pos, _)| pos % FCIT_FOLDS != f)
                .map(|(_, &i)| i)
                .collect();
            let base = fit_predict(target, &zc, &train, &test, reg)?;
            let full = fit_predict(target, &xzc, &train, &test, reg)?;
            diffs.push(mse(&base, target, &test) - mse(&full, target, &test));
        }
        put(p, "mse_differences", &diffs);
        Ok(one_sided_p(&diffs))
    })
}
