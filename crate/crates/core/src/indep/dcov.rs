//! Distance covariance family: dCor, joint dCov and martingale difference
//! correlation.

use super::distances::DistanceMatrix;
use super::hhg::two_blocks;
use crate::data::{DataMatrix, GroupSpec};
use crate::error::{Error, Result};
use crate::measure::{put, MeasureId, MeasureResult};

fn mean_product(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / a.len() as f64
}

/// Squared V-statistic distance covariance `(1/n^2) sum A_ij B_ij` of two
/// blocks, with double-centered Euclidean distance matrices.
pub fn dcov_sq(data: &DataMatrix, x: &[usize], y: &[usize]) -> f64 {
    let a = DistanceMatrix::euclidean(data, x).double_centered();
    let b = DistanceMatrix::euclidean(data, y).double_centered();
    mean_product(&a, &b)
}

/// Distance correlation `sqrt(dCov^2 / sqrt(dVar^2_X dVar^2_Y))` in `[0, 1]`.
///
/// The squared ratio (the population quantity written as `nu^2`) is kept in
/// `params["dcor_sq"]` and the squared covariance in `params["dcov_sq"]`.
pub fn dcor(data: &DataMatrix, groups: &GroupSpec) -> Result<MeasureResult> {
    let [x, y] = two_blocks(data, groups)?;
    MeasureResult::timed(MeasureId::DCor, |p| {
        let a = DistanceMatrix::euclidean(data, x).double_centered();
        let b = DistanceMatrix::euclidean(data, y).double_centered();
        let (vx, vy) = (mean_product(&a, &a), mean_product(&b, &b));
        if vx <= 0.0 || vy <= 0.0 {
            return Err(Error::DegenerateBlock("zero distance variance".into()));
        }
        let cov = mean_product(&a, &b);
        let r2 = (cov / (vx * vy).sqrt()).max(0.0);
        put(p, "dcov_sq", cov);
        put(p, "dcor_sq", r2);
        Ok(r2.sqrt().min(1.0))
    })
}

/// Distance-variance-normalized U-centered matrices for every column.
fn normalized_u_centered(data: &DataMatrix, cols: &[usize]) -> Result<Vec<Vec<f64>>> {
    let n = data.nrows();
    if n < 4 {
        return Err(Error::Shape("U-centering needs at least 4 rows".into()));
    }
    cols.iter()
        .map(|&c| {
            let mut a = DistanceMatrix::euclidean(data, &[c]).u_centered();
            let v = u_inner(&a, &a, n);
            if v <= 0.0 {
                return Err(Error::DegenerateBlock(format!(
                    "column {c} has zero distance variance"
                )));
            }
            let s = v.sqrt();
            a.iter_mut().for_each(|e| *e /= s);
            Ok(a)
        })
        .collect()
}

/// `(1/(n(n-3))) sum_{i != j} a_ij b_ij` for U-centered matrices.
fn u_inner(a: &[f64], b: &[f64], n: usize) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    s / (n as f64 * (n as f64 - 3.0))
}

fn subset_term(mats: &[Vec<f64>], members: &[usize], n: usize) -> f64 {
    let s: f64 = (0..n * n)
        .filter(|idx| idx / n != idx % n)
        .map(|idx| members.iter().map(|&m| mats[m][idx]).product::<f64>())
        .sum();
    s / (n as f64 * (n as f64 - 3.0))
}

/// Joint distance covariance of `d >= 3` scalar variables with `c = 1`:
/// the sum over every subset `S` with `|S| >= 2` of
/// `(-1)^|S| (1/(n(n-3))) sum_{i != j} prod_{k in S} A^k_ij`, where `A^k` is
/// the U-centered distance matrix of column `k` scaled to unit distance
/// variance. The sign makes each term estimate the corresponding piece of
/// the characteristic-function distance, so odd-order interactions such as
/// `Z = XY` for independent signs `X, Y` add a positive amount.
///
/// `params["pairwise"]` holds the sum over pairs only, which detects
/// pairwise but not higher-order dependence.
pub fn jdcov(data: &DataMatrix, groups: &GroupSpec) -> Result<MeasureResult> {
    groups.validate_for(data)?;
    let cols = groups.columns();
    if groups.blocks().iter().any(|b| b.len() != 1) || cols.len() < 3 {
        return Err(Error::Capability(
            "JdCov needs at least 3 scalar variables".into(),
        ));
    }
    if cols.len() > 12 {
        return Err(Error::ParamRange("JdCov limited to 12 variables".into()));
    }
    MeasureResult::timed(MeasureId::JdCov, |p| {
        let n = data.nrows();
        let mats = normalized_u_centered(data, &cols)?;
        let d = cols.len();
        let mut joint = 0.0;
        let mut pairwise = 0.0;
        for mask in 1u32..(1 << d) {
            if mask.count_ones() < 2 {
                continue;
            }
            let members: Vec<usize> = (0..d).filter(|&k| mask & (1 << k) != 0).collect();
            let sign = if members.len().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            let t = sign * subset_term(&mats, &members, n);
            joint += t;
            if members.len() == 2 {
                pairwise += t;
            }
        }
        put(p, "c", 1.0);
        put(p, "pairwise", pairwise);
        Ok(joint)
    })
}

/// The pairwise aggregate alone: the sum of bias-corrected squared distance
/// correlations over all pairs of columns.
pub fn jdcov_pairwise(data: &DataMatrix, groups: &GroupSpec) -> Result<f64> {
    let r = jdcov(data, groups)?;
    Ok(r.param_f64("pairwise").unwrap_or(0.0))
}

/// Martingale difference divergence of `y` given `x` and its correlation.
///
/// `MDD^2 = (1/n^2) sum A_ij B_ij` with `A` the double-centered `|x_i - x_j|`
/// and `B` the double-centered `|y_i - y_j|^2 / 2`; the returned MDC is
/// `sqrt(MDD^2 / sqrt(dVar^2_X * (1/n^2) sum B_ij^2))`. The measure is
/// directed: it asks whether `E(Y | X)` varies with `X`.
pub fn mdd_mdm(data: &DataMatrix, y_cols: &[usize], x_cols: &[usize]) -> Result<MeasureResult> {
    let groups = GroupSpec::pair(x_cols.to_vec(), y_cols.to_vec())?;
    groups.validate_for(data)?;
    MeasureResult::timed(MeasureId::Mdm, |p| {
        let a = DistanceMatrix::euclidean(data, x_cols).double_centered();
        let b = DistanceMatrix::euclidean(data, y_cols)
            .map(|d| 0.5 * d * d)
            .double_centered();
        let (va, vb) = (mean_product(&a, &a), mean_product(&b, &b));
        if vb <= 0.0 {
            return Err(Error::DegenerateBlock("response is constant".into()));
        }
        if va <= 0.0 {
            return Err(Error::DegenerateBlock(
                "predictor has zero distance variance".into(),
            ));
        }
        let mdd = mean_product(&a, &b);
        put(p, "mdd_sq", mdd);
        Ok((mdd / (va * vb).sqrt()).max(0.0).sqrt().min(1.0))
    })
}
