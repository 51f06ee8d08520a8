//! Conditional distance correlation by kernel-weighted distance covariance.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::indep::DistanceMatrix;
use crate::measure::{put, MeasureId, MeasureResult};
use crate::stats::standardize;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CdcParams {
    /// Gaussian kernel bandwidth on standardized `Z`; `None` uses the
    /// Silverman rule `(4 / ((q + 2) n))^(1 / (q + 4))` for `q` columns.
    pub bandwidth: Option<f64>,
}

pub fn silverman_bandwidth(n: usize, q: usize) -> f64 {
    (4.0 / ((q as f64 + 2.0) * n as f64)).powf(1.0 / (q as f64 + 4.0))
}

/// Column `u` holds the normalized kernel weights `w_i(z_u)`.
fn weight_matrix(data: &DataMatrix, z: &[usize], h: f64) -> DMatrix<f64> {
    let n = data.nrows();
    let zs: Vec<Vec<f64>> = z.iter().map(|&c| standardize(data.column(c))).collect();
    let mut w = DMatrix::from_fn(n, n, |i, u| {
        let d2: f64 = zs.iter().map(|c| (c[i] - c[u]).powi(2)).sum();
        (-0.5 * d2 / (h * h)).exp()
    });
    for mut col in w.column_iter_mut() {
        let s = col.sum();
        col /= s;
    }
    w
}

/// Weighted squared distance covariances for every weight column:
/// `sum_ij w_i w_j a_ij b_ij + (w'Aw)(w'Bw) - 2 sum_i w_i (Aw)_i (Bw)_i`.
fn weighted_dcov(a: &DMatrix<f64>, b: &DMatrix<f64>, w: &DMatrix<f64>) -> Vec<f64> {
    let ab = a.component_mul(b) * w;
    let aw = a * w;
    let bw = b * w;
    (0..w.ncols())
        .map(|u| {
            let wu = w.column(u);
            let t1 = wu.dot(&ab.column(u));
            let t2 = wu.dot(&aw.column(u)) * wu.dot(&bw.column(u));
            let t3: f64 = (0..w.nrows())
                .map(|i| wu[i] * aw[(i, u)] * bw[(i, u)])
                .sum();
            t1 + t2 - 2.0 * t3
        })
        .collect()
}

fn dist(data: &DataMatrix, cols: &[usize]) -> DMatrix<f64> {
    let d = DistanceMatrix::euclidean(data, cols);
    DMatrix::from_row_slice(d.len(), d.len(), d.as_slice())
}

/// Conditional distance correlation: at each sample point `z_u`, the
/// distance covariance of `x` and `y` is computed with Gaussian kernel
/// weights centred at `z_u` and normalized by the weighted distance
/// variances; the result is the mean over `u` of the square root of that
/// ratio, in `[0, 1]`.
pub fn cdc(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    params: CdcParams,
) -> Result<MeasureResult> {
    crate::knn::check_roles(data, x, y, z)?;
    let h = params
        .bandwidth
        .unwrap_or_else(|| silverman_bandwidth(data.nrows(), z.len()));
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::ParamRange(format!("bandwidth must be > 0, got {h}")));
    }
    MeasureResult::timed(MeasureId::Cdc, |p| {
        put(p, "bandwidth", h);
        let w = weight_matrix(data, z, h);
        let a = dist(data, x);
        let b = dist(data, y);
        let cov = weighted_dcov(&a, &b, &w);
        let vx = weighted_dcov(&a, &a, &w);
        let vy = weighted_dcov(&b, &b, &w);
        let mut total = 0.0;
        for u in 0..cov.len() {
            let denom = (vx[u] * vy[u]).sqrt();
            if !(denom > 0.0) {
                return Err(Error::DegenerateBlock(format!(
                    "zero local distance variance at row {u}"
                )));
            }
            total += (cov[u] / denom).clamp(0.0, 1.0).sqrt();
        }
        Ok(total / cov.len() as f64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_weights_reduce_to_dcov() {
        let data = DataMatrix::from_columns(vec![
            vec![0.1, 0.7, 0.3, 0.9, 0.4],
            vec![1.0, 0.2, 0.5, 0.8, 0.3],
        ])
        .unwrap();
        let n = 5;
        let w = DMatrix::from_element(n, 1, 1.0 / n as f64);
        let got = weighted_dcov(&dist(&data, &[0]), &dist(&data, &[1]), &w)[0];
        let want = crate::indep::dcov_sq(&data, &[0], &[1]);
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn silverman_in_one_dimension() {
        assert!((silverman_bandwidth(800, 1) - 1.0592 * 800f64.powf(-0.2)).abs() < 1e-3);
    }

    #[test]
    fn bandwidth_must_be_positive() {
        let d = DataMatrix::from_columns(vec![vec![1.0, 2.0, 3.0, 4.0]; 3]).unwrap();
        let p = CdcParams {
            bandwidth: Some(0.0),
        };
        assert!(matches!(
            cdc(&d, &[0], &[1], &[2], p),
            Err(Error::ParamRange(_))
        ));
    }
}
