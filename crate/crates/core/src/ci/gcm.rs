//! Generalised covariance measure and its weighted variant.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::regress::{residuals, RegressorSpec};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::measure::{put, MeasureId, MeasureResult};
use crate::stats::quantile;

/// Weight functions over `Z` for [`wgcm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WeightFamily {
    /// The single weight `w = 1`; reduces wGCM to `|GCM|`.
    Constant,
    /// The 7 non-constant `±1` patterns over the quartile cells of each
    /// conditioning column (patterns equal up to sign are counted once).
    #[default]
    QuartileSigns,
}

impl WeightFamily {
    /// Number of weight functions per conditioning column.
    pub fn count(&self) -> usize {
        match self {
            WeightFamily::Constant => 1,
            WeightFamily::QuartileSigns => 7,
        }
    }
}

fn normalized_mean(r: &[f64]) -> Result<f64> {
    let n = r.len() as f64;
    let m = r.iter().sum::<f64>() / n;
    let sd = (r.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n).sqrt();
    if !(sd > 0.0) {
        return Err(Error::DegenerateResiduals);
    }
    Ok(n.sqrt() * m / sd)
}

fn residual_products(
    data: &DataMatrix,
    x: usize,
    y: usize,
    z: &[usize],
    reg: RegressorSpec,
) -> Result<Vec<f64>> {
    if data.nrows() < 20 {
        return Err(Error::Shape("GCM needs at least 20 rows".into()));
    }
    let zc: Vec<&[f64]> = z.iter().map(|&c| data.column(c)).collect();
    let ex = residuals(data.column(x), &zc, reg)?;
    let ey = residuals(data.column(y), &zc, reg)?;
    Ok(ex.iter().zip(&ey).map(|(a, b)| a * b).collect())
}

/// `T = sqrt(n) mean(R) / sd(R)` with `R_i` the product of the residuals of
/// `x` and `y` regressed on `z`. Approximately standard normal under
/// conditional independence.
pub fn gcm(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    reg: RegressorSpec,
) -> Result<MeasureResult> {
    let (x, y) = super::scalar_pair(data, x, y, z)?;
    MeasureResult::timed(MeasureId::Gcm, |p| {
        put(p, "regressor", reg.label());
        let r = residual_products(data, x, y, z, reg)?;
        let t = normalized_mean(&r)?;
        put(p, "p_value", 2.0 * (1.0 - Normal::standard().cdf(t.abs())));
        Ok(t)
    })
}

/// Sign of quartile cell `q` under pattern `m` in `1..=7`: bit `q` of `m`
/// flips the sign, with cell 3 always positive.
fn pattern_sign(m: usize, q: usize) -> f64 {
    if (m >> q) & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Quartile cell (0..4) of every entry of `col`.
fn quartile_cells(col: &[f64]) -> Vec<usize> {
    let cuts = [quantile(col, 0.25), quantile(col, 0.5), quantile(col, 0.75)];
    col.iter()
        .map(|&v| cuts.iter().filter(|&&c| v > c).count())
        .collect()
}

/// Weighted GCM: `max_w |sqrt(n) mean(w(Z) R) / sd(w(Z) R)|` over a family
/// of weight functions. `params["p_value"]` is the Bonferroni-adjusted
/// two-sided normal p-value of the maximum.
pub fn wgcm(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    reg: RegressorSpec,
    weights: WeightFamily,
) -> Result<MeasureResult> {
    let (x, y) = super::scalar_pair(data, x, y, z)?;
    MeasureResult::timed(MeasureId::Wgcm, |p| {
        put(p, "regressor", reg.label());
        put(p, "weights", weights);
        let r = residual_products(data, x, y, z, reg)?;
        let mut best: f64 = 0.0;
        let mut tests = 0;
        match weights {
            WeightFamily::Constant => {
                best = normalized_mean(&r)?.abs();
                tests = 1;
            }
            WeightFamily::QuartileSigns => {
                for &zc in z {
                    let cells = quartile_cells(data.column(zc));
                    for m in 1..=7 {
                        let wr: Vec<f64> = r
                            .iter()
                            .zip(&cells)
                            .map(|(v, &q)| v * pattern_sign(m, q))
                            .collect();
                        best = best.max(normalized_mean(&wr)?.abs());
                        tests += 1;
                    }
                }
            }
        }
        let pv = (tests as f64 * 2.0 * (1.0 - Normal::standard().cdf(best))).min(1.0);
        put(p, "p_value", pv);
        Ok(best)
    })
}
