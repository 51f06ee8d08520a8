//! Kendall's tau, Hoeffding's D, Bergsma–Dassios tau* and Chatterjee's xi.

use rand::Rng;

use super::two_columns;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::measure::{put, MeasureId, MeasureResult};
use crate::ranks::{average_ranks, max_ranks, ordinal_ranks_random, TiePolicy};
use crate::rng::rng;

/// Default number of random 4-tuples for [`bergsma_dassios`].
pub const BD_TUPLES: usize = 1_000_000;

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Kendall's tau-a: `sum_{i<j} s(x_i - x_j) s(y_i - y_j) / (n(n-1)/2)`.
///
/// Tied pairs contribute zero. This is `n/(n-1)` times the `1/n^2` form.
pub fn kendall_tau(data: &DataMatrix) -> Result<MeasureResult> {
    let (x, y) = two_columns(data)?;
    MeasureResult::timed(MeasureId::Ktau, |p| {
        put(p, "normalization", "n(n-1)/2");
        Ok(kendall_tau_a(x, y))
    })
}

pub(crate) fn kendall_tau_a(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += sign(x[i] - x[j]) * sign(y[i] - y[j]);
        }
    }
    s / (n * (n - 1) / 2) as f64
}

/// Plug-in Hoeffding statistic
/// `(1/n) sum_i (F_XY(x_i, y_i) - F_X(x_i) F_Y(y_i))^2` with empirical CDFs.
pub fn hoeffding_d(data: &DataMatrix) -> Result<MeasureResult> {
    let (x, y) = two_columns(data)?;
    MeasureResult::timed(MeasureId::Hoeff, |_| Ok(hoeffding_plugin(x, y)))
}

fn hoeffding_plugin(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let fx = max_ranks(x);
    let fy = max_ranks(y);
    let mut acc = 0.0;
    for i in 0..n {
        let joint = (0..n).filter(|&k| x[k] <= x[i] && y[k] <= y[i]).count() as f64 / nf;
        let d = joint - (fx[i] as f64 / nf) * (fy[i] as f64 / nf);
        acc += d * d;
    }
    acc / nf
}

/// Kernel `a(z1,z2,z3,z4) = sign(|z1-z2| + |z3-z4| - |z1-z3| - |z2-z4|)` on
/// doubled average ranks, so the arithmetic is exact.
#[inline]
fn bd_kernel(z: &[i64], i: usize, j: usize, k: usize, l: usize) -> i64 {
    ((z[i] - z[j]).abs() + (z[k] - z[l]).abs() - (z[i] - z[k]).abs() - (z[j] - z[l]).abs()).signum()
}

fn doubled_ranks(col: &[f64]) -> Vec<i64> {
    average_ranks(col)
        .into_iter()
        .map(|r| (2.0 * r) as i64)
        .collect()
}

/// Bergsma–Dassios tau* as an incomplete V-statistic: the average of
/// `a(x-tuple) a(y-tuple)` over `m` 4-tuples of row indices drawn
/// uniformly with replacement.
pub fn bergsma_dassios(data: &DataMatrix, m: usize, seed: u64) -> Result<MeasureResult> {
    let (x, y) = two_columns(data)?;
    if data.nrows() < 4 {
        return Err(Error::Shape("tau* needs at least 4 rows".into()));
    }
    if m < 10_000 {
        return Err(Error::ParamRange(format!(
            "m = {m} tuples; need at least 10^4"
        )));
    }
    MeasureResult::timed(MeasureId::BDtau, |p| {
        put(p, "tuples", m);
        put(p, "seed", seed);
        let (zx, zy) = (doubled_ranks(x), doubled_ranks(y));
        let n = x.len();
        let mut r = rng(seed);
        let mut acc: i64 = 0;
        for _ in 0..m {
            let i = r.random_range(0..n);
            let j = r.random_range(0..n);
            let k = r.random_range(0..n);
            let l = r.random_range(0..n);
            acc += bd_kernel(&zx, i, j, k, l) * bd_kernel(&zy, i, j, k, l);
        }
        Ok(acc as f64 / m as f64)
    })
}

/// The full `(1/n^4)` sum behind [`bergsma_dassios`]; `O(n^4)`, for small
/// samples only.
pub fn bergsma_dassios_exact(x: &[f64], y: &[f64]) -> f64 {
    let (zx, zy) = (doubled_ranks(x), doubled_ranks(y));
    let n = x.len();
    let mut acc: i64 = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    acc += bd_kernel(&zx, i, j, k, l) * bd_kernel(&zy, i, j, k, l);
                }
            }
        }
    }
    acc as f64 / (n as f64).powi(4)
}

/// Chatterjee's rank correlation `xi_n(X, Y) = 1 - 3 sum |r_{i+1} - r_i| / (n^2 - 1)`
/// where rows are sorted by `x` and `r_i = #{j : y_j <= y_(i)}`.
///
/// Ties in `x` are broken with seeded random keys. The statistic measures
/// how well `y` is determined by `x`, not the reverse.
pub fn codec_xi(data: &DataMatrix, seed: u64) -> Result<MeasureResult> {
    let (x, y) = two_columns(data)?;
    MeasureResult::timed(MeasureId::Codec, |p| {
        put(p, "x_tie_policy", TiePolicy::RandomJitter(seed).label());
        Ok(xi_n(x, y, seed))
    })
}

pub(crate) fn xi_n(x: &[f64], y: &[f64], seed: u64) -> f64 {
    let n = x.len();
    let rx = ordinal_ranks_random(x, seed);
    let mut order = vec![0; n];
    for (i, &r) in rx.iter().enumerate() {
        order[r - 1] = i;
    }
    let ry = max_ranks(y);
    let total: usize = order.windows(2).map(|w| ry[w[1]].abs_diff(ry[w[0]])).sum();
    let nf = n as f64;
    1.0 - 3.0 * total as f64 / (nf * nf - 1.0)
}
