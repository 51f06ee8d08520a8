//! Qualitative association via the empirical checkerboard copula.

use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, GroupSpec};
use crate::error::{Error, Result};
use crate::measure::{put, MeasureId, MeasureResult};
use crate::ranks::{ordinal_ranks_random, pseudo_obs_columns, TiePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CheckerboardParams {
    /// Grid resolution; `None` means `floor(sqrt(n))`.
    pub resolution: Option<usize>,
}

/// Bits per coordinate when a vector block is folded to one variable.
const MORTON_BITS: u32 = 16;

/// Cell counts of the empirical checkerboard copula at resolution `res`:
/// `mass[a * res + b]` is the number of points whose `x`-rank falls in
/// row cell `a` and `y`-rank in column cell `b`. Ranks are `1..=n`.
fn checkerboard(rx: &[usize], ry: &[usize], res: usize) -> Vec<u64> {
    let n = rx.len();
    let mut mass = vec![0; res * res];
    for (&a, &b) in rx.iter().zip(ry) {
        let ca = (a * res - 1) / n;
        let cb = (b * res - 1) / n;
        mass[ca * res + cb] += 1;
    }
    mass
}

/// `integral_0^1 |F(y) - y| dy` where `F` is piecewise linear with the
/// given values at `b / res`, `b = 0..=res`.
fn l1_to_identity(knots: &[f64]) -> f64 {
    let res = knots.len() - 1;
    let h = 1.0 / res as f64;
    let mut total = 0.0;
    for b in 0..res {
        let g0 = knots[b] - b as f64 / res as f64;
        let g1 = knots[b + 1] - (b + 1) as f64 / res as f64;
        total += if g0 * g1 >= 0.0 {
            h * (g0 + g1).abs() / 2.0
        } else {
            h * (g0 * g0 + g1 * g1) / (2.0 * (g0 - g1).abs())
        };
    }
    total
}

/// `3 * integral integral |K(x, [0, y]) - y| dy dx` for the checkerboard
/// Markov kernel `K` of `mass`, which conditions on the row variable.
fn zeta_rows(mass: &[u64], res: usize) -> f64 {
    let mut d1 = 0.0;
    for a in 0..res {
        let row = &mass[a * res..(a + 1) * res];
        let total: u64 = row.iter().sum();
        let mut knots = Vec::with_capacity(res + 1);
        knots.push(0.0);
        let mut acc = 0;
        for &m in row {
            acc += m;
            knots.push(if total > 0 {
                acc as f64 / total as f64
            } else {
                0.0
            });
        }
        if total == 0 {
            // An empty row carries no mass; treat its kernel as uniform.
            for (b, k) in knots.iter_mut().enumerate() {
                *k = b as f64 / res as f64;
            }
        }
        d1 += l1_to_identity(&knots) / res as f64;
    }
    3.0 * d1
}

/// Returns `(zeta(X -> Y), zeta(Y -> X))` for two rank vectors.
pub(crate) fn zeta_pair(rx: &[usize], ry: &[usize], res: usize) -> (f64, f64) {
    let mass = checkerboard(rx, ry, res);
    let mut transposed = vec![0; res * res];
    for a in 0..res {
        for b in 0..res {
            transposed[b * res + a] = mass[a * res + b];
        }
    }
    (zeta_rows(&mass, res), zeta_rows(&transposed, res))
}

/// Interleaves the leading bits of each coordinate's rank, giving a scalar
/// whose order follows a Z-shaped space-filling curve.
fn morton_codes(u: &DataMatrix) -> Vec<f64> {
    let d = u.ncols() as u32;
    let bits = (MORTON_BITS).min(52 / d);
    let scale = (1u64 << bits) as f64;
    (0..u.nrows())
        .map(|i| {
            let cells: Vec<u64> = (0..u.ncols())
                .map(|c| ((u.get(i, c) * scale) as u64).min((1 << bits) - 1))
                .collect();
            let mut code = 0u64;
            for b in (0..bits).rev() {
                for &cell in &cells {
                    code = (code << 1) | ((cell >> b) & 1);
                }
            }
            code as f64
        })
        .collect()
}

fn block_ranks(data: &DataMatrix, cols: &[usize], seed: u64, stream: u64) -> Result<Vec<usize>> {
    let scalar = if cols.len() == 1 {
        data.column(cols[0]).to_vec()
    } else {
        morton_codes(&pseudo_obs_columns(
            data,
            cols,
            TiePolicy::RandomJitter(seed),
        )?)
    };
    Ok(ordinal_ranks_random(
        &scalar,
        crate::rng::mix_seed(seed, stream),
    ))
}

/// Directed dependence `zeta(X -> Y)`: three times the mean `L1` distance
/// between the checkerboard conditional distribution of `Y` given `X` and
/// the uniform. It is 0 for the product checkerboard and approaches 1 when
/// `Y` is a function of `X`. The reverse direction is stored in
/// `params["zeta_y_to_x"]`.
///
/// A vector block is first reduced to one variable by ordering its
/// pseudo-observations along a Z-order curve.
pub fn qad_zeta(
    data: &DataMatrix,
    groups: &GroupSpec,
    params: CheckerboardParams,
    seed: u64,
) -> Result<MeasureResult> {
    let [x, y] = super::hhg::two_blocks(data, groups)?;
    let n = data.nrows();
    if n < 9 {
        return Err(Error::Shape("QAD needs at least 9 rows".into()));
    }
    let res = params.resolution.unwrap_or((n as f64).sqrt() as usize);
    if res < 2 || res > n {
        return Err(Error::ParamRange(format!(
            "checkerboard resolution {res} outside [2, n]"
        )));
    }
    MeasureResult::timed(MeasureId::Qad, |p| {
        put(p, "resolution", res);
        put(p, "tie_policy", TiePolicy::RandomJitter(seed).label());
        if x.len() > 1 || y.len() > 1 {
            put(p, "vector_reduction", "z-order");
        }
        let rx = block_ranks(data, x, seed, 0)?;
        let ry = block_ranks(data, y, seed, 1)?;
        let (fwd, back) = zeta_pair(&rx, &ry, res);
        put(p, "zeta_y_to_x", back);
        Ok(fwd)
    })
}
