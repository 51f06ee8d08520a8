//! Conditional CODEC coefficient `T_n(Y, X | Z)` from nearest neighbors.

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::knn::{KnnIndex, Metric};
use crate::measure::{put, MeasureId, MeasureResult};
use crate::ranks::{max_ranks, ranks, TiePolicy};
use crate::rng::mix_seed;

/// Integer ranks of the listed columns with seeded random tie-breaking,
/// as a row-major point set.
fn rank_points(data: &DataMatrix, cols: &[usize], seed: u64) -> Vec<f64> {
    let r: Vec<Vec<f64>> = cols
        .iter()
        .map(|&c| ranks(data.column(c), TiePolicy::RandomJitter(seed), c as u64))
        .collect();
    (0..data.nrows())
        .flat_map(|i| r.iter().map(move |col| col[i]))
        .collect()
}

/// Index of the nearest other point for each row. Rank coordinates make
/// equal distances exactly equal; such ties go to the candidate with the
/// smallest seeded key, a hash of its rank tuple, so the choice moves with
/// the row under any reordering.
fn nearest_neighbors(points: Vec<f64>, dim: usize, seed: u64) -> Vec<usize> {
    let n = points.len() / dim;
    let keys: Vec<u64> = points
        .chunks(dim)
        .map(|row| row.iter().fold(seed, |h, &v| mix_seed(h, v as u64)))
        .collect();
    let index = KnnIndex::new(points, dim, Metric::Euclidean);
    (0..n)
        .map(|i| {
            let mut k = 2.min(n - 1);
            loop {
                let nb = index.knn(index.point(i), k, Some(i));
                let best = nb[0].0;
                if k == n - 1 || nb[k - 1].0 > best {
                    return nb
                        .iter()
                        .take_while(|c| c.0 == best)
                        .min_by_key(|c| keys[c.1])
                        .expect("at least one neighbor")
                        .1;
                }
                k = (2 * k).min(n - 1);
            }
        })
        .collect()
}

/// The coefficient given explicit neighbor maps: `n_z[i]` is the nearest
/// neighbor of `i` in `Z` space and `m_xz[i]` in `(X, Z)` space; `r` holds
/// the ranks `#{j : Y_j <= Y_i}`.
fn codec_ci_from_neighbors(r: &[usize], n_z: &[usize], m_xz: &[usize]) -> Result<f64> {
    let mut num = 0i64;
    let mut den = 0i64;
    for i in 0..r.len() {
        let ri = r[i] as i64;
        let low = ri.min(r[n_z[i]] as i64);
        num += ri.min(r[m_xz[i]] as i64) - low;
        den += ri - low;
    }
    if den == 0 {
        return Err(Error::DegenerateRanks);
    }
    Ok(num as f64 / den as f64)
}

/// `T_n(Y, X | Z) = sum_i (min(r_i, r_M(i)) - min(r_i, r_N(i))) /
/// sum_i (r_i - min(r_i, r_N(i)))`.
///
/// Neighbors are Euclidean in the space of column ranks, with tied values
/// ranked in seeded random order.
pub fn codec_ci(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    seed: u64,
) -> Result<MeasureResult> {
    let y = super::scalar_y(data, x, y, z)?;
    if data.nrows() < 3 {
        return Err(Error::Shape(
            "conditional CODEC needs at least 3 rows".into(),
        ));
    }
    MeasureResult::timed(MeasureId::CodecCi, |p| {
        put(p, "tie_policy", TiePolicy::RandomJitter(seed).label());
        let xz: Vec<usize> = x.iter().chain(z).copied().collect();
        let n_z = nearest_neighbors(rank_points(data, z, seed), z.len(), seed);
        let m_xz = nearest_neighbors(rank_points(data, &xz, seed), xz.len(), seed);
        let r = max_ranks(data.column(y));
        codec_ci_from_neighbors(&r, &n_z, &m_xz)
    })
}
