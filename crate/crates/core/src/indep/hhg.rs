//! Heller–Heller–Gorfine statistics and ball covariance.
//!
//! Both are built from, for each centre `i` and radius point `j`, the
//! number of points `k` whose distance to `i` is at most `d(i, j)` in each
//! space and in both at once.

use serde::{Deserialize, Serialize};

use super::distances::DistanceMatrix;
use crate::data::{DataMatrix, GroupSpec};
use crate::error::{Error, Result};
use crate::measure::{put, MeasureId, MeasureResult};
use crate::ranks::average_ranks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HhgScore {
    ChiSq,
    LikelihoodRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HhgParams {
    pub score: HhgScore,
    /// Replace each column by its ranks before taking distances, which
    /// makes the statistic invariant to monotone transforms.
    pub on_ranks: bool,
}

impl HhgParams {
    pub fn new(score: HhgScore) -> Self {
        Self {
            score,
            on_ranks: false,
        }
    }
}

/// Fenwick tree over `0..n` counting inserted positions.
struct Fenwick(Vec<u32>);

impl Fenwick {
    fn new(n: usize) -> Self {
        Self(vec![0; n + 1])
    }

    fn add(&mut self, pos: usize) {
        let mut i = pos + 1;
        while i < self.0.len() {
            self.0[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Number of inserted positions `<= pos`.
    fn prefix(&self, pos: usize) -> u32 {
        let mut i = pos + 1;
        let mut s = 0;
        while i > 0 {
            s += self.0[i];
            i &= i - 1;
        }
        s
    }
}

/// Per-radius counts around one centre, each including the centre itself
/// and the radius point.
pub(crate) struct BallCounts {
    /// `#{k : a_k <= a_j}`.
    pub rx: Vec<u32>,
    /// `#{k : b_k <= b_j}`.
    pub ry: Vec<u32>,
    /// `#{k : a_k <= a_j and b_k <= b_j}`.
    pub both: Vec<u32>,
}

/// Dominance counts for two distance rows in `O(n log n)`.
pub(crate) fn ball_counts(a: &[f64], b: &[f64]) -> BallCounts {
    let n = a.len();
    let mut by_b: Vec<usize> = (0..n).collect();
    by_b.sort_by(|&p, &q| b[p].total_cmp(&b[q]));
    // Dense ranks of b plus #{k : b_k <= b_j}.
    let mut b_rank = vec![0usize; n];
    let mut ry = vec![0u32; n];
    let mut start = 0;
    let mut dense = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && b[by_b[end + 1]] == b[by_b[start]] {
            end += 1;
        }
        for &k in &by_b[start..=end] {
            b_rank[k] = dense;
            ry[k] = (end + 1) as u32;
        }
        dense += 1;
        start = end + 1;
    }
    let mut by_a: Vec<usize> = (0..n).collect();
    by_a.sort_by(|&p, &q| a[p].total_cmp(&a[q]));
    let mut tree = Fenwick::new(dense);
    let mut rx = vec![0u32; n];
    let mut both = vec![0u32; n];
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && a[by_a[end + 1]] == a[by_a[start]] {
            end += 1;
        }
        for &k in &by_a[start..=end] {
            tree.add(b_rank[k]);
        }
        for &k in &by_a[start..=end] {
            rx[k] = (end + 1) as u32;
            both[k] = tree.prefix(b_rank[k]);
        }
        start = end + 1;
    }
    BallCounts { rx, ry, both }
}

/// Score of the 2x2 table `[[a11, a12], [a21, a22]]`; cells with zero
/// expected count contribute nothing.
fn table_score(score: HhgScore, a11: u32, a12: u32, a21: u32, a22: u32) -> f64 {
    let total = (a11 + a12 + a21 + a22) as f64;
    if total == 0.0 {
        return 0.0;
    }
    let rows = [(a11 + a12) as f64, (a21 + a22) as f64];
    let cols = [(a11 + a21) as f64, (a12 + a22) as f64];
    let obs = [[a11 as f64, a12 as f64], [a21 as f64, a22 as f64]];
    let mut s = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let e = rows[r] * cols[c] / total;
            if e <= 0.0 {
                continue;
            }
            let o = obs[r][c];
            s += match score {
                HhgScore::ChiSq => (o - e) * (o - e) / e,
                HhgScore::LikelihoodRatio if o > 0.0 => o * (o / e).ln(),
                HhgScore::LikelihoodRatio => 0.0,
            };
        }
    }
    s
}

/// HHG statistic from two distance matrices using dominance counting,
/// `O(n^2 log n)`.
pub fn hhg_from_distances(dx: &DistanceMatrix, dy: &DistanceMatrix, score: HhgScore) -> f64 {
    let n = dx.len();
    let mut total = 0.0;
    for i in 0..n {
        let c = ball_counts(dx.row(i), dy.row(i));
        for j in (0..n).filter(|&j| j != i) {
            // Centre and radius point always fall in the (<=, <=) cell.
            let a11 = c.both[j] - 2;
            let row = c.rx[j] - 2;
            let col = c.ry[j] - 2;
            let rest = (n - 2) as u32;
            total += table_score(score, a11, row - a11, col - a11, rest + a11 - row - col);
        }
    }
    total
}

/// Direct `O(n^3)` evaluation of [`hhg_from_distances`].
pub fn hhg_reference(dx: &DistanceMatrix, dy: &DistanceMatrix, score: HhgScore) -> f64 {
    let n = dx.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let mut t = [[0u32; 2]; 2];
            for k in (0..n).filter(|&k| k != i && k != j) {
                let r = usize::from(dx.get(i, k) > dx.get(i, j));
                let c = usize::from(dy.get(i, k) > dy.get(i, j));
                t[r][c] += 1;
            }
            total += table_score(score, t[0][0], t[0][1], t[1][0], t[1][1]);
        }
    }
    total
}

fn block_distances(data: &DataMatrix, cols: &[usize], on_ranks: bool) -> Result<DistanceMatrix> {
    if on_ranks {
        let ranked: Vec<Vec<f64>> = cols
            .iter()
            .map(|&c| average_ranks(data.column(c)))
            .collect();
        let m = DataMatrix::from_columns(ranked)?;
        let all: Vec<usize> = (0..cols.len()).collect();
        Ok(DistanceMatrix::euclidean(&m, &all))
    } else {
        Ok(DistanceMatrix::euclidean(data, cols))
    }
}

/// HHG statistic between two blocks: for each ordered pair `(i, j)` the
/// other points are split by `d_x(i,k) <= d_x(i,j)` and
/// `d_y(i,k) <= d_y(i,j)`, and the 2x2 table scores are summed.
pub fn hhg(data: &DataMatrix, groups: &GroupSpec, params: HhgParams) -> Result<MeasureResult> {
    let [x, y] = two_blocks(data, groups)?;
    if data.nrows() < 4 {
        return Err(Error::Shape("HHG needs at least 4 rows".into()));
    }
    let id = match params.score {
        HhgScore::ChiSq => MeasureId::HhgChisq,
        HhgScore::LikelihoodRatio => MeasureId::HhgLr,
    };
    MeasureResult::timed(id, |p| {
        put(p, "score", params.score);
        if params.on_ranks {
            put(p, "on_ranks", true);
        }
        let dx = block_distances(data, x, params.on_ranks)?;
        let dy = block_distances(data, y, params.on_ranks)?;
        Ok(hhg_from_distances(&dx, &dy, params.score))
    })
}

pub(crate) fn two_blocks<'a>(data: &DataMatrix, groups: &'a GroupSpec) -> Result<[&'a [usize]; 2]> {
    groups.validate_for(data)?;
    match groups.blocks() {
        [x, y] => Ok([x.as_slice(), y.as_slice()]),
        b => Err(Error::Capability(format!(
            "expected 2 blocks, got {}",
            b.len()
        ))),
    }
}

/// Ball covariance
/// `(1/n^2) sum_{i,j} (P_ij^joint - prod_g P_ij^g)^2`, where `P_ij^g` is the
/// fraction of points within block-distance `d_g(i, j)` of point `i`.
pub fn ball_cov(data: &DataMatrix, groups: &GroupSpec) -> Result<MeasureResult> {
    groups.validate_for(data)?;
    if groups.len() < 2 {
        return Err(Error::Capability(
            "ball covariance needs at least 2 blocks".into(),
        ));
    }
    MeasureResult::timed(MeasureId::Ball, |p| {
        put(p, "blocks", groups.len());
        let ds: Vec<DistanceMatrix> = groups
            .blocks()
            .iter()
            .map(|b| DistanceMatrix::euclidean(data, b))
            .collect();
        Ok(if ds.len() == 2 {
            ball_cov_pair(&ds[0], &ds[1])
        } else {
            ball_cov_reference(&ds)
        })
    })
}

fn ball_cov_pair(dx: &DistanceMatrix, dy: &DistanceMatrix) -> f64 {
    let n = dx.len();
    let nf = n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let c = ball_counts(dx.row(i), dy.row(i));
        for j in 0..n {
            let diff = c.both[j] as f64 / nf - (c.rx[j] as f64 / nf) * (c.ry[j] as f64 / nf);
            acc += diff * diff;
        }
    }
    acc / (nf * nf)
}

/// Triple-loop ball covariance for any number of blocks.
pub fn ball_cov_reference(ds: &[DistanceMatrix]) -> f64 {
    let n = ds[0].len();
    let nf = n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut joint = 0u32;
            let mut marg = vec![0u32; ds.len()];
            for k in 0..n {
                let mut all = true;
                for (g, d) in ds.iter().enumerate() {
                    if d.get(i, k) <= d.get(i, j) {
                        marg[g] += 1;
                    } else {
                        all = false;
                    }
                }
                joint += u32::from(all);
            }
            let prod: f64 = marg.iter().map(|&m| m as f64 / nf).product();
            let diff = joint as f64 / nf - prod;
            acc += diff * diff;
        }
    }
    acc / (nf * nf)
}
