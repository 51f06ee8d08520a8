//! Rank transforms and pseudo-observations.

use rand::Rng as _;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::rng::{mix_seed, rng};

/// How ties are resolved when ranking a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TiePolicy {
    /// Tied values share the mean of their ranks.
    AverageRank,
    /// Ties are broken uniformly at random. Equivalent to adding noise
    /// smaller than the smallest nonzero gap before ranking.
    RandomJitter(u64),
}

impl TiePolicy {
    pub fn label(&self) -> String {
        match self {
            TiePolicy::AverageRank => "average".into(),
            TiePolicy::RandomJitter(seed) => format!("jitter:{seed}"),
        }
    }
}

/// Empirical-copula points `(rank - 0.5) / n`, strictly inside the unit cube.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoObs {
    u: DataMatrix,
    tie_policy: TiePolicy,
}

impl PseudoObs {
    pub fn values(&self) -> &DataMatrix {
        &self.u
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    pub fn column(&self, c: usize) -> &[f64] {
        self.u.column(c)
    }

    pub fn nrows(&self) -> usize {
        self.u.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.u.ncols()
    }

    pub fn into_matrix(self) -> DataMatrix {
        self.u
    }
}

/// Ranks a column, returning 1-based (possibly fractional) ranks.
pub fn ranks(col: &[f64], policy: TiePolicy, stream: u64) -> Vec<f64> {
    match policy {
        TiePolicy::AverageRank => average_ranks(col),
        TiePolicy::RandomJitter(seed) => ordinal_ranks_random(col, mix_seed(seed, stream))
            .into_iter()
            .map(|r| r as f64)
            .collect(),
    }
}

/// Average ranks (1-based); tied values share the mean rank.
pub fn average_ranks(col: &[f64]) -> Vec<f64> {
    let n = col.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && col[idx[j + 1]] == col[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Ordinal ranks (1-based) with ties broken by seeded random keys.
pub fn ordinal_ranks_random(col: &[f64], seed: u64) -> Vec<usize> {
    let mut r = rng(seed);
    let keys: Vec<u64> = (0..col.len()).map(|_| r.random()).collect();
    let mut idx: Vec<usize> = (0..col.len()).collect();
    idx.sort_by(|&a, &b| col[a].total_cmp(&col[b]).then(keys[a].cmp(&keys[b])));
    let mut out = vec![0; col.len()];
    for (pos, &k) in idx.iter().enumerate() {
        out[k] = pos + 1;
    }
    out
}

/// `#{j : col[j] <= col[i]}` for every `i` (the "max" rank).
pub fn max_ranks(col: &[f64]) -> Vec<usize> {
    let n = col.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
    let mut out = vec![0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && col[idx[j + 1]] == col[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..=j] {
            out[k] = j + 1;
        }
        i = j + 1;
    }
    out
}

/// Computes pseudo-observations column by column.
///
/// Under [`TiePolicy::AverageRank`] a constant column is rejected. Under
/// [`TiePolicy::RandomJitter`] each column gets its own key stream derived
/// from the seed and the column index, so results do not depend on which
/// other columns are present.
pub fn make_pseudo_obs(data: &DataMatrix, policy: TiePolicy) -> Result<PseudoObs> {
    let n = data.nrows();
    let mut values = Vec::with_capacity(n * data.ncols());
    for c in 0..data.ncols() {
        let col = data.column(c);
        if policy == TiePolicy::AverageRank && col.iter().all(|&v| v == col[0]) {
            return Err(Error::ConstantColumn { column: c });
        }
        values.extend(
            ranks(col, policy, c as u64)
                .into_iter()
                .map(|r| (r - 0.5) / n as f64),
        );
    }
    let mut u = DataMatrix::from_col_major(n, data.ncols(), values)?;
    if let Some(names) = data.column_names() {
        u = u.with_column_names(names.to_vec())?;
    }
    Ok(PseudoObs {
        u,
        tie_policy: policy,
    })
}

/// Pseudo-observations for a column subset, keyed by the original column
/// indices so jitter streams match those of the full matrix.
pub fn pseudo_obs_columns(
    data: &DataMatrix,
    cols: &[usize],
    policy: TiePolicy,
) -> Result<DataMatrix> {
    let n = data.nrows();
    let mut values = Vec::with_capacity(n * cols.len());
    for &c in cols {
        let col = data.column(c);
        if policy == TiePolicy::AverageRank && col.iter().all(|&v| v == col[0]) {
            return Err(Error::ConstantColumn { column: c });
        }
        values.extend(
            ranks(col, policy, c as u64)
                .into_iter()
                .map(|r| (r - 0.5) / n as f64),
        );
    }
    DataMatrix::from_col_major(n, cols.len(), values)
}
