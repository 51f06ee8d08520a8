//! Binary expansion testing.
//!
//! Each pseudo-observation `u` is expanded into its first `depth` binary
//! digits, recoded as `±1`. A binary interaction of a block is the product
//! of a nonempty subset of the digits of its columns. For every choice of
//! one interaction per block (at least two blocks nontrivial) the symmetry
//! statistic compares the mean of the product with the product of the
//! means; the largest absolute value is returned.

use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, GroupSpec};
use crate::error::{Error, Result};
use crate::measure::{put, MeasureId, MeasureResult};
use crate::ranks::{pseudo_obs_columns, TiePolicy};

/// Upper bound on the number of interaction combinations evaluated.
const MAX_COMBINATIONS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetParams {
    pub depth: u32,
}

impl Default for BetParams {
    fn default() -> Self {
        Self { depth: 3 }
    }
}

/// Per-observation digit pattern of one block: bit `c * depth + k` is the
/// `k`-th binary digit of column `c`.
fn block_keys(u: &DataMatrix, cols: std::ops::Range<usize>, depth: u32) -> Vec<u64> {
    let scale = (1u64 << depth) as f64;
    (0..u.nrows())
        .map(|i| {
            cols.clone().enumerate().fold(0u64, |key, (c, col)| {
                let cell = ((u.get(i, col) * scale) as u64).min((1 << depth) - 1);
                key | (cell << (c as u32 * depth))
            })
        })
        .collect()
}

/// `+1` when the masked digits contain an even number of zeros.
#[inline]
fn interaction(key: u64, mask: u64) -> f64 {
    let zeros = mask.count_ones() - (key & mask).count_ones();
    if zeros.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Maximum symmetry statistic over depth-bounded binary interactions,
/// normalized by `n` so it lies in `[0, 1]`.
///
/// Ranks use random tie-breaking keyed by `seed`. Bivariate data with
/// single-column blocks gives the classical statistic `max |sum_i A_i B_i| / n`.
pub fn bet(
    data: &DataMatrix,
    groups: &GroupSpec,
    params: BetParams,
    seed: u64,
) -> Result<MeasureResult> {
    groups.validate_for(data)?;
    if groups.len() < 2 {
        return Err(Error::Capability("BET needs at least 2 blocks".into()));
    }
    let n = data.nrows();
    if params.depth == 0 || (n as f64) < 4f64.powi(params.depth as i32) {
        return Err(Error::ParamRange(format!(
            "depth {} needs n >= 4^depth, have n = {n}",
            params.depth
        )));
    }
    let bits: Vec<u32> = groups
        .blocks()
        .iter()
        .map(|b| b.len() as u32 * params.depth)
        .collect();
    if bits.iter().any(|&b| b > 20) {
        return Err(Error::ParamRange("too many binary digits per block".into()));
    }
    let combos: f64 = bits.iter().map(|&b| 2f64.powi(b as i32)).product();
    if combos > MAX_COMBINATIONS as f64 {
        return Err(Error::ParamRange(format!(
            "{combos} interaction combinations is too many"
        )));
    }
    MeasureResult::timed(MeasureId::Bet, |p| {
        put(p, "depth", params.depth);
        put(p, "tie_policy", TiePolicy::RandomJitter(seed).label());
        let cols = groups.columns();
        let u = pseudo_obs_columns(data, &cols, TiePolicy::RandomJitter(seed))?;
        let mut keys = Vec::new();
        let mut offset = 0;
        for b in groups.blocks() {
            keys.push(block_keys(&u, offset..offset + b.len(), params.depth));
            offset += b.len();
        }
        Ok(max_symmetry(&keys, &bits, n))
    })
}

fn max_symmetry(keys: &[Vec<u64>], bits: &[u32], n: usize) -> f64 {
    let g = keys.len();
    let nf = n as f64;
    // Collapse observations to joint cells; statistics only depend on counts.
    let mut cells: std::collections::BTreeMap<Vec<u64>, f64> = std::collections::BTreeMap::new();
    for i in 0..n {
        *cells
            .entry(keys.iter().map(|k| k[i]).collect())
            .or_default() += 1.0;
    }
    let cells: Vec<(Vec<u64>, f64)> = cells.into_iter().collect();
    let mut masks = vec![0u64; g];
    let mut best: f64 = 0.0;
    loop {
        if masks.iter().filter(|&&m| m != 0).count() >= 2 {
            let mut joint = 0.0;
            let mut marg = vec![0.0; g];
            for (key, count) in &cells {
                let mut prod = 1.0;
                for b in 0..g {
                    let a = interaction(key[b], masks[b]);
                    marg[b] += count * a;
                    prod *= a;
                }
                joint += count * prod;
            }
            let stat = joint / nf - marg.iter().map(|m| m / nf).product::<f64>();
            best = best.max(stat.abs());
        }
        // Odometer over all mask tuples.
        let mut b = 0;
        loop {
            if b == g {
                return best;
            }
            masks[b] += 1;
            if masks[b] < (1u64 << bits[b]) {
                break;
            }
            masks[b] = 0;
            b += 1;
        }
    }
}
