#![allow(dead_code)]

pub mod oracles;

use depmeter::rng::rng;
use depmeter::samplers::{sample, GeneratorKind, GeneratorSpec};
use depmeter::DataMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn normal(cov: Vec<f64>, dim: usize, n: usize, seed: u64) -> DataMatrix {
    sample(&GeneratorSpec {
        kind: GeneratorKind::MvNormal { cov, dim },
        n,
        seed,
    })
    .unwrap()
}

pub fn normal_pair(rho: f64, n: usize, seed: u64) -> DataMatrix {
    normal(vec![1.0, rho, rho, 1.0], 2, n, seed)
}

pub fn uniform_columns(d: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..d)
        .map(|_| (0..n).map(|_| r.random::<f64>()).collect())
        .collect()
}

pub fn from_cols(cols: Vec<Vec<f64>>) -> DataMatrix {
    DataMatrix::from_columns(cols).unwrap()
}

/// Copy of `data` with the rows of `cols` shuffled together.
pub fn permute_columns(data: &DataMatrix, cols: &[usize], seed: u64) -> DataMatrix {
    let mut perm: Vec<usize> = (0..data.nrows()).collect();
    perm.shuffle(&mut rng(seed));
    let columns = (0..data.ncols())
        .map(|c| {
            let col = data.column(c);
            if cols.contains(&c) {
                perm.iter().map(|&i| col[i]).collect()
            } else {
                col.to_vec()
            }
        })
        .collect();
    from_cols(columns)
}

/// Sorted permutation-null values of `stat`, shuffling `cols` independently
/// of the other columns.
pub fn permutation_null(
    data: &DataMatrix,
    cols: &[usize],
    perms: usize,
    seed: u64,
    stat: impl Fn(&DataMatrix) -> f64,
) -> Vec<f64> {
    let mut v: Vec<f64> = (0..perms)
        .map(|p| {
            stat(&permute_columns(
                data,
                cols,
                seed.wrapping_add(p as u64 * 7919),
            ))
        })
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Empirical quantile of a sorted sample (nearest rank).
pub fn q(sorted: &[f64], p: f64) -> f64 {
    let idx = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[idx]
}

/// Shuffles all rows, returning the permuted matrix.
pub fn shuffle_rows(data: &DataMatrix, seed: u64) -> DataMatrix {
    let mut perm: Vec<usize> = (0..data.nrows()).collect();
    perm.shuffle(&mut rng(seed));
    data.select_rows(&perm).unwrap()
}
