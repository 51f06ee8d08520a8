//! Conditional mutual information estimators built on neighbor counts.

use rand::Rng;
use statrs::function::gamma::digamma;

use super::entropy::{copula_entropy_of, EntropyParams};
use super::index::{Metric, Searcher};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::rng::{mix_seed, rng};
use crate::stats::standardize;

/// Relative jitter amplitude applied to every column before KSG counting.
pub const JITTER_SCALE: f64 = 1e-10;

pub(crate) fn check_roles(data: &DataMatrix, x: &[usize], y: &[usize], z: &[usize]) -> Result<()> {
    if x.is_empty() || y.is_empty() || z.is_empty() {
        return Err(Error::Shape(
            "x, y and z column sets must be nonempty".into(),
        ));
    }
    let mut all: Vec<usize> = x.iter().chain(y).chain(z).copied().collect();
    if let Some(&c) = all.iter().find(|&&c| c >= data.ncols()) {
        return Err(Error::Shape(format!("column {c} out of range")));
    }
    all.sort_unstable();
    all.dedup();
    if all.len() != x.len() + y.len() + z.len() {
        return Err(Error::Shape(
            "x, y and z column sets must be disjoint".into(),
        ));
    }
    Ok(())
}

/// Standardizes each used column; with `jitter_seed`, adds uniform noise of
/// amplitude `JITTER_SCALE * range` keyed by the column index.
fn prepare(data: &DataMatrix, cols: &[usize], jitter_seed: Option<u64>) -> Vec<Vec<f64>> {
    cols.iter()
        .map(|&c| {
            let mut v = standardize(data.column(c));
            if let Some(seed) = jitter_seed {
                let (mn, mx) = v
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
                        (a.min(x), b.max(x))
                    });
                let amp = JITTER_SCALE * (mx - mn).max(f64::MIN_POSITIVE);
                let mut r = rng(mix_seed(seed, c as u64));
                for x in &mut v {
                    *x += amp * r.random::<f64>();
                }
            }
            v
        })
        .collect()
}

struct Spaces {
    joint: Searcher,
    z: Searcher,
    xz: Searcher,
    yz: Searcher,
}

fn spaces(cols: &[Vec<f64>], nx: usize, ny: usize, params: EntropyParams) -> Spaces {
    let all: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
    let (xs, rest) = all.split_at(nx);
    let (ys, zs) = rest.split_at(ny);
    let xz: Vec<&[f64]> = xs.iter().chain(zs).copied().collect();
    let yz: Vec<&[f64]> = ys.iter().chain(zs).copied().collect();
    let metric = Metric::Chebyshev;
    Spaces {
        joint: Searcher::build(&all, metric, params.search),
        z: Searcher::build(zs, metric, params.search),
        xz: Searcher::build(&xz, metric, params.search),
        yz: Searcher::build(&yz, metric, params.search),
    }
}

/// KSG / Frenzel–Pompe conditional mutual information (nats):
/// `psi(k) + mean_i [psi(k_Z) - psi(k_XZ) - psi(k_YZ)]`, where the counts
/// include point `i` and every point strictly closer than the distance
/// `eps_i` to its k-th neighbor in the joint max-norm space.
///
/// Columns are standardized and jittered (`seed`) before counting.
pub fn cmi_ksg(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    params: EntropyParams,
    seed: u64,
) -> Result<f64> {
    check_roles(data, x, y, z)?;
    let n = data.nrows();
    if params.k == 0 || params.k >= n {
        return Err(Error::ParamRange(format!(
            "k = {} needs 0 < k < n = {n}",
            params.k
        )));
    }
    let order: Vec<usize> = x.iter().chain(y).chain(z).copied().collect();
    let cols = prepare(data, &order, Some(seed));
    let s = spaces(&cols, x.len(), y.len(), params);
    let mut acc = 0.0;
    for i in 0..n {
        let eps = s.joint.kth_distance(i, params.k);
        if eps <= 0.0 {
            return Err(Error::DegenerateGeometry(format!(
                "zero neighbor distance at row {i}"
            )));
        }
        let kz = 1 + s.z.count_within(i, eps, true);
        let kxz = 1 + s.xz.count_within(i, eps, true);
        let kyz = 1 + s.yz.count_within(i, eps, true);
        acc += digamma(kz as f64) - (digamma(kxz as f64) + digamma(kyz as f64));
    }
    Ok(digamma(params.k as f64) + acc / n as f64)
}

/// Conditional mutual information for mixed discrete/continuous data.
///
/// Where the k-th neighbor distance `rho_i` is positive the KSG counts are
/// used unchanged, so on continuous data this agrees with [`cmi_ksg`].
/// Where `rho_i = 0` (the point sits on an atom), `k` is replaced by the
/// number of other points at distance zero and each marginal count by the
/// number of other points at distance zero in that subspace.
pub fn cmi_mixed(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    params: EntropyParams,
) -> Result<f64> {
    check_roles(data, x, y, z)?;
    let n = data.nrows();
    if params.k == 0 || params.k >= n {
        return Err(Error::ParamRange(format!(
            "k = {} needs 0 < k < n = {n}",
            params.k
        )));
    }
    let order: Vec<usize> = x.iter().chain(y).chain(z).copied().collect();
    let cols = prepare(data, &order, None);
    let s = spaces(&cols, x.len(), y.len(), params);
    let mut acc = 0.0;
    for i in 0..n {
        let rho = s.joint.kth_distance(i, params.k);
        if rho > 0.0 {
            let kz = 1 + s.z.count_within(i, rho, true);
            let kxz = 1 + s.xz.count_within(i, rho, true);
            let kyz = 1 + s.yz.count_within(i, rho, true);
            acc += digamma(params.k as f64) + digamma(kz as f64)
                - (digamma(kxz as f64) + digamma(kyz as f64));
        } else {
            let k_tilde = s.joint.count_within(i, 0.0, false);
            let nz = s.z.count_within(i, 0.0, false);
            let nxz = s.xz.count_within(i, 0.0, false);
            let nyz = s.yz.count_within(i, 0.0, false);
            acc += digamma(k_tilde as f64) + digamma(nz as f64)
                - (digamma(nxz as f64) + digamma(nyz as f64));
        }
    }
    Ok(acc / n as f64)
}

/// Conditional independence through copula entropy alone:
/// `H_c(x, z) + H_c(y, z) - H_c(x, y, z)`.
///
/// All three terms share one set of jittered ranks. The combination is
/// the conditional mutual information when `z` is a single column.
pub fn ce_ci(
    data: &DataMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    params: EntropyParams,
    seed: u64,
) -> Result<f64> {
    check_roles(data, x, y, z)?;
    let xz: Vec<usize> = x.iter().chain(z).copied().collect();
    let yz: Vec<usize> = y.iter().chain(z).copied().collect();
    let xyz: Vec<usize> = x.iter().chain(y).chain(z).copied().collect();
    let h_xz = copula_entropy_of(data, &xz, params, seed)?;
    let h_yz = copula_entropy_of(data, &yz, params, seed)?;
    let h_xyz = copula_entropy_of(data, &xyz, params, seed)?;
    Ok(h_xz + h_yz - h_xyz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> DataMatrix {
        DataMatrix::from_columns(vec![
            vec![0.1, 0.5, 0.3, 0.9, 0.2, 0.7],
            vec![1.0, 0.2, 0.4, 0.8, 0.6, 0.1],
            vec![0.3, 0.3, 0.9, 0.1, 0.5, 0.6],
        ])
        .unwrap()
    }

    #[test]
    fn roles_must_be_disjoint_and_nonempty() {
        let d = small();
        let p = EntropyParams::default();
        assert!(cmi_ksg(&d, &[0], &[0], &[2], p, 1).is_err());
        assert!(cmi_ksg(&d, &[0], &[1], &[], p, 1).is_err());
        assert!(cmi_mixed(&d, &[0], &[1], &[5], p).is_err());
        assert!(ce_ci(&d, &[0], &[1], &[1], p, 1).is_err());
    }

    #[test]
    fn swap_symmetry_is_exact() {
        let d = small();
        let p = EntropyParams::with_k(2);
        assert_eq!(
            cmi_ksg(&d, &[0], &[1], &[2], p, 4).unwrap(),
            cmi_ksg(&d, &[1], &[0], &[2], p, 4).unwrap()
        );
    }
}
