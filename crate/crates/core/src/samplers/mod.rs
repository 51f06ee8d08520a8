//! Seeded generators for the simulated distributions: multivariate normals,
//! normal copulas and Archimedean copulas with configurable marginals.

mod archimedean;
mod marginals;

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::erf::erfc;

pub use archimedean::{logarithmic, positive_stable, CopulaFamily};
pub use marginals::{apply_marginals, MarginalSpec};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::rng::rng;

/// A distribution to draw from.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum GeneratorKind {
    /// Zero-mean normal with the given correlation matrix (row-major, d x d).
    MvNormal { cov: Vec<f64>, dim: usize },
    /// Normal copula with correlation `cov` and per-coordinate marginals.
    NormalCopula {
        cov: Vec<f64>,
        dim: usize,
        marginals: Vec<MarginalSpec>,
    },
    /// Clayton, Gumbel or Frank copula in 2 or 3 dimensions.
    ArchCopula {
        family: CopulaFamily,
        alpha: f64,
        dim: usize,
        marginals: Vec<MarginalSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            GeneratorKind::MvNormal { dim, .. }
            | GeneratorKind::NormalCopula { dim, .. }
            | GeneratorKind::ArchCopula { dim, .. } => *dim,
        }
    }
}

fn cholesky(cov: &[f64], dim: usize) -> Result<DMatrix<f64>> {
    if cov.len() != dim * dim || dim == 0 {
        return Err(Error::Shape(format!(
            "covariance needs {} entries",
            dim * dim
        )));
    }
    for i in 0..dim {
        if (cov[i * dim + i] - 1.0).abs() > 1e-12 {
            return Err(Error::ParamRange("covariance diagonal must be 1".into()));
        }
        for j in 0..i {
            if (cov[i * dim + j] - cov[j * dim + i]).abs() > 1e-12 {
                return Err(Error::ParamRange("covariance must be symmetric".into()));
            }
        }
    }
    DMatrix::from_row_slice(dim, dim, cov)
        .cholesky()
        .map(|c| c.l())
        .ok_or(Error::NotPositiveDefinite)
}

fn validate_family(family: CopulaFamily, alpha: f64, dim: usize) -> Result<()> {
    if !(2..=3).contains(&dim) {
        return Err(Error::ParamRange(format!(
            "archimedean copulas support dim 2 or 3, got {dim}"
        )));
    }
    let ok = match family {
        CopulaFamily::Clayton => alpha > 0.0 && alpha.is_finite(),
        CopulaFamily::Gumbel => alpha >= 1.0 && alpha.is_finite(),
        CopulaFamily::Frank => alpha != 0.0 && alpha.is_finite() && (alpha > 0.0 || dim == 2),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::ParamRange(format!(
            "alpha = {alpha} invalid for {family:?} in dim {dim}"
        )))
    }
}

fn normal_rows(cov: &[f64], dim: usize, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let l = cholesky(cov, dim)?;
    let mut r = rng(seed);
    let mut e = vec![0.0; dim];
    let mut out = vec![Vec::with_capacity(n); dim];
    for _ in 0..n {
        for v in e.iter_mut() {
            *v = StandardNormal.sample(&mut r);
        }
        for (i, col) in out.iter_mut().enumerate() {
            col.push((0..=i).map(|j| l[(i, j)] * e[j]).sum());
        }
    }
    Ok(out)
}

#[inline]
fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Draws `spec.n` rows. Identical specs (seed included) give bit-identical
/// output.
pub fn sample(spec: &GeneratorSpec) -> Result<DataMatrix> {
    if spec.n < 2 {
        return Err(Error::Shape("need at least 2 samples".into()));
    }
    match &spec.kind {
        GeneratorKind::MvNormal { cov, dim } => {
            DataMatrix::from_columns(normal_rows(cov, *dim, spec.n, spec.seed)?)
        }
        GeneratorKind::NormalCopula {
            cov,
            dim,
            marginals,
        } => {
            if marginals.len() != *dim {
                return Err(Error::Shape("one marginal per coordinate required".into()));
            }
            let cols = normal_rows(cov, *dim, spec.n, spec.seed)?
                .into_iter()
                .map(|c| {
                    c.into_iter()
                        .map(|z| archimedean::open_unit(std_normal_cdf(z)))
                        .collect()
                })
                .collect();
            apply_marginals(&DataMatrix::from_columns(cols)?, marginals)
        }
        GeneratorKind::ArchCopula {
            family,
            alpha,
            dim,
            marginals,
        } => {
            validate_family(*family, *alpha, *dim)?;
            if marginals.len() != *dim {
                return Err(Error::Shape("one marginal per coordinate required".into()));
            }
            let mut r = rng(spec.seed);
            let mut row = vec![0.0; *dim];
            let mut cols = vec![Vec::with_capacity(spec.n); *dim];
            for _ in 0..spec.n {
                archimedean::sample_row(*family, *alpha, *dim, &mut r, &mut row);
                for (c, v) in cols.iter_mut().zip(&row) {
                    c.push(*v);
                }
            }
            apply_marginals(&DataMatrix::from_columns(cols)?, marginals)
        }
    }
}

/// Sample size used by every simulated experiment.
pub const PAPER_N: usize = 800;

const NORMAL_SD2: MarginalSpec = MarginalSpec::Normal { mean: 0.0, sd: 2.0 };
const EXP_RATE2: MarginalSpec = MarginalSpec::Exponential { rate: 2.0 };
const EXP_RATE05: MarginalSpec = MarginalSpec::Exponential { rate: 0.5 };

fn steps(count: usize) -> Vec<f64> {
    (0..count).map(|i| i as f64 / 10.0).collect()
}

fn cov2(rho: f64) -> Vec<f64> {
    vec![1.0, rho, rho, 1.0]
}

fn cov3(xy: f64, xz: f64, yz: f64) -> Vec<f64> {
    vec![1.0, xy, xz, xy, 1.0, yz, xz, yz, 1.0]
}

fn cov_blocks(rho: f64) -> Vec<f64> {
    let (r12, r34) = (0.8, 0.75);
    vec![
        1.0, r12, rho, rho, //
        r12, 1.0, rho, rho, //
        rho, rho, 1.0, r34, //
        rho, rho, r34, 1.0,
    ]
}

/// Grid of one simulated experiment as `(control parameter, spec)` pairs.
///
/// Experiments 1–8 target independence measures (bivariate normal, normal
/// copula, Clayton, Gumbel, Frank, trivariate normal, trivariate Gumbel,
/// two bivariate blocks); 9–10 target CI measures with columns ordered
/// `(X, Y, Z)`. Every spec carries `n = 800` and seed 0.
pub fn paper_experiment_cells(experiment_id: u32) -> Result<Vec<(f64, GeneratorSpec)>> {
    let arch = |family: CopulaFamily, alpha: f64, dim: usize, marginals: Vec<MarginalSpec>| {
        GeneratorKind::ArchCopula {
            family,
            alpha,
            dim,
            marginals,
        }
    };
    let cells: Vec<(f64, GeneratorKind)> = match experiment_id {
        1 => steps(10)
            .into_iter()
            .map(|r| {
                (
                    r,
                    GeneratorKind::MvNormal {
                        cov: cov2(r),
                        dim: 2,
                    },
                )
            })
            .collect(),
        2 => steps(10)
            .into_iter()
            .map(|r| {
                (
                    r,
                    GeneratorKind::NormalCopula {
                        cov: cov2(r),
                        dim: 2,
                        marginals: vec![NORMAL_SD2, EXP_RATE2],
                    },
                )
            })
            .collect(),
        3..=5 => {
            let family = match experiment_id {
                3 => CopulaFamily::Clayton,
                4 => CopulaFamily::Gumbel,
                _ => CopulaFamily::Frank,
            };
            (1..=10)
                .map(|a| {
                    let a = a as f64;
                    (a, arch(family, a, 2, vec![NORMAL_SD2, EXP_RATE2]))
                })
                .collect()
        }
        6 => steps(10)
            .into_iter()
            .map(|r| {
                (
                    r,
                    GeneratorKind::MvNormal {
                        cov: cov3(r, r, r),
                        dim: 3,
                    },
                )
            })
            .collect(),
        7 => (1..=10)
            .map(|a| {
                let a = a as f64;
                (
                    a,
                    arch(
                        CopulaFamily::Gumbel,
                        a,
                        3,
                        vec![NORMAL_SD2, EXP_RATE05, EXP_RATE2],
                    ),
                )
            })
            .collect(),
        8 => steps(9)
            .into_iter()
            .map(|r| {
                (
                    r,
                    GeneratorKind::MvNormal {
                        cov: cov_blocks(r),
                        dim: 4,
                    },
                )
            })
            .collect(),
        9 => steps(10)
            .into_iter()
            .map(|r| {
                (
                    r,
                    GeneratorKind::MvNormal {
                        cov: cov3(0.7, r, 0.6),
                        dim: 3,
                    },
                )
            })
            .collect(),
        10 => steps(10)
            .into_iter()
            .map(|r| {
                (
                    r,
                    GeneratorKind::NormalCopula {
                        cov: cov3(0.7, r, 0.6),
                        dim: 3,
                        marginals: vec![NORMAL_SD2, EXP_RATE05, EXP_RATE2],
                    },
                )
            })
            .collect(),
        other => return Err(Error::UnknownExperiment(other)),
    };
    Ok(cells
        .into_iter()
        .map(|(p, kind)| {
            (
                p,
                GeneratorSpec {
                    kind,
                    n: PAPER_N,
                    seed: 0,
                },
            )
        })
        .collect())
}

/// The generator specs of one experiment, in grid order.
pub fn paper_experiment_grid(experiment_id: u32) -> Result<Vec<GeneratorSpec>> {
    Ok(paper_experiment_cells(experiment_id)?
        .into_iter()
        .map(|(_, s)| s)
        .collect())
}
