//! k-nearest-neighbor entropy machinery: exact neighbor search,
//! Kozachenko–Leonenko entropy, copula entropy and conditional mutual
//! information.

mod cmi;
mod entropy;
mod index;

pub use cmi::{ce_ci, cmi_ksg, cmi_mixed, JITTER_SCALE};
pub use entropy::{
    copula_entropy, copula_entropy_between, copula_entropy_of, knn_entropy, EntropyParams,
};
pub use index::{BruteForce, KnnIndex, Metric, NeighborSearch};

pub(crate) use cmi::check_roles;
