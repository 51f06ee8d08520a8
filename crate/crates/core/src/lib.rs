//! Nonparametric independence and conditional-independence measures,
//! copula-based simulators, and a reproducible benchmark harness.

// Negated comparisons such as `!(sd > 0.0)` deliberately also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod ci;
pub mod data;
pub mod datasets;
pub mod error;
pub mod indep;
pub mod knn;
pub mod measure;
pub mod ranks;
pub mod registry;
pub mod rng;
pub mod samplers;
pub mod stats;

pub use data::{DataMatrix, GroupSpec};
pub use error::{Error, Result};
pub use measure::{Direction, MeasureId, MeasureResult};
pub use ranks::{make_pseudo_obs, PseudoObs, TiePolicy};
