use statrs::distribution::{ContinuousCDF, Normal};

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// A univariate marginal attached to one copula coordinate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum MarginalSpec {
    Uniform01,
    Normal { mean: f64, sd: f64 },
    Exponential { rate: f64 },
}

impl MarginalSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MarginalSpec::Normal { sd, mean } if !(sd > 0.0) || !mean.is_finite() => Err(
                Error::ParamRange(format!("normal sd must be > 0, got {sd}")),
            ),
            MarginalSpec::Exponential { rate } if !(rate > 0.0) => Err(Error::ParamRange(format!(
                "exponential rate must be > 0, got {rate}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            MarginalSpec::Uniform01 => u,
            MarginalSpec::Normal { mean, sd } => mean + sd * Normal::standard().inverse_cdf(u),
            MarginalSpec::Exponential { rate } => -(-u).ln_1p() / rate,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            MarginalSpec::Uniform01 => x.clamp(0.0, 1.0),
            MarginalSpec::Normal { mean, sd } => Normal::standard().cdf((x - mean) / sd),
            MarginalSpec::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
        }
    }
}

/// Maps each column of a uniform matrix through its marginal's inverse CDF.
pub fn apply_marginals(u: &DataMatrix, marginals: &[MarginalSpec]) -> Result<DataMatrix> {
    if marginals.len() != u.ncols() {
        return Err(Error::Shape(format!(
            "{} marginals for {} columns",
            marginals.len(),
            u.ncols()
        )));
    }
    let mut values = Vec::with_capacity(u.nrows() * u.ncols());
    for (c, m) in marginals.iter().enumerate() {
        m.validate()?;
        for &v in u.column(c) {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::ParamRange(format!(
                    "uniform value {v} outside (0,1)"
                )));
            }
            values.push(m.quantile(v));
        }
    }
    DataMatrix::from_col_major(u.nrows(), u.ncols(), values)
}
