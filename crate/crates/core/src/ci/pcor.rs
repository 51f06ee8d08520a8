use nalgebra::DMatrix;

use super::regress::{residuals, RegressorSpec};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::measure::{put, MeasureId, MeasureResult};
use crate::stats::{mean, pearson};

/// Sample covariance matrix of the listed columns (divisor `n - 1`).
fn covariance(data: &DataMatrix, cols: &[usize]) -> DMatrix<f64> {
    let n = data.nrows() as f64;
    let centered: Vec<Vec<f64>> = cols
        .iter()
        .map(|&c| {
            let col = data.column(c);
            let m = mean(col);
            col.iter().map(|v| v - m).collect()
        })
        .collect();
    DMatrix::from_fn(cols.len(), cols.len(), |a, b| {
        centered[a]
            .iter()
            .zip(&centered[b])
            .map(|(x, y)| x * y)
            .sum::<f64>()
            / (n - 1.0)
    })
}

/// Cholesky factor of a covariance matrix, rejecting (near-)collinear
/// columns whose residual variance is below `1e-12` of their variance.
pub(crate) fn well_conditioned_cholesky(
    s: DMatrix<f64>,
) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    let diag: Vec<f64> = s.diagonal().iter().copied().collect();
    let chol = s.cholesky().ok_or(Error::SingularConditioning)?;
    let l = chol.l_dirty();
    for (i, &d) in diag.iter().enumerate() {
        if !(l[(i, i)] * l[(i, i)] > 1e-12 * d) {
            return Err(Error::SingularConditioning);
        }
    }
    Ok(chol)
}

/// Partial correlation of scalar `x` and `y` given `z` via the Schur
/// complement `Theta = S_AA - S_AZ S_ZZ^-1 S_ZA` of the covariance matrix,
/// `rho = theta_12 / sqrt(theta_11 theta_22)`.
pub fn pcor_schur(data: &DataMatrix, x: usize, y: usize, z: &[usize]) -> Result<f64> {
    if z.is_empty() {
        return pearson(data.column(x), data.column(y)).ok_or(Error::DegenerateResiduals);
    }
    let mut cols = vec![x, y];
    cols.extend_from_slice(z);
    let s = covariance(data, &cols);
    let saa = s.view((0, 0), (2, 2)).into_owned();
    let q = z.len();
    let szz = s.view((2, 2), (q, q)).into_owned();
    let saz = s.view((0, 2), (2, q)).into_owned();
    let chol = well_conditioned_cholesky(szz)?;
    let theta = saa - &saz * chol.solve(&saz.transpose());
    let denom = (theta[(0, 0)] * theta[(1, 1)]).sqrt();
    if !(denom > 0.0) {
        return Err(Error::DegenerateResiduals);
    }
    Ok((theta[(0, 1)] / denom).clamp(-1.0, 1.0))
}

/// Partial correlation as the Pearson correlation of least-squares
/// residuals of `x` and `y` on `z`.
pub fn pcor_residual(data: &DataMatrix, x: usize, y: usize, z: &[usize]) -> Result<f64> {
    let zc: Vec<&[f64]> = z.iter().map(|&c| data.column(c)).collect();
    let ex = residuals(data.column(x), &zc, RegressorSpec::Linear)?;
    let ey = residuals(data.column(y), &zc, RegressorSpec::Linear)?;
    pearson(&ex, &ey).ok_or(Error::DegenerateResiduals)
}

/// Partial correlation of scalar `x` and `y` given the columns `z`; with
/// empty `z` this is the Pearson correlation.
pub fn pcor(data: &DataMatrix, x: &[usize], y: &[usize], z: &[usize]) -> Result<MeasureResult> {
    let (x, y) = super::scalar_pair(data, x, y, z)?;
    MeasureResult::timed(MeasureId::PCor, |p| {
        put(p, "method", "schur");
        pcor_schur(data, x, y, z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_conditioning_is_reported() {
        let z = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let d = DataMatrix::from_columns(vec![
            vec![0.3, 0.1, 0.9, 0.5, 0.2],
            vec![1.0, 0.0, 2.0, 1.0, 3.0],
            z.clone(),
            z,
        ])
        .unwrap();
        assert_eq!(
            pcor_schur(&d, 0, 1, &[2, 3]),
            Err(Error::SingularConditioning)
        );
    }

    #[test]
    fn empty_z_is_pearson() {
        let d = DataMatrix::from_columns(vec![vec![0.3, 0.1, 0.9, 0.5], vec![1.0, 0.0, 2.0, 1.5]])
            .unwrap();
        let p = pearson(d.column(0), d.column(1)).unwrap();
        assert_eq!(pcor_schur(&d, 0, 1, &[]).unwrap(), p);
    }
}
