//! Pairwise distance matrices and centering helpers.

use crate::data::DataMatrix;

/// Dense symmetric `n x n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Euclidean distances between rows restricted to `cols`; for a single
    /// column this is the absolute difference.
    pub fn euclidean(data: &DataMatrix, cols: &[usize]) -> Self {
        let n = data.nrows();
        let mut d = vec![0.0; n * n];
        let columns: Vec<&[f64]> = cols.iter().map(|&c| data.column(c)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let v = if columns.len() == 1 {
                    (columns[0][i] - columns[0][j]).abs()
                } else {
                    columns
                        .iter()
                        .map(|c| (c[i] - c[j]).powi(2))
                        .sum::<f64>()
                        .sqrt()
                };
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d }
    }

    /// Wraps a precomputed row-major matrix.
    pub fn from_row_major(n: usize, d: Vec<f64>) -> Self {
        assert_eq!(d.len(), n * n, "distance matrix must be n x n");
        Self { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.d
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n: self.n,
            d: self.d.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `a_ij - a_i. - a_.j + a_..` with means over rows/columns.
    pub fn double_centered(&self) -> Vec<f64> {
        let n = self.n;
        let nf = n as f64;
        let row_mean: Vec<f64> = (0..n)
            .map(|i| self.row(i).iter().sum::<f64>() / nf)
            .collect();
        let grand = row_mean.iter().sum::<f64>() / nf;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                // Symmetric, so column means equal row means.
                out[i * n + j] = self.get(i, j) - row_mean[i] - row_mean[j] + grand;
            }
        }
        out
    }

    /// U-centering: zero diagonal and
    /// `a_ij - S_i/(n-2) - S_j/(n-2) + S/((n-1)(n-2))` off it.
    pub fn u_centered(&self) -> Vec<f64> {
        let n = self.n;
        let nf = n as f64;
        let row_sum: Vec<f64> = (0..n).map(|i| self.row(i).iter().sum::<f64>()).collect();
        let total: f64 = row_sum.iter().sum();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out[i * n + j] =
                        self.get(i, j) - row_sum[i] / (nf - 2.0) - row_sum[j] / (nf - 2.0)
                            + total / ((nf - 1.0) * (nf - 2.0));
                }
            }
        }
        out
    }
}
