//! Sample containers shared by every estimator.

use crate::error::{Error, Result};

/// An `n x d` sample of real observations stored column-major.
///
/// Rows are observations and columns are variables. Construction rejects
/// NaN and infinities, fewer than two rows, and zero columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    d: usize,
    values: Vec<f64>,
    column_names: Option<Vec<String>>,
}

impl DataMatrix {
    /// Builds a matrix from column-major storage.
    pub fn from_col_major(n: usize, d: usize, values: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Shape(format!("need at least 2 rows, got {n}")));
        }
        if d == 0 {
            return Err(Error::Shape("need at least 1 column".into()));
        }
        if values.len() != n * d {
            return Err(Error::Shape(format!(
                "expected {} values for {n}x{d}, got {}",
                n * d,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos % n,
                column: pos / n,
            });
        }
        Ok(Self {
            n,
            d,
            values,
            column_names: None,
        })
    }

    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let d = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Shape("columns have different lengths".into()));
        }
        Self::from_col_major(n, d, columns.into_iter().flatten().collect())
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Shape("rows have different lengths".into()));
        }
        let mut values = vec![0.0; n * d];
        for (i, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                values[c * n + i] = *v;
            }
        }
        Self::from_col_major(n, d, values)
    }

    pub fn with_column_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.d {
            return Err(Error::Shape(format!(
                "{} column names for {} columns",
                names.len(),
                self.d
            )));
        }
        self.column_names = Some(names);
        Ok(self)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn column(&self, c: usize) -> &[f64] {
        &self.values[c * self.n..(c + 1) * self.n]
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[col * self.n + row]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.d).map(|c| self.get(i, c)).collect()
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names
            .as_ref()
            .and_then(|names| names.iter().position(|n| n == name))
    }

    pub fn as_col_major(&self) -> &[f64] {
        &self.values
    }

    /// Returns a new matrix holding the given columns in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<DataMatrix> {
        if cols.is_empty() {
            return Err(Error::Shape("empty column selection".into()));
        }
        let mut values = Vec::with_capacity(self.n * cols.len());
        for &c in cols {
            if c >= self.d {
                return Err(Error::Shape(format!(
                    "column {c} out of range for {} columns",
                    self.d
                )));
            }
            values.extend_from_slice(self.column(c));
        }
        let names = self
            .column_names
            .as_ref()
            .map(|names| cols.iter().map(|&c| names[c].clone()).collect());
        Ok(DataMatrix {
            n: self.n,
            d: cols.len(),
            values,
            column_names: names,
        })
    }

    /// Returns a new matrix holding the given rows in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<DataMatrix> {
        if rows.iter().any(|&r| r >= self.n) {
            return Err(Error::Shape("row index out of range".into()));
        }
        let mut values = Vec::with_capacity(rows.len() * self.d);
        for c in 0..self.d {
            let col = self.column(c);
            values.extend(rows.iter().map(|&r| col[r]));
        }
        let mut out = DataMatrix::from_col_major(rows.len(), self.d, values)?;
        out.column_names = self.column_names.clone();
        Ok(out)
    }

    /// Applies `f` to every entry of column `c`.
    pub fn map_column(&self, c: usize, f: impl Fn(f64) -> f64) -> Result<DataMatrix> {
        let mut values = self.values.clone();
        for v in &mut values[c * self.n..(c + 1) * self.n] {
            *v = f(*v);
        }
        let mut out = DataMatrix::from_col_major(self.n, self.d, values)?;
        out.column_names = self.column_names.clone();
        Ok(out)
    }

    /// Row-major copy of the selected columns, one `Vec` per observation.
    pub fn points(&self, cols: &[usize]) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| cols.iter().map(|&c| self.get(i, c)).collect())
            .collect()
    }
}

/// A partition of (some of) a matrix's columns into random vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    blocks: Vec<Vec<usize>>,
}

impl GroupSpec {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Shape("group spec has no blocks".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Shape("empty block in group spec".into()));
            }
            for &c in b {
                if !seen.insert(c) {
                    return Err(Error::Shape(format!("column {c} appears in two blocks")));
                }
            }
        }
        Ok(Self { blocks })
    }

    /// One block per column `0..d`.
    pub fn singletons(d: usize) -> Self {
        Self {
            blocks: (0..d).map(|c| vec![c]).collect(),
        }
    }

    pub fn pair(x: Vec<usize>, y: Vec<usize>) -> Result<Self> {
        Self::new(vec![x, y])
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn columns(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn validate_for(&self, data: &DataMatrix) -> Result<()> {
        match self.columns().into_iter().find(|&c| c >= data.ncols()) {
            Some(c) => Err(Error::Shape(format!(
                "block column {c} out of range for {} columns",
                data.ncols()
            ))),
            None => Ok(()),
        }
    }
}
