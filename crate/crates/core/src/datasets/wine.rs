//! White wine quality: semicolon-separated, 11 physicochemical columns and
//! the sensory `quality` score.

use std::path::Path;

use crate::data::DataMatrix;
use crate::error::{Error, Result};

pub const WINE_COLUMNS: [&str; 12] = [
    "fixed acidity",
    "volatile acidity",
    "citric acid",
    "residual sugar",
    "chlorides",
    "free sulfur dioxide",
    "total sulfur dioxide",
    "density",
    "pH",
    "sulphates",
    "alcohol",
    "quality",
];

#[derive(Debug, Clone, PartialEq)]
pub struct WineData {
    pub data: DataMatrix,
}

impl WineData {
    pub fn quality() -> usize {
        11
    }

    pub fn physicochemical() -> Vec<usize> {
        (0..11).collect()
    }

    pub fn fixed_acidity() -> usize {
        0
    }

    pub fn alcohol() -> usize {
        10
    }
}

pub fn load_wine_white(path: &Path) -> Result<WineData> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b';')
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Schema(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header != WINE_COLUMNS {
        return Err(Error::Schema(format!(
            "unexpected wine header {header:?}, expected {WINE_COLUMNS:?}"
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Schema(format!("row {i}: {e}")))?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(c, v)| {
                v.trim().parse::<f64>().map_err(|_| {
                    Error::Schema(format!(
                        "row {i}, column {:?}: bad value {v:?}",
                        WINE_COLUMNS[c]
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let data = DataMatrix::from_rows(&rows)?
        .with_column_names(WINE_COLUMNS.iter().map(|s| s.to_string()).collect())?;
    Ok(WineData { data })
}

/// Affine rescaling that sends `values[zero]` to 0 and `values[one]` to 1.
pub fn normalize_pinned(values: &[f64], zero: usize, one: usize) -> Result<Vec<f64>> {
    let (a, b) = (values[zero], values[one]);
    if a == b {
        return Err(Error::NormalizationDegenerate);
    }
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i == zero {
                0.0
            } else if i == one {
                1.0
            } else {
                (v - a) / (b - a)
            }
        })
        .collect())
}
