//! Reading numeric CSV files and resolving column selections.

use std::path::Path;

use depmeter::{DataMatrix, Error, Result};

/// Reads a comma-separated numeric file. The first row is taken as a
/// header when any of its fields is not a number.
pub fn read_matrix(path: &Path) -> Result<DataMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut records = reader.records();
    let first = match records.next() {
        Some(r) => r.map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?,
        None => return Err(Error::Schema(format!("{}: empty file", path.display()))),
    };
    let parse = |rec: &csv::StringRecord, line: usize| -> Result<Vec<f64>> {
        rec.iter()
            .enumerate()
            .map(|(c, v)| {
                v.parse::<f64>().map_err(|_| {
                    Error::Schema(format!(
                        "{}: line {line}, column {c}: bad value {v:?}",
                        path.display()
                    ))
                })
            })
            .collect()
    };
    let header = first.iter().any(|v| v.parse::<f64>().is_err());
    let mut rows = Vec::new();
    if !header {
        rows.push(parse(&first, 1)?);
    }
    for (i, rec) in records.enumerate() {
        let rec = rec.map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        rows.push(parse(&rec, i + 2)?);
    }
    if rows.is_empty() {
        return Err(Error::Schema(format!("{}: no data rows", path.display())));
    }
    let data = DataMatrix::from_rows(&rows)?;
    if header {
        data.with_column_names(first.iter().map(str::to_string).collect())
    } else {
        Ok(data)
    }
}

/// Parses `"0,2"` or `"age,sex"` into column indices (0-based).
pub fn columns(spec: &str, data: &DataMatrix) -> Result<Vec<usize>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let c = match s.parse::<usize>() {
                Ok(c) => c,
                Err(_) => data
                    .column_index(s)
                    .ok_or_else(|| Error::Capability(format!("no column named {s:?}")))?,
            };
            if c >= data.ncols() {
                return Err(Error::Capability(format!(
                    "column {c} out of range for {} columns",
                    data.ncols()
                )));
            }
            Ok(c)
        })
        .collect()
}
