//! Hourly Beijing PM2.5 records, restricted to the spring 2010 window.

use std::collections::BTreeSet;
use std::path::Path;

use crate::data::DataMatrix;
use crate::error::{Error, Result};

pub const BEIJING_COLUMNS: [&str; 12] = [
    "year", "month", "day", "hour", "pm2.5", "DEWP", "TEMP", "PRES", "cbwd", "Iws", "Is", "Ir",
];

/// Rows taken from the start of the window.
pub const WINDOW_ROWS: usize = 1000;

const START: (i32, u32, u32) = (2010, 4, 2);
const END: (i32, u32, u32) = (2010, 5, 14);

#[derive(Debug, Clone, PartialEq)]
pub struct BeijingWindow {
    /// Columns as in [`BEIJING_COLUMNS`], time-ordered.
    pub data: DataMatrix,
    /// Wind-direction levels; code `i` is `cbwd_levels[i]`.
    pub cbwd_levels: Vec<String>,
    /// Set when the window holds fewer than [`WINDOW_ROWS`] rows.
    pub warning: Option<Error>,
}

impl BeijingWindow {
    pub fn column(name: &str) -> usize {
        BEIJING_COLUMNS
            .iter()
            .position(|&c| c == name)
            .expect("known Beijing column")
    }
}

/// The first 1000 hourly rows from 2010-04-02 00:00, all within the
/// window ending 2010-05-14. Missing PM2.5 or pressure inside those rows
/// is a [`Error::WindowMismatch`].
pub fn load_beijing_window(path: &Path) -> Result<BeijingWindow> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Schema(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let idx: Vec<usize> = BEIJING_COLUMNS
        .iter()
        .map(|&c| {
            header
                .iter()
                .position(|h| h == c)
                .ok_or_else(|| Error::Schema(format!("column {c:?} missing from {header:?}")))
        })
        .collect::<Result<_>>()?;
    let records: Vec<csv::StringRecord> = reader
        .records()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Error::Schema(format!("row {i}: {e}"))))
        .collect::<Result<_>>()?;
    let cbwd = idx[8];
    let levels: Vec<String> = records
        .iter()
        .map(|r| r.get(cbwd).unwrap_or("").trim().to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let int = |r: &csv::StringRecord, c: usize, i: usize| -> Result<i64> {
        r.get(idx[c])
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Schema(format!("row {i}: bad {}", BEIJING_COLUMNS[c])))
    };
    let mut rows = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let (y, m, d) = (int(r, 0, i)?, int(r, 1, i)?, int(r, 2, i)?);
        let date = (y as i32, m as u32, d as u32);
        if date < START || date > END {
            continue;
        }
        if rows.len() == WINDOW_ROWS {
            break;
        }
        let mut row = Vec::with_capacity(12);
        for (c, name) in BEIJING_COLUMNS.iter().enumerate() {
            let raw = r.get(idx[c]).unwrap_or("").trim();
            let v = if c == 8 {
                levels
                    .iter()
                    .position(|l| l == raw)
                    .expect("level collected above") as f64
            } else if raw == "NA" {
                return Err(Error::WindowMismatch(format!(
                    "missing {name} at {y}-{m:02}-{d:02} hour {}",
                    raw_hour(r, &idx)
                )));
            } else {
                raw.parse()
                    .map_err(|_| Error::Schema(format!("row {i}: bad {name} value {raw:?}")))?
            };
            row.push(v);
        }
        rows.push(row);
    }
    let warning = (rows.len() != WINDOW_ROWS).then(|| {
        Error::WindowMismatch(format!(
            "window holds {} rows, expected {WINDOW_ROWS}",
            rows.len()
        ))
    });
    if rows.len() < 2 {
        return Err(warning.expect("fewer rows than the window size"));
    }
    let data = DataMatrix::from_rows(&rows)?
        .with_column_names(BEIJING_COLUMNS.iter().map(|s| s.to_string()).collect())?;
    Ok(BeijingWindow {
        data,
        cbwd_levels: levels,
        warning,
    })
}

fn raw_hour(r: &csv::StringRecord, idx: &[usize]) -> String {
    r.get(idx[3]).unwrap_or("?").trim().to_string()
}
