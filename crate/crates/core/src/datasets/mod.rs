//! Loaders for the heart disease, white wine quality and Beijing PM2.5
//! datasets, plus small synthetic files in the same formats.

mod beijing;
pub mod fixtures;
mod heart;
mod wine;

pub use beijing::{load_beijing_window, BeijingWindow, BEIJING_COLUMNS, WINDOW_ROWS};
pub use heart::{load_heart, HeartData, HEART_ATTRIBUTES, HEART_FILES, RECOMMENDED_13};
pub use wine::{load_wine_white, normalize_pinned, WineData, WINE_COLUMNS};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ColumnKind {
    Numeric,
    /// Integer codes for categorical levels.
    Categorical,
    /// Year, month, day or hour of a timestamp.
    TimestampPart,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetDescriptor {
    pub name: &'static str,
    pub file: &'static str,
    pub delimiter: &'static str,
    pub columns: Vec<(&'static str, ColumnKind)>,
    pub missing: &'static [&'static str],
    pub source: &'static str,
}

pub fn heart_descriptor() -> DatasetDescriptor {
    DatasetDescriptor {
        name: "heart",
        file: "cleveland.data, hungarian.data, switzerland.data, long-beach-va.data",
        delimiter: "whitespace, records end with the token `name`",
        columns: HEART_ATTRIBUTES
            .iter()
            .map(|&a| (a, heart::attribute_kind(a)))
            .collect(),
        missing: &["-9", "-9."],
        source: "https://archive.ics.uci.edu/dataset/45/heart+disease",
    }
}

pub fn wine_descriptor() -> DatasetDescriptor {
    DatasetDescriptor {
        name: "wine",
        file: "winequality-white.csv",
        delimiter: ";",
        columns: WINE_COLUMNS
            .iter()
            .map(|&c| (c, ColumnKind::Numeric))
            .collect(),
        missing: &[],
        source: "https://archive.ics.uci.edu/dataset/186/wine+quality",
    }
}

pub fn beijing_descriptor() -> DatasetDescriptor {
    DatasetDescriptor {
        name: "air",
        file: "PRSA_data_2010.1.1-2014.12.31.csv",
        delimiter: ",",
        columns: BEIJING_COLUMNS
            .iter()
            .map(|&c| {
                let kind = match c {
                    "year" | "month" | "day" | "hour" => ColumnKind::TimestampPart,
                    "cbwd" => ColumnKind::Categorical,
                    _ => ColumnKind::Numeric,
                };
                (c, kind)
            })
            .collect(),
        missing: &["NA"],
        source: "https://archive.ics.uci.edu/dataset/381/beijing+pm2+5+data",
    }
}

/// Where to get each dataset and which file names the loaders expect.
pub fn download_instructions() -> String {
    [heart_descriptor(), wine_descriptor(), beijing_descriptor()]
        .iter()
        .map(|d| format!("{}: download {} from {}", d.name, d.file, d.source))
        .collect::<Vec<_>>()
        .join("\n")
}

pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
