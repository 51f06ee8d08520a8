//! UCI heart disease raw records: 76 whitespace-separated values per
//! patient, the last being the literal token `name`.

use std::path::Path;

use super::{read_to_string, ColumnKind};
use crate::data::DataMatrix;
use crate::error::{Error, Result};

pub const HEART_ATTRIBUTES: [&str; 76] = [
    "id", "ccf", "age", "sex", "painloc", "painexer", "relrest", "pncaden", "cp", "trestbps",
    "htn", "chol", "smoke", "cigs", "years", "fbs", "dm", "famhist", "restecg", "ekgmo", "ekgday",
    "ekgyr", "dig", "prop", "nitr", "pro", "diuretic", "proto", "thaldur", "thaltime", "met",
    "thalach", "thalrest", "tpeakbps", "tpeakbpd", "dummy", "trestbpd", "exang", "xhypo",
    "oldpeak", "slope", "rldv5", "rldv5e", "ca", "restckm", "exerckm", "restef", "restwm",
    "exeref", "exerwm", "thal", "thalsev", "thalpul", "earlobe", "cmo", "cday", "cyr", "num",
    "lmt", "ladprox", "laddist", "diag", "cxmain", "ramus", "om1", "om2", "rcaprox", "rcadist",
    "lvx1", "lvx2", "lvx3", "lvx4", "lvf", "cathef", "junk", "name",
];

/// Raw files in the order they are concatenated when a directory is given.
pub const HEART_FILES: [&str; 4] = [
    "cleveland.data",
    "hungarian.data",
    "switzerland.data",
    "long-beach-va.data",
];

/// The commonly used 13-attribute subset.
pub const RECOMMENDED_13: [&str; 13] = [
    "age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach", "exang", "oldpeak",
    "slope", "ca", "thal",
];

/// Identifier columns left out of the analysis by default.
const EXCLUDED: [&str; 3] = ["id", "ccf", "name"];

pub(crate) fn attribute_kind(name: &str) -> ColumnKind {
    match name {
        "sex" | "painloc" | "painexer" | "relrest" | "pncaden" | "cp" | "htn" | "smoke" | "fbs"
        | "dm" | "famhist" | "restecg" | "dig" | "prop" | "nitr" | "pro" | "diuretic" | "proto"
        | "exang" | "xhypo" | "slope" | "restwm" | "exerwm" | "thal" | "earlobe" | "num"
        | "lmt" | "ladprox" | "laddist" | "diag" | "cxmain" | "ramus" | "om1" | "om2"
        | "rcaprox" | "rcadist" | "lvx1" | "lvx2" | "lvx3" | "lvx4" | "lvf" => {
            ColumnKind::Categorical
        }
        "ekgmo" | "ekgday" | "ekgyr" | "cmo" | "cday" | "cyr" => ColumnKind::TimestampPart,
        _ => ColumnKind::Numeric,
    }
}

/// Parsed records with missing values (`-9`) as `None`. The `name` column
/// is always `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeartData {
    pub records: Vec<[Option<f64>; 76]>,
}

impl HeartData {
    pub fn n_records(&self) -> usize {
        self.records.len()
    }

    pub fn n_attributes(&self) -> usize {
        HEART_ATTRIBUTES.len()
    }

    pub fn column_index(name: &str) -> Option<usize> {
        HEART_ATTRIBUTES.iter().position(|&a| a == name)
    }

    pub fn target() -> usize {
        Self::column_index("num").expect("num is an attribute")
    }

    pub fn threshold_attribute() -> usize {
        Self::column_index("fbs").expect("fbs is an attribute")
    }

    pub fn recommended() -> Vec<usize> {
        RECOMMENDED_13
            .iter()
            .map(|a| Self::column_index(a).expect("recommended attributes exist"))
            .collect()
    }

    /// Attributes scored against the diagnosis: every column except the
    /// identifiers and the diagnosis itself.
    pub fn analysis_attributes() -> Vec<usize> {
        (0..HEART_ATTRIBUTES.len())
            .filter(|&c| c != Self::target() && !EXCLUDED.contains(&HEART_ATTRIBUTES[c]))
            .collect()
    }

    /// Matrix of the given columns over the rows where all are present,
    /// with the number of dropped rows.
    pub fn complete_rows(&self, cols: &[usize]) -> Result<(DataMatrix, usize)> {
        let rows: Vec<Vec<f64>> = self
            .records
            .iter()
            .filter_map(|r| cols.iter().map(|&c| r[c]).collect::<Option<Vec<f64>>>())
            .collect();
        let dropped = self.records.len() - rows.len();
        if rows.len() < 2 {
            return Err(Error::Schema(format!(
                "fewer than 2 complete rows for columns {:?}",
                cols.iter()
                    .map(|&c| HEART_ATTRIBUTES[c])
                    .collect::<Vec<_>>()
            )));
        }
        let names = cols
            .iter()
            .map(|&c| HEART_ATTRIBUTES[c].to_string())
            .collect();
        Ok((
            DataMatrix::from_rows(&rows)?.with_column_names(names)?,
            dropped,
        ))
    }
}

fn parse_records(text: &str, source: &str, out: &mut Vec<[Option<f64>; 76]>) -> Result<()> {
    let mut current: Vec<&str> = Vec::with_capacity(76);
    for tok in text.split_whitespace() {
        current.push(tok);
        if tok == "name" {
            let index = out.len();
            if current.len() != 76 {
                return Err(Error::Schema(format!(
                    "{source}: record {index} has {} values, expected 76",
                    current.len()
                )));
            }
            let mut rec = [None; 76];
            for (c, t) in current[..75].iter().enumerate() {
                let v: f64 = t.parse().map_err(|_| {
                    Error::Schema(format!(
                        "{source}: record {index}, attribute {c}: bad value {t:?}"
                    ))
                })?;
                rec[c] = (v != -9.0).then_some(v);
            }
            out.push(rec);
            current.clear();
        }
    }
    if !current.is_empty() {
        return Err(Error::Schema(format!(
            "{source}: trailing record {} is not terminated by `name`",
            out.len()
        )));
    }
    Ok(())
}

/// Reads one raw file, or the four standard files from a directory.
pub fn load_heart(path: &Path) -> Result<HeartData> {
    let mut records = Vec::new();
    if path.is_dir() {
        for f in HEART_FILES {
            let p = path.join(f);
            parse_records(&read_to_string(&p)?, f, &mut records)?;
        }
    } else {
        parse_records(
            &read_to_string(path)?,
            &path.display().to_string(),
            &mut records,
        )?;
    }
    Ok(HeartData { records })
}
