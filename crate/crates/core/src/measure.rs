//! Measure identifiers, capability flags and the result record.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every estimator the crate can dispatch to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasureId {
    CE,
    Ktau,
    Hoeff,
    BDtau,
    HhgChisq,
    HhgLr,
    Ball,
    Bet,
    Qad,
    Mixed,
    Subcop,
    Codec,
    DCor,
    JdCov,
    Mdm,
    DHsic,
    CeCi,
    PCor,
    Gcm,
    Wgcm,
    CmiKsg,
    CmiMixed,
    CodecCi,
    Cdc,
    Fcit,
}

/// Whether larger values mean stronger dependence (`Direct`) or weaker
/// (`Inverse`: p-values, and copula entropy, which is minus the mutual
/// information).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Direct,
    Inverse,
}

/// Input shapes an estimator accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    /// Two scalar variables.
    pub bivariate: bool,
    /// Three or more scalar variables tested for joint independence.
    pub multivariate: bool,
    /// Two blocks with at least one of dimension > 1.
    pub vector_vs_vector: bool,
    /// Needs a conditioning block.
    pub ci: bool,
}

const fn caps(
    bivariate: bool,
    multivariate: bool,
    vector_vs_vector: bool,
    ci: bool,
) -> Capabilities {
    Capabilities {
        bivariate,
        multivariate,
        vector_vs_vector,
        ci,
    }
}

impl MeasureId {
    pub const ALL: [MeasureId; 25] = [
        MeasureId::CE,
        MeasureId::Ktau,
        MeasureId::Hoeff,
        MeasureId::BDtau,
        MeasureId::HhgChisq,
        MeasureId::HhgLr,
        MeasureId::Ball,
        MeasureId::Bet,
        MeasureId::Qad,
        MeasureId::Mixed,
        MeasureId::Subcop,
        MeasureId::Codec,
        MeasureId::DCor,
        MeasureId::JdCov,
        MeasureId::Mdm,
        MeasureId::DHsic,
        MeasureId::CeCi,
        MeasureId::PCor,
        MeasureId::Gcm,
        MeasureId::Wgcm,
        MeasureId::CmiKsg,
        MeasureId::CmiMixed,
        MeasureId::CodecCi,
        MeasureId::Cdc,
        MeasureId::Fcit,
    ];

    /// Short display name used in tables and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            MeasureId::CE => "CE",
            MeasureId::Ktau => "Ktau",
            MeasureId::Hoeff => "Hoeff",
            MeasureId::BDtau => "BDtau",
            MeasureId::HhgChisq => "HHG.chisq",
            MeasureId::HhgLr => "HHG.lr",
            MeasureId::Ball => "Ball",
            MeasureId::Bet => "BET",
            MeasureId::Qad => "QAD",
            MeasureId::Mixed => "mixed",
            MeasureId::Subcop => "subcop",
            MeasureId::Codec => "CODEC",
            MeasureId::DCor => "dCor",
            MeasureId::JdCov => "JdCov",
            MeasureId::Mdm => "MDM",
            MeasureId::DHsic => "dHSIC",
            MeasureId::CeCi => "CE_CI",
            MeasureId::PCor => "pcor",
            MeasureId::Gcm => "GCM",
            MeasureId::Wgcm => "wGCM",
            MeasureId::CmiKsg => "CMI_KSG",
            MeasureId::CmiMixed => "CMI_Mixed",
            MeasureId::CodecCi => "CODEC_CI",
            MeasureId::Cdc => "CDC",
            MeasureId::Fcit => "FCIT",
        }
    }

    pub fn capabilities(self) -> Capabilities {
        use MeasureId::*;
        match self {
            CE | Bet | DHsic => caps(true, true, true, false),
            Mixed => caps(true, true, false, false),
            Subcop => caps(true, true, false, false),
            JdCov => caps(false, true, false, false),
            Ktau | Hoeff | BDtau | Codec => caps(true, false, false, false),
            HhgChisq | HhgLr | Ball | Qad | DCor | Mdm => caps(true, false, true, false),
            CeCi | PCor | Gcm | Wgcm | CmiKsg | CmiMixed | CodecCi | Cdc | Fcit => {
                caps(false, false, false, true)
            }
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            MeasureId::Fcit | MeasureId::CE => Direction::Inverse,
            _ => Direction::Direct,
        }
    }

    pub fn is_ci(self) -> bool {
        self.capabilities().ci
    }

    pub fn independence_measures() -> impl Iterator<Item = MeasureId> {
        Self::ALL.into_iter().filter(|m| !m.is_ci())
    }

    pub fn ci_measures() -> impl Iterator<Item = MeasureId> {
        Self::ALL.into_iter().filter(|m| m.is_ci())
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    /// Accepts display names case-insensitively, with `_`, `.` and `-`
    /// treated alike.
    fn from_str(s: &str) -> Result<Self> {
        let norm = |t: &str| t.to_ascii_lowercase().replace(['.', '-'], "_");
        let key = norm(s);
        MeasureId::ALL
            .into_iter()
            .find(|m| norm(m.name()) == key)
            .ok_or_else(|| Error::Capability(format!("unknown measure '{s}'")))
    }
}

/// Parameter record attached to a result.
pub type Params = BTreeMap<String, serde_json::Value>;

/// One evaluated measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureResult {
    pub id: MeasureId,
    pub value: f64,
    pub params: Params,
    #[serde(with = "secs")]
    pub elapsed: Duration,
}

mod secs {
    use std::time::Duration;

    pub fn serialize<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }
}

impl MeasureResult {
    /// Runs `f`, timing it, and checks that the value is finite.
    pub fn timed(id: MeasureId, f: impl FnOnce(&mut Params) -> Result<f64>) -> Result<Self> {
        let start = Instant::now();
        let mut params = Params::new();
        let value = f(&mut params)?;
        if !value.is_finite() {
            return Err(Error::DegenerateGeometry(format!("{id} produced {value}")));
        }
        Ok(Self {
            id,
            value,
            params,
            elapsed: start.elapsed(),
        })
    }

    pub fn param(&self, key: &str) -> Option<&serde_json::Value> {
        self.params.get(key)
    }

    pub fn param_f64(&self, key: &str) -> Option<f64> {
        self.params.get(key).and_then(serde_json::Value::as_f64)
    }
}

/// Inserts a serializable parameter.
pub(crate) fn put(params: &mut Params, key: &str, value: impl Serialize) {
    params.insert(
        key.to_string(),
        serde_json::to_value(value).unwrap_or(serde_json::Value::Null),
    );
}
