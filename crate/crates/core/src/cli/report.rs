use std::collections::BTreeMap;

use serde::Serialize;

use super::wordfile::WordFile;
use crate::nilpotent::ClassificationReport;
use crate::unitary::{ScanReport, SolveConfig, SolveOutcome};

/// Bumped on any incompatible change to the JSON outputs.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Seeds that determine a run.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Seeds {
    pub solve: Option<u64>,
    pub target: Option<u64>,
    /// `haar:` coefficients.
    pub coefficients: BTreeMap<String, u64>,
}

impl Seeds {
    pub fn from_file(file: &WordFile, solve: Option<u64>) -> Self {
        Seeds {
            solve,
            target: None,
            coefficients: file.haar_seeds(),
        }
    }
}

/// Obstruction summary for one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologySummary {
    pub p: u32,
    #[serde(rename = "in_J")]
    pub in_j: bool,
    /// Coefficient of `a_2 (y ⊗ y_1)` in the pullback of `x_2`, i.e. `b mod p`;
    /// null when the content is outside `[F2,F2]` or has more than two
    /// variables.
    pub coefficient: Option<u32>,
    /// The units `a_i` stay symbolic in this summary.
    pub units_pinned: bool,
    pub units: Vec<String>,
    pub monomial: String,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub classification: ClassificationReport,
    pub cohomology: Option<CohomologySummary>,
    pub dim: Option<usize>,
    pub config: Option<SolveConfig>,
    pub solve: Option<SolveOutcome>,
    pub refused: Option<String>,
    pub seeds: Seeds,
}

impl PipelineReport {
    pub fn new(classification: ClassificationReport, seeds: Seeds) -> Self {
        PipelineReport {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo::current(),
            classification,
            cohomology: None,
            dim: None,
            config: None,
            solve: None,
            refused: None,
            seeds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPipelineReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub classification: ClassificationReport,
    pub config: SolveConfig,
    pub scan: ScanReport,
    pub seeds: Seeds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohomologyReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub p: u32,
    pub task: String,
    pub passed: bool,
    pub result: serde_json::Value,
}
