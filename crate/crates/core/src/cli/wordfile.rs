use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::unitary::{
    haar_random_in, matrix_from_rows, CoefficientAssignment, GroupKind, UnitaryError, UnitaryMatrix,
};
use crate::words::Word;

/// Unitarity slack allowed on matrices read from files.
pub const INPUT_TOL: f64 = 1e-6;

/// A coefficient given inline or as `"haar:<seed>"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientSpec {
    Matrix(Vec<Vec<[f64; 2]>>),
    Literal(String),
}

/// `{"variables": n, "coefficients": {...}, "word": "..."}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordFile {
    pub variables: usize,
    #[serde(default)]
    pub coefficients: BTreeMap<String, CoefficientSpec>,
    pub word: String,
}

/// Parse `"haar:<seed>"`.
pub fn parse_haar_literal(s: &str) -> Option<u64> {
    s.strip_prefix("haar:")?.parse().ok()
}

impl WordFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: WordFile =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid word file: {e}")))?;
        for (sym, spec) in &file.coefficients {
            if let CoefficientSpec::Literal(s) = spec {
                if parse_haar_literal(s).is_none() {
                    return Err(CliError::Parse(format!(
                        "coefficient `{sym}`: expected a matrix or \"haar:<seed>\", got {s:?}"
                    )));
                }
            }
        }
        Ok(file)
    }

    pub fn parse_word(&self) -> Result<Word, CliError> {
        let known: BTreeSet<String> = self.coefficients.keys().cloned().collect();
        Word::parse(&self.word, self.variables, &known).map_err(|e| CliError::Parse(format!("word: {e}")))
    }

    /// Seeds of the `haar:` coefficients.
    pub fn haar_seeds(&self) -> BTreeMap<String, u64> {
        self.coefficients
            .iter()
            .filter_map(|(k, v)| match v {
                CoefficientSpec::Literal(s) => parse_haar_literal(s).map(|seed| (k.clone(), seed)),
                CoefficientSpec::Matrix(_) => None,
            })
            .collect()
    }

    /// Dimension fixed by inline matrices, checked against `requested`.
    pub fn dimension(&self, requested: Option<usize>) -> Result<Option<usize>, CliError> {
        let mut dim = requested;
        for (sym, spec) in &self.coefficients {
            if let CoefficientSpec::Matrix(rows) = spec {
                let d = rows.len();
                match dim {
                    Some(e) if e != d => {
                        return Err(CliError::BadMatrix(format!(
                            "coefficient `{sym}` is {d}x{d}, expected dimension {e}"
                        )))
                    }
                    _ => dim = Some(d),
                }
            }
        }
        Ok(dim)
    }

    /// Check every inline matrix, whether or not a dimension is known.
    pub fn validate_matrices(&self, group: GroupKind) -> Result<(), CliError> {
        for (sym, spec) in &self.coefficients {
            if let CoefficientSpec::Matrix(rows) = spec {
                check_matrix(sym, rows, group)?;
            }
        }
        Ok(())
    }

    /// Materialize every coefficient in dimension `dim`.
    pub fn assignment(&self, dim: usize, group: GroupKind) -> Result<CoefficientAssignment, CliError> {
        let mut out = CoefficientAssignment::new();
        for (sym, spec) in &self.coefficients {
            let m = match spec {
                CoefficientSpec::Matrix(rows) => {
                    let m = check_matrix(sym, rows, group)?;
                    if m.dim() != dim {
                        return Err(CliError::BadMatrix(format!(
                            "coefficient `{sym}` has dimension {}, expected {dim}",
                            m.dim()
                        )));
                    }
                    m
                }
                CoefficientSpec::Literal(s) => {
                    let seed = parse_haar_literal(s).expect("validated on load");
                    haar_random_in(dim, seed, group).map_err(|e| CliError::BadMatrix(e.to_string()))?
                }
            };
            out.insert(sym.clone(), m);
        }
        Ok(out)
    }
}

fn check_matrix(sym: &str, rows: &[Vec<[f64; 2]>], group: GroupKind) -> Result<UnitaryMatrix, CliError> {
    let bad = |e: UnitaryError| CliError::BadMatrix(format!("coefficient `{sym}`: {e}"));
    let m = matrix_from_rows(rows).map_err(bad)?;
    UnitaryMatrix::new(m, group, INPUT_TOL).map_err(bad)
}

/// A target matrix read from a JSON file of rows.
pub fn load_target(path: &Path, group: GroupKind) -> Result<UnitaryMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("invalid target matrix: {e}")))?;
    check_matrix("target", &rows, group)
}
