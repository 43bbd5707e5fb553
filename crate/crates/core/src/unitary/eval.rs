use std::collections::BTreeMap;

use super::matrix::{project_to_algebra, CMatrix, GroupKind, UnitaryMatrix, C64};
use super::UnitaryError;
use crate::words::{Token, Word};

/// Map from coefficient symbol to its matrix.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoefficientAssignment {
    map: BTreeMap<String, UnitaryMatrix>,
}

impl CoefficientAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, symbol: impl Into<String>, m: UnitaryMatrix) -> Option<UnitaryMatrix> {
        self.map.insert(symbol.into(), m)
    }

    pub fn with(mut self, symbol: impl Into<String>, m: UnitaryMatrix) -> Self {
        self.insert(symbol, m);
        self
    }

    pub fn get(&self, symbol: &str) -> Option<&UnitaryMatrix> {
        self.map.get(symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &UnitaryMatrix)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl FromIterator<(String, UnitaryMatrix)> for CoefficientAssignment {
    fn from_iter<I: IntoIterator<Item = (String, UnitaryMatrix)>>(iter: I) -> Self {
        CoefficientAssignment {
            map: iter.into_iter().collect(),
        }
    }
}

/// One letter of the expanded word: a constant or a single variable
/// occurrence `x_i^{±1}` (variable indices are 0-based here).
#[derive(Debug, Clone)]
pub(crate) enum Letter {
    Const(CMatrix),
    Var { index: usize, inverse: bool },
}

/// A word with its coefficients resolved, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledWord {
    n: usize,
    dim: usize,
    letters: Vec<Letter>,
}

impl CompiledWord {
    pub fn new(w: &Word, coeffs: &CoefficientAssignment, dim: usize) -> Result<Self, UnitaryError> {
        let mut letters: Vec<Letter> = Vec::new();
        for token in w.tokens() {
            match token {
                Token::Coefficient { symbol, inverted } => {
                    let m = coeffs
                        .get(symbol)
                        .ok_or_else(|| UnitaryError::UnresolvedSymbol(symbol.clone()))?;
                    if m.dim() != dim {
                        return Err(UnitaryError::DimensionMismatch {
                            expected: dim,
                            found: m.dim(),
                        });
                    }
                    let m = if *inverted {
                        m.matrix().adjoint()
                    } else {
                        m.matrix().clone()
                    };
                    // fold adjacent constants
                    match letters.last_mut() {
                        Some(Letter::Const(prev)) => *prev = &*prev * m,
                        _ => letters.push(Letter::Const(m)),
                    }
                }
                Token::Variable { index, exponent } => {
                    for _ in 0..exponent.unsigned_abs() {
                        letters.push(Letter::Var {
                            index: index - 1,
                            inverse: *exponent < 0,
                        });
                    }
                }
            }
        }
        Ok(CompiledWord {
            n: w.n(),
            dim,
            letters,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of variable occurrences.
    pub fn variable_occurrences(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| matches!(l, Letter::Var { .. }))
            .count()
    }

    /// One past the largest variable index that occurs.
    fn variables_used(&self) -> usize {
        self.letters
            .iter()
            .filter_map(|l| match l {
                Letter::Var { index, .. } => Some(index + 1),
                Letter::Const(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Accepts `n` matrices, or fewer when the missing variables do not occur.
    fn check_vars(&self, vars: &[CMatrix]) -> Result<(), UnitaryError> {
        if vars.len() > self.n || vars.len() < self.variables_used() {
            return Err(UnitaryError::VariableCount {
                expected: self.n,
                found: vars.len(),
            });
        }
        for v in vars {
            if v.nrows() != self.dim || v.ncols() != self.dim {
                return Err(UnitaryError::DimensionMismatch {
                    expected: self.dim,
                    found: v.nrows(),
                });
            }
        }
        Ok(())
    }

    fn letter_value(&self, letter: &Letter, vars: &[CMatrix]) -> CMatrix {
        match letter {
            Letter::Const(m) => m.clone(),
            Letter::Var { index, inverse: false } => vars[*index].clone(),
            Letter::Var { index, inverse: true } => vars[*index].adjoint(),
        }
    }

    /// Left-to-right product; the identity for the empty word.
    pub fn evaluate(&self, vars: &[CMatrix]) -> Result<CMatrix, UnitaryError> {
        self.check_vars(vars)?;
        Ok(self.eval_unchecked(vars))
    }

    pub(crate) fn eval_unchecked(&self, vars: &[CMatrix]) -> CMatrix {
        let mut acc = CMatrix::identity(self.dim, self.dim);
        for l in &self.letters {
            acc = match l {
                Letter::Const(m) => acc * m,
                Letter::Var { index, inverse: false } => acc * &vars[*index],
                Letter::Var { index, inverse: true } => acc * vars[*index].adjoint(),
            };
        }
        acc
    }

    /// `f = ‖w(vars) - target‖_F²` with Euclidean and Riemannian gradients.
    pub fn residual_and_gradient(
        &self,
        vars: &[CMatrix],
        target: &CMatrix,
        group: GroupKind,
    ) -> Result<Gradient, UnitaryError> {
        self.check_vars(vars)?;
        if target.nrows() != self.dim || target.ncols() != self.dim {
            return Err(UnitaryError::DimensionMismatch {
                expected: self.dim,
                found: target.nrows(),
            });
        }
        Ok(self.gradient_unchecked(vars, target, group))
    }

    pub(crate) fn gradient_unchecked(&self, vars: &[CMatrix], target: &CMatrix, group: GroupKind) -> Gradient {
        let d = self.dim;
        let len = self.letters.len();
        let values: Vec<CMatrix> = self.letters.iter().map(|l| self.letter_value(l, vars)).collect();
        // prefix[j] = F_0 ... F_{j-1}; suffix[j] = F_{j+1} ... F_{L-1}
        let mut prefix = Vec::with_capacity(len + 1);
        prefix.push(CMatrix::identity(d, d));
        for v in &values {
            let next = prefix.last().expect("nonempty") * v;
            prefix.push(next);
        }
        let mut suffix = vec![CMatrix::identity(d, d); len];
        for j in (0..len.saturating_sub(1)).rev() {
            suffix[j] = &values[j + 1] * &suffix[j + 1];
        }
        let w = &prefix[len];
        let r = w - target;
        let f = r.norm_squared();
        let two = C64::new(2.0, 0.0);
        let mut euclidean = vec![CMatrix::zeros(d, d); vars.len()];
        for (j, l) in self.letters.iter().enumerate() {
            if let Letter::Var { index, inverse } = l {
                let core = prefix[j].adjoint() * &r * suffix[j].adjoint() * two;
                if *inverse {
                    // d(v⁻¹) = -v⁻¹ dv v⁻¹, and v⁻ᴴ = v on the group
                    let v = &vars[*index];
                    euclidean[*index] -= v * core * v;
                } else {
                    euclidean[*index] += core;
                }
            }
        }
        let algebra: Vec<CMatrix> = vars
            .iter()
            .zip(&euclidean)
            .map(|(v, g)| project_to_algebra(&(v.adjoint() * g), group))
            .collect();
        Gradient {
            f,
            value: w.clone(),
            euclidean,
            algebra,
        }
    }
}

/// Objective value and gradients at a point.
#[derive(Debug, Clone)]
pub struct Gradient {
    /// `‖w - target‖_F²`.
    pub f: f64,
    /// `w(vars)`.
    pub value: CMatrix,
    /// Euclidean gradient per variable.
    pub euclidean: Vec<CMatrix>,
    /// `P(vᴴ G_v)` per variable; the Riemannian gradient is `v` times this.
    pub algebra: Vec<CMatrix>,
}

impl Gradient {
    pub fn riemannian(&self, vars: &[CMatrix]) -> Vec<CMatrix> {
        vars.iter().zip(&self.algebra).map(|(v, a)| v * a).collect()
    }

    /// `Σ ‖P(vᴴ G_v)‖_F²`.
    pub fn norm_squared(&self) -> f64 {
        self.algebra.iter().map(CMatrix::norm_squared).sum()
    }
}

/// Evaluate `w` with variables `vars[i]` for `x_{i+1}`.
pub fn evaluate(w: &Word, vars: &[UnitaryMatrix], coeffs: &CoefficientAssignment) -> Result<CMatrix, UnitaryError> {
    let dim = common_dim(vars, coeffs)?;
    let compiled = CompiledWord::new(w, coeffs, dim)?;
    let raw: Vec<CMatrix> = vars.iter().map(|v| v.matrix().clone()).collect();
    compiled.evaluate(&raw)
}

/// `(f, riemannian gradients)` as in [`CompiledWord::residual_and_gradient`].
pub fn residual_and_gradient(
    w: &Word,
    vars: &[UnitaryMatrix],
    coeffs: &CoefficientAssignment,
    target: &UnitaryMatrix,
    group: GroupKind,
) -> Result<(f64, Vec<CMatrix>), UnitaryError> {
    let compiled = CompiledWord::new(w, coeffs, target.dim())?;
    let raw: Vec<CMatrix> = vars.iter().map(|v| v.matrix().clone()).collect();
    let g = compiled.residual_and_gradient(&raw, target.matrix(), group)?;
    Ok((g.f, g.riemannian(&raw)))
}

fn common_dim(vars: &[UnitaryMatrix], coeffs: &CoefficientAssignment) -> Result<usize, UnitaryError> {
    let mut dims = vars.iter().map(UnitaryMatrix::dim).chain(coeffs.iter().map(|(_, m)| m.dim()));
    let Some(d) = dims.next() else {
        return Err(UnitaryError::NoMatrices);
    };
    for e in dims {
        if e != d {
            return Err(UnitaryError::DimensionMismatch { expected: d, found: e });
        }
    }
    Ok(d)
}
