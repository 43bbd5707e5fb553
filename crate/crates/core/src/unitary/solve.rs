use std::collections::BTreeMap;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eval::{CoefficientAssignment, CompiledWord};
use super::matrix::{
    exp_skew_hermitian, haar_from_rng, haar_random_in, reproject, unitarity_defect, CMatrix, GroupKind,
    UnitaryMatrix, C64,
};
use super::UnitaryError;
use crate::words::Word;

/// Below this the backtracking search gives up on the current restart.
const MIN_STEP: f64 = 1e-14;

/// Cap on the Barzilai-Borwein trial step.
const MAX_STEP: f64 = 1e3;

/// Offset separating the target stream of a scan from the restart seeds.
const TARGET_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Threshold on `‖w - target‖_F`.
    pub tol: f64,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
    pub initial_step: f64,
    pub shrink: f64,
    pub armijo: f64,
    pub reprojection_period: usize,
    pub group: GroupKind,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tol: 1e-8,
            max_iters: 5000,
            restarts: 50,
            seed: 0,
            initial_step: 1.0,
            shrink: 0.5,
            armijo: 1e-4,
            reprojection_period: 100,
            group: GroupKind::Special,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), UnitaryError> {
        let positive = self.tol > 0.0
            && self.max_iters > 0
            && self.restarts > 0
            && self.initial_step > 0.0
            && self.armijo > 0.0
            && self.reprojection_period > 0;
        if !positive || !(self.shrink > 0.0 && self.shrink < 1.0) || !(self.armijo < 1.0) {
            return Err(UnitaryError::InvalidConfig(format!("{self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    /// `x1`, `x2`, ... to matrices.
    pub assignment: BTreeMap<String, UnitaryMatrix>,
    pub residual: f64,
    pub restart_index: usize,
    pub iterations: usize,
}

impl Solution {
    pub fn variables(&self) -> Vec<UnitaryMatrix> {
        let mut out: Vec<(usize, &UnitaryMatrix)> = self
            .assignment
            .iter()
            .map(|(k, v)| (k[1..].parse::<usize>().expect("x<i> key"), v))
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out.into_iter().map(|(_, v)| v.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum SolveOutcome {
    #[serde(rename = "solved")]
    Solved(Solution),
    /// The budget ran out. Says nothing about existence.
    #[serde(rename = "NOT_FOUND")]
    NotFound {
        best_residual: f64,
        restarts: usize,
        max_iters: usize,
    },
}

impl SolveOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, SolveOutcome::Solved(_))
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Solved(s) => Some(s),
            SolveOutcome::NotFound { .. } => None,
        }
    }

    /// Final residual of the solution, or the best one seen.
    pub fn residual(&self) -> f64 {
        match self {
            SolveOutcome::Solved(s) => s.residual,
            SolveOutcome::NotFound { best_residual, .. } => *best_residual,
        }
    }
}

/// What happened in one restart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub solved: bool,
    pub residual: f64,
    pub iterations: usize,
    /// Largest `‖vᴴv - I‖_F` seen just before a reprojection.
    pub max_drift: f64,
    /// Every accepted step lowered (or kept) the objective.
    pub monotone: bool,
}

/// Outcome plus the summaries of every restart that was run.
#[derive(Debug, Clone)]
pub struct SolveRun {
    pub outcome: SolveOutcome,
    pub restarts: Vec<RestartSummary>,
}

struct RestartResult {
    summary: RestartSummary,
    vars: Vec<CMatrix>,
}

fn descend(word: &CompiledWord, target: &CMatrix, cfg: &SolveConfig, restart: usize) -> RestartResult {
    let dim = word.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
    let mut vars: Vec<CMatrix> = (0..word.n())
        .map(|_| haar_from_rng(dim, cfg.group, &mut rng).into_matrix())
        .collect();
    let mut summary = RestartSummary {
        restart,
        solved: false,
        residual: f64::INFINITY,
        iterations: 0,
        max_drift: 0.0,
        monotone: true,
    };
    let mut grad = word.gradient_unchecked(&vars, target, cfg.group);
    let mut iter = 0;
    // previous step `s = -η A` and gradient, for the Barzilai-Borwein trial
    let mut previous: Option<(f64, Vec<CMatrix>)> = None;
    loop {
        let residual = grad.f.sqrt();
        summary.residual = residual;
        summary.iterations = iter;
        if residual <= cfg.tol {
            // finalize on the group and re-measure
            let projected: Vec<CMatrix> = vars.iter().map(|v| reproject(v, cfg.group)).collect();
            let r = (word.eval_unchecked(&projected) - target).norm();
            if r <= cfg.tol {
                summary.solved = true;
                summary.residual = r;
                return RestartResult { summary, vars: projected };
            }
            vars = projected;
            grad = word.gradient_unchecked(&vars, target, cfg.group);
            if grad.f.sqrt() > cfg.tol {
                continue;
            }
        }
        if iter >= cfg.max_iters {
            break;
        }
        let slope = grad.norm_squared();
        if slope == 0.0 {
            break;
        }
        let mut eta = match &previous {
            Some((eta_prev, a_prev)) => bb_step(*eta_prev, a_prev, &grad.algebra).unwrap_or(cfg.initial_step),
            None => cfg.initial_step,
        };
        let accepted = loop {
            let candidate: Vec<CMatrix> = vars
                .iter()
                .zip(&grad.algebra)
                .map(|(v, a)| v * exp_skew_hermitian(&(a * C64::new(-eta, 0.0))))
                .collect();
            let f_new = (word.eval_unchecked(&candidate) - target).norm_squared();
            if f_new <= grad.f - cfg.armijo * eta * slope {
                if f_new > grad.f {
                    summary.monotone = false;
                }
                break Some(candidate);
            }
            eta *= cfg.shrink;
            if eta < MIN_STEP {
                break None;
            }
        };
        let Some(next) = accepted else { break };
        vars = next;
        previous = Some((eta, std::mem::take(&mut grad.algebra)));
        iter += 1;
        if iter % cfg.reprojection_period == 0 {
            for v in vars.iter_mut() {
                summary.max_drift = summary.max_drift.max(unitarity_defect(v));
                *v = reproject(v, cfg.group);
            }
        }
        grad = word.gradient_unchecked(&vars, target, cfg.group);
    }
    summary.iterations = iter;
    RestartResult { summary, vars }
}

/// `⟨s,s⟩/⟨s,y⟩` with `s = -η A_prev`, `y = A - A_prev`, all in the
/// left-trivialized coordinates, clamped to a sane range.
fn bb_step(eta_prev: f64, a_prev: &[CMatrix], a: &[CMatrix]) -> Option<f64> {
    let mut ss = 0.0;
    let mut sy = 0.0;
    for (p, c) in a_prev.iter().zip(a) {
        let pp = p.norm_squared();
        let pc = (p.adjoint() * c).trace().re;
        ss += eta_prev * eta_prev * pp;
        sy += -eta_prev * (pc - pp);
    }
    let step = ss / sy;
    (sy > 0.0 && step.is_finite()).then(|| step.clamp(MIN_STEP * 1e4, MAX_STEP))
}

fn assemble(result: RestartResult) -> Solution {
    Solution {
        assignment: result
            .vars
            .into_iter()
            .enumerate()
            .map(|(i, v)| (format!("x{}", i + 1), UnitaryMatrix::from_raw(v)))
            .collect(),
        residual: result.summary.residual,
        restart_index: result.summary.restart,
        iterations: result.summary.iterations,
    }
}

fn run_restarts(word: &CompiledWord, target: &CMatrix, cfg: &SolveConfig, parallel: bool) -> SolveRun {
    let chunk = if parallel { rayon::current_num_threads().max(1) } else { 1 };
    let mut summaries = Vec::new();
    let mut start = 0;
    while start < cfg.restarts {
        let end = (start + chunk).min(cfg.restarts);
        let batch: Vec<RestartResult> = if parallel {
            (start..end).into_par_iter().map(|r| descend(word, target, cfg, r)).collect()
        } else {
            (start..end).map(|r| descend(word, target, cfg, r)).collect()
        };
        summaries.extend(batch.iter().map(|r| r.summary.clone()));
        // batch is in restart order, so the first hit has the lowest index
        if let Some(hit) = batch.into_iter().find(|r| r.summary.solved) {
            return SolveRun {
                outcome: SolveOutcome::Solved(assemble(hit)),
                restarts: summaries,
            };
        }
        start = end;
    }
    let best_residual = summaries.iter().map(|s| s.residual).fold(f64::INFINITY, f64::min);
    SolveRun {
        outcome: SolveOutcome::NotFound {
            best_residual,
            restarts: cfg.restarts,
            max_iters: cfg.max_iters,
        },
        restarts: summaries,
    }
}

fn prepare(
    w: &Word,
    coeffs: &CoefficientAssignment,
    target: &UnitaryMatrix,
    cfg: &SolveConfig,
) -> Result<CompiledWord, UnitaryError> {
    cfg.validate()?;
    if w.n() == 0 {
        return Err(UnitaryError::NoVariables);
    }
    CompiledWord::new(w, coeffs, target.dim())
}

/// Solve `w(x) = target` by Riemannian descent with random restarts run in
/// parallel. The solution comes from the lowest-numbered successful restart,
/// so the result does not depend on the thread count.
pub fn solve(
    w: &Word,
    coeffs: &CoefficientAssignment,
    target: &UnitaryMatrix,
    cfg: &SolveConfig,
) -> Result<SolveOutcome, UnitaryError> {
    Ok(solve_traced(w, coeffs, target, cfg)?.outcome)
}

/// [`solve`] with per-restart diagnostics.
pub fn solve_traced(
    w: &Word,
    coeffs: &CoefficientAssignment,
    target: &UnitaryMatrix,
    cfg: &SolveConfig,
) -> Result<SolveRun, UnitaryError> {
    let compiled = prepare(w, coeffs, target, cfg)?;
    Ok(run_restarts(&compiled, target.matrix(), cfg, true))
}

/// Like [`solve`] but runs restarts one after another on the calling thread.
pub fn solve_sequential(
    w: &Word,
    coeffs: &CoefficientAssignment,
    target: &UnitaryMatrix,
    cfg: &SolveConfig,
) -> Result<SolveRun, UnitaryError> {
    let compiled = prepare(w, coeffs, target, cfg)?;
    Ok(run_restarts(&compiled, target.matrix(), cfg, false))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTarget {
    pub index: usize,
    pub target_seed: u64,
    pub solved: bool,
    pub residual: f64,
    pub restart_index: Option<usize>,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub dim: usize,
    pub num_targets: usize,
    pub solved: usize,
    pub success_rate: f64,
    /// Largest final residual over all targets, solved or not.
    pub worst_residual: f64,
    pub targets: Vec<ScanTarget>,
}

/// Seed of the `k`-th Haar target in a scan.
pub fn scan_target_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add(TARGET_STREAM).wrapping_add(k as u64)
}

/// Solve against `num_targets` Haar targets, targets in parallel. Target
/// `k` is `haar_random(dim, scan_target_seed(cfg.seed, k))`.
pub fn surjectivity_scan(
    w: &Word,
    coeffs: &CoefficientAssignment,
    dim: usize,
    num_targets: usize,
    cfg: &SolveConfig,
) -> Result<ScanReport, UnitaryError> {
    cfg.validate()?;
    if num_targets == 0 {
        return Err(UnitaryError::InvalidConfig("num_targets must be at least 1".into()));
    }
    if w.n() == 0 {
        return Err(UnitaryError::NoVariables);
    }
    let compiled = CompiledWord::new(w, coeffs, dim)?;
    let targets: Vec<ScanTarget> = (0..num_targets)
        .into_par_iter()
        .map(|k| {
            let target_seed = scan_target_seed(cfg.seed, k);
            let target = haar_random_in(dim, target_seed, cfg.group)?;
            let run = run_restarts(&compiled, target.matrix(), cfg, false);
            let sol = run.outcome.solution();
            Ok(ScanTarget {
                index: k,
                target_seed,
                solved: sol.is_some(),
                residual: run.outcome.residual(),
                restart_index: sol.map(|s| s.restart_index),
                iterations: sol.map(|s| s.iterations),
            })
        })
        .collect::<Result<_, UnitaryError>>()?;
    let solved = targets.iter().filter(|t| t.solved).count();
    let worst_residual = targets.iter().map(|t| t.residual).fold(0.0, f64::max);
    Ok(ScanReport {
        dim,
        num_targets,
        solved,
        success_rate: solved as f64 / num_targets as f64,
        worst_residual,
        targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::eval::evaluate;
    use crate::unitary::matrix::{haar_random, CONSTRUCTION_TOL};
    use std::collections::BTreeSet;

    fn parse(text: &str, n: usize, syms: &[&str]) -> Word {
        let known: BTreeSet<String> = syms.iter().map(|s| s.to_string()).collect();
        Word::parse(text, n, &known).unwrap()
    }

    fn check_solution(w: &Word, coeffs: &CoefficientAssignment, target: &UnitaryMatrix, s: &Solution, tol: f64) {
        let vars = s.variables();
        for v in &vars {
            assert!(v.unitarity_defect() <= CONSTRUCTION_TOL);
            assert!((v.determinant() - C64::new(1.0, 0.0)).norm() <= CONSTRUCTION_TOL);
        }
        let r = (evaluate(w, &vars, coeffs).unwrap() - target.matrix()).norm();
        assert!((r - s.residual).abs() <= 1e-12);
        assert!(s.residual <= tol);
    }

    #[test]
    fn commutator_hits_diagonal_target() {
        let w = parse("x1 x2 x1^-1 x2^-1", 2, &[]);
        let target = UnitaryMatrix::diagonal(&[C64::new(0.0, 1.0), C64::new(0.0, -1.0)], GroupKind::Special).unwrap();
        let cfg = SolveConfig::default();
        let run = solve_traced(&w, &CoefficientAssignment::new(), &target, &cfg).unwrap();
        let s = run.outcome.solution().expect("solved");
        check_solution(&w, &CoefficientAssignment::new(), &target, s, cfg.tol);
        for r in &run.restarts {
            assert!(r.monotone);
            assert!(r.max_drift <= 1e-6);
        }
    }

    #[test]
    fn one_letter_word_solves_immediately() {
        let w = parse("x1", 1, &[]);
        let g = haar_random(3, 7).unwrap();
        let cfg = SolveConfig::default();
        let out = solve(&w, &CoefficientAssignment::new(), &g, &cfg).unwrap();
        let s = out.solution().expect("solved");
        assert_eq!(s.restart_index, 0);
        assert!(s.iterations <= 50, "took {} iterations", s.iterations);
        check_solution(&w, &CoefficientAssignment::new(), &g, s, cfg.tol);
    }

    #[test]
    fn coefficient_commutator_on_su3() {
        let w = parse("g1 x1 g2 x2 g1^-1 x1^-1 g2^-1 x2^-1", 2, &["g1", "g2"]);
        let coeffs = CoefficientAssignment::new()
            .with("g1", haar_random(3, 101).unwrap())
            .with("g2", haar_random(3, 102).unwrap());
        let target = UnitaryMatrix::identity(3);
        let cfg = SolveConfig { seed: 5, ..SolveConfig::default() };
        let out = solve(&w, &coeffs, &target, &cfg).unwrap();
        check_solution(&w, &coeffs, &target, out.solution().expect("solved"), cfg.tol);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let w = parse("g1 x1 x2 g1^-1 x1^-1 x2^-1", 2, &["g1"]);
        let coeffs = CoefficientAssignment::new().with("g1", haar_random(2, 3).unwrap());
        let target = haar_random(2, 4).unwrap();
        let cfg = SolveConfig { seed: 17, max_iters: 300, restarts: 6, ..SolveConfig::default() };
        let a = solve_traced(&w, &coeffs, &target, &cfg).unwrap();
        let b = solve_sequential(&w, &coeffs, &target, &cfg).unwrap();
        assert_eq!(a.outcome, b.outcome);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| solve(&w, &coeffs, &target, &cfg).unwrap());
        assert_eq!(a.outcome, c);
    }

    #[test]
    fn exhausted_budget_is_not_found() {
        // [x1,x2] cannot reach a non-special target on SU(2)
        let w = parse("x1 x2 x1^-1 x2^-1", 2, &[]);
        let target = UnitaryMatrix::diagonal(&[C64::new(0.0, 1.0), C64::new(0.0, 1.0)], GroupKind::Unitary).unwrap();
        let cfg = SolveConfig { max_iters: 20, restarts: 3, ..SolveConfig::default() };
        let out = solve(&w, &CoefficientAssignment::new(), &target, &cfg).unwrap();
        assert!(matches!(out, SolveOutcome::NotFound { restarts: 3, .. }));
        assert!(out.residual() > 1.0);
    }

    #[test]
    fn unitary_mode_one_variable() {
        let w = parse("g1 x1^2", 1, &["g1"]);
        let g = haar_random_in(3, 40, GroupKind::Unitary).unwrap();
        let coeffs = CoefficientAssignment::new().with("g1", g);
        let target = haar_random_in(3, 41, GroupKind::Unitary).unwrap();
        let cfg = SolveConfig { group: GroupKind::Unitary, ..SolveConfig::default() };
        let out = solve(&w, &coeffs, &target, &cfg).unwrap();
        let s = out.solution().expect("solved");
        let r = (evaluate(&w, &s.variables(), &coeffs).unwrap() - target.matrix()).norm();
        assert!(r <= cfg.tol);
    }

    #[test]
    fn config_validation() {
        assert!(SolveConfig::default().validate().is_ok());
        for bad in [
            SolveConfig { shrink: 1.0, ..SolveConfig::default() },
            SolveConfig { tol: 0.0, ..SolveConfig::default() },
            SolveConfig { restarts: 0, ..SolveConfig::default() },
            SolveConfig { reprojection_period: 0, ..SolveConfig::default() },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn small_scan_is_deterministic() {
        let w = parse("x1 x2 x1^-1 x2^-1", 2, &[]);
        let cfg = SolveConfig { seed: 3, ..SolveConfig::default() };
        let a = surjectivity_scan(&w, &CoefficientAssignment::new(), 2, 4, &cfg).unwrap();
        let b = surjectivity_scan(&w, &CoefficientAssignment::new(), 2, 4, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.success_rate, 1.0);
        assert!(a.worst_residual <= cfg.tol);
    }
}
