//! The `wordsolve` command line: classify, check the cohomological
//! obstruction, solve and scan, all with JSON on stdout.
//!
//! Exit codes: 0 ok, 2 not found, 3 parse error, 4 bad matrix,
//! 5 a mathematical property failed, 6 unsupported prime,
//! 7 `--require-thm14` refused.

mod report;
mod wordfile;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use report::{
    CohomologyReport, CohomologySummary, PipelineReport, ScanPipelineReport, Seeds, ToolInfo, SCHEMA_VERSION,
};
pub use wordfile::{load_target, parse_haar_literal, CoefficientSpec, WordFile, INPUT_TOL};

use crate::cohomology::{
    self, hopf_axiom_check, power_map_pullback, top_class_obstruction, word_pullback_coefficient,
    AlgebraElement, BinomialConvention, CohomologyError, RingDescriptor, Shape,
};
use crate::nilpotent::{classify, Thm14Primes};
use crate::unitary::{haar_random_in, solve, surjectivity_scan, GroupKind, SolveConfig, UnitaryMatrix};
use crate::words::CommutatorTerm;

/// Environment variable capping the number of solver threads.
pub const THREADS_ENV: &str = "WORDSOLVE_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    BadMatrix(String),
    #[error("{0}")]
    UnsupportedPrime(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 3,
            CliError::BadMatrix(_) => 4,
            CliError::UnsupportedPrime(_) => 6,
            // unexpected failures inside a computation are math-property failures
            CliError::Internal(_) => 5,
        }
    }
}

impl From<CohomologyError> for CliError {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::NotOddPrime(_) | CohomologyError::UnsupportedPrime(_) => {
                CliError::UnsupportedPrime(e.to_string())
            }
            CohomologyError::ZeroCommutatorExponent { .. } | CohomologyError::IndexOutOfRange { .. } => {
                CliError::Parse(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "wordsolve", version, about = "Classify and solve equations over SU(p) from their content")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a word file.
    Analyze {
        wordfile: PathBuf,
        /// Also summarize the mod-p obstruction for this prime.
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Exact Hopf algebra computations mod p.
    Cohomology {
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum)]
        task: Task,
        /// Commutator terms `n1,m1,l1;n2,m2,l2;...` for word-coeff.
        #[arg(long)]
        terms: Option<String>,
        /// Power for power-map.
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = Convention::Adopted)]
        convention: Convention,
    },
    /// Solve w(x) = target.
    Solve {
        wordfile: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        /// `identity`, `haar:<seed>` or a path to a JSON matrix.
        #[arg(long, default_value = "identity")]
        target: String,
        /// Refuse unless the content criterion guarantees a solution in SU(dim).
        #[arg(long)]
        require_thm14: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Solve against Haar-random targets and report the success rate.
    Scan {
        wordfile: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 20)]
        targets: usize,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    HopfCheck,
    PowerMap,
    TopClass,
    WordCoeff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Adopted,
    Printed,
}

impl From<Convention> for BinomialConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Adopted => BinomialConvention::Adopted,
            Convention::Printed => BinomialConvention::Printed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub initial_step: f64,
    #[arg(long, default_value_t = 0.5)]
    pub shrink: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub armijo: f64,
    #[arg(long, default_value_t = 100)]
    pub reprojection_period: usize,
    /// Work in U(n) instead of SU(n).
    #[arg(long)]
    pub unitary: bool,
}

impl ConfigArgs {
    pub fn config(&self) -> Result<SolveConfig, CliError> {
        let cfg = SolveConfig {
            tol: self.tol,
            max_iters: self.max_iters,
            restarts: self.restarts,
            seed: self.seed,
            initial_step: self.initial_step,
            shrink: self.shrink,
            armijo: self.armijo,
            reprojection_period: self.reprojection_period,
            group: if self.unitary { GroupKind::Unitary } else { GroupKind::Special },
        };
        cfg.validate().map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(cfg)
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn json<T: serde::Serialize>(code: i32, value: &T) -> Self {
        let mut stdout = serde_json::to_string_pretty(value).expect("reports serialize");
        stdout.push('\n');
        CliOutput {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &CliError) -> Self {
        CliOutput {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parse arguments and run. Never panics on bad input.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli.command) {
        Ok(out) => out,
        Err(e) => CliOutput::error(&e),
    }
}

/// Run `f` on a pool capped by `WORDSOLVE_THREADS` when it is set.
fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Parse(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

pub fn execute(command: &Command) -> Result<CliOutput, CliError> {
    match command {
        Command::Analyze { wordfile, prime } => cmd_analyze(&WordFile::load(wordfile)?, *prime),
        Command::Cohomology {
            p,
            task,
            terms,
            n,
            convention,
        } => cmd_cohomology(*p, *task, terms.as_deref(), *n, (*convention).into()),
        Command::Solve {
            wordfile,
            dim,
            target,
            require_thm14,
            config,
        } => {
            let file = WordFile::load(wordfile)?;
            let cfg = config.config()?;
            cmd_solve(&file, *dim, target, *require_thm14, &cfg)
        }
        Command::Scan {
            wordfile,
            dim,
            targets,
            config,
        } => {
            let file = WordFile::load(wordfile)?;
            let cfg = config.config()?;
            cmd_scan(&file, *dim, *targets, &cfg)
        }
    }
}

/// Classification, and with `prime` the obstruction summary for the
/// content's commutator representative `[x1, x2]^b`.
pub fn cmd_analyze(file: &WordFile, prime: Option<u32>) -> Result<CliOutput, CliError> {
    let word = file.parse_word()?;
    file.validate_matrices(GroupKind::Unitary)?;
    file.dimension(None)?;
    let classification = classify(&word);
    let cohomology = match prime {
        Some(p) => Some(cohomology_summary(p, classification.heisenberg.map(|h| h.b), classification.in_derived)?),
        None => None,
    };
    let failed = cohomology.as_ref().is_some_and(|c| c.in_j);
    let report = PipelineReport {
        cohomology,
        ..PipelineReport::new(classification, Seeds::from_file(file, None))
    };
    Ok(CliOutput::json(if failed { 5 } else { 0 }, &report))
}

fn cohomology_summary(p: u32, b: Option<i64>, in_derived: bool) -> Result<CohomologySummary, CliError> {
    let top = top_class_obstruction(p)?;
    let coefficient = match b {
        Some(b) if in_derived && b != 0 => {
            let terms = [CommutatorTerm::new(1, 1, b)];
            Some(word_pullback_coefficient(&terms, 2, p)?.coefficient)
        }
        Some(_) if in_derived => Some(0),
        _ => None,
    };
    Ok(CohomologySummary {
        p,
        in_j: top.in_j,
        coefficient,
        units_pinned: false,
        units: top.units.iter().map(|u| u.name()).collect(),
        monomial: top.monomial,
        sign: top.sign,
    })
}

/// `n1,m1,l1;n2,m2,l2;...`.
pub fn parse_terms(text: &str) -> Result<Vec<CommutatorTerm>, CliError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|chunk| {
            let parts: Vec<i64> = chunk
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Parse(format!("term {chunk:?}: {e}")))?;
            match parts.as_slice() {
                [n, m, l] => Ok(CommutatorTerm::new(*n, *m, *l)),
                _ => Err(CliError::Parse(format!("term {chunk:?}: expected n,m,l"))),
            }
        })
        .collect()
}

pub fn cmd_cohomology(
    p: u32,
    task: Task,
    terms: Option<&str>,
    n: i64,
    convention: BinomialConvention,
) -> Result<CliOutput, CliError> {
    if !cohomology::SUPPORTED_PRIMES.contains(&p) {
        return Err(CliError::UnsupportedPrime(format!(
            "p = {p} is not supported; use one of {:?}",
            cohomology::SUPPORTED_PRIMES
        )));
    }
    let (ok, result) = match task {
        Task::HopfCheck => {
            let r = hopf_axiom_check(p, convention)?;
            (r.passed, serde_json::to_value(&r))
        }
        Task::TopClass => {
            let r = top_class_obstruction(p)?;
            (!r.in_j, serde_json::to_value(&r))
        }
        Task::PowerMap => {
            let r = power_map_report(p, n, convention)?;
            (r.all_decomposable, serde_json::to_value(&r))
        }
        Task::WordCoeff => {
            let text = terms.ok_or_else(|| CliError::Parse("word-coeff needs --terms".into()))?;
            let terms = parse_terms(text)?;
            if terms.is_empty() {
                return Err(CliError::Parse("--terms is empty".into()));
            }
            let r = word_coeff_report(p, &terms)?;
            (r.matches_heisenberg, serde_json::to_value(&r))
        }
    };
    let result = result.map_err(|e| CliError::Internal(e.to_string()))?;
    let report = CohomologyReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::current(),
        p,
        task: task
            .to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string(),
        passed: ok,
        result,
    };
    Ok(CliOutput::json(if ok { 0 } else { 5 }, &report))
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PowerMapEntry {
    pub generator: String,
    pub image: AlgebraElement,
    /// `μ_n^*(g) - n·g` has only decomposable terms.
    pub decomposable_remainder: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PowerMapReport {
    pub n: i64,
    pub convention: BinomialConvention,
    pub images: Vec<PowerMapEntry>,
    pub all_decomposable: bool,
}

pub fn power_map_report(p: u32, n: i64, convention: BinomialConvention) -> Result<PowerMapReport, CliError> {
    let ring = RingDescriptor::new(p, Shape::Pu)?;
    let mu = power_map_pullback(n, ring, convention);
    let images: Vec<PowerMapEntry> = ring
        .generators()
        .into_iter()
        .map(|g| {
            let image = mu.image(g).clone();
            let linear = AlgebraElement::generator(ring, 0, g).scale(n);
            let remainder = image.sub(&linear).expect("same ring");
            PowerMapEntry {
                generator: g.to_string(),
                decomposable_remainder: remainder.is_decomposable(),
                image,
            }
        })
        .collect();
    let all_decomposable = images.iter().all(|e| e.decomposable_remainder);
    Ok(PowerMapReport {
        n,
        convention,
        images,
        all_decomposable,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct WordCoeffEntry {
    pub i: u32,
    pub coefficient: u32,
    pub unit: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct WordCoeffReport {
    pub terms: Vec<[i64; 3]>,
    /// `Σ n_k m_k l_k`, the Heisenberg coordinate of the content.
    pub b: i64,
    pub b_mod_p: u32,
    pub coefficients: Vec<WordCoeffEntry>,
    pub matches_heisenberg: bool,
}

pub fn word_coeff_report(p: u32, terms: &[CommutatorTerm]) -> Result<WordCoeffReport, CliError> {
    let word = crate::words::commutator_basis_word(terms).map_err(|e| CliError::Parse(e.to_string()))?;
    let h = crate::nilpotent::heisenberg_eval(&word).map_err(|e| CliError::Internal(e.to_string()))?;
    let b_mod_p = cohomology::field::reduce(h.b, p);
    let mut coefficients = Vec::new();
    for i in 2..=p {
        let c = word_pullback_coefficient(terms, i, p)?;
        coefficients.push(WordCoeffEntry {
            i,
            coefficient: c.coefficient,
            unit: c.unit.name(),
        });
    }
    let matches_heisenberg = coefficients.iter().all(|c| c.coefficient == b_mod_p);
    Ok(WordCoeffReport {
        terms: terms.iter().map(|t| [t.n, t.m, t.l]).collect(),
        b: h.b,
        b_mod_p,
        coefficients,
        matches_heisenberg,
    })
}

fn resolve_dim(file: &WordFile, dim: Option<usize>) -> Result<usize, CliError> {
    match file.dimension(dim)? {
        Some(d) if d >= 2 => Ok(d),
        Some(d) => Err(CliError::BadMatrix(format!("dimension must be at least 2, got {d}"))),
        None => Err(CliError::Parse("no dimension: pass --dim or give an inline matrix".into())),
    }
}

fn resolve_target(spec: &str, dim: usize, group: GroupKind) -> Result<(UnitaryMatrix, Option<u64>), CliError> {
    if spec == "identity" {
        return Ok((UnitaryMatrix::identity(dim), None));
    }
    if let Some(seed) = parse_haar_literal(spec) {
        let m = haar_random_in(dim, seed, group).map_err(|e| CliError::BadMatrix(e.to_string()))?;
        return Ok((m, Some(seed)));
    }
    if spec.starts_with("haar:") {
        return Err(CliError::Parse(format!("bad target {spec:?}")));
    }
    let m = load_target(std::path::Path::new(spec), group)?;
    if m.dim() != dim {
        return Err(CliError::BadMatrix(format!("target has dimension {}, expected {dim}", m.dim())));
    }
    Ok((m, None))
}

pub fn cmd_solve(
    file: &WordFile,
    dim: Option<usize>,
    target: &str,
    require_thm14: bool,
    cfg: &SolveConfig,
) -> Result<CliOutput, CliError> {
    let word = file.parse_word()?;
    file.validate_matrices(cfg.group)?;
    let dim = resolve_dim(file, dim)?;
    let classification = classify(&word);
    let (target, target_seed) = resolve_target(target, dim, cfg.group)?;
    let mut seeds = Seeds::from_file(file, Some(cfg.seed));
    seeds.target = target_seed;

    if require_thm14 && !classification.thm14_primes.admits(dim as u64) {
        let reason = match &classification.thm14_primes {
            Thm14Primes::None => "the content criterion is silent for this equation".to_string(),
            _ if !crate::nilpotent::is_prime(dim as u64) => format!("dimension {dim} is not prime"),
            Thm14Primes::AllPrimesNotDividing { b, .. } => format!("{dim} divides the Heisenberg coordinate b = {b}"),
            Thm14Primes::AllPrimes => format!("dimension {dim} is not prime"),
        };
        let report = PipelineReport {
            refused: Some(format!("--require-thm14: {reason}")),
            ..PipelineReport::new(classification, seeds)
        };
        return Ok(CliOutput::json(7, &report));
    }

    if word.n() == 0 {
        return Err(CliError::Parse("the word has no variables".into()));
    }
    let coeffs = file.assignment(dim, cfg.group)?;
    let outcome = with_thread_cap(|| solve(&word, &coeffs, &target, cfg))?
        .map_err(|e| CliError::BadMatrix(e.to_string()))?;
    let code = if outcome.is_solved() { 0 } else { 2 };
    let report = PipelineReport {
        solve: Some(outcome),
        config: Some(*cfg),
        dim: Some(dim),
        ..PipelineReport::new(classification, seeds)
    };
    Ok(CliOutput::json(code, &report))
}

pub fn cmd_scan(file: &WordFile, dim: Option<usize>, targets: usize, cfg: &SolveConfig) -> Result<CliOutput, CliError> {
    let word = file.parse_word()?;
    file.validate_matrices(cfg.group)?;
    let dim = resolve_dim(file, dim)?;
    if targets == 0 {
        return Err(CliError::Parse("--targets must be at least 1".into()));
    }
    if word.n() == 0 {
        return Err(CliError::Parse("the word has no variables".into()));
    }
    let classification = classify(&word);
    let coeffs = file.assignment(dim, cfg.group)?;
    let scan = with_thread_cap(|| surjectivity_scan(&word, &coeffs, dim, targets, cfg))?
        .map_err(|e| CliError::BadMatrix(e.to_string()))?;
    let report = ScanPipelineReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::current(),
        classification,
        config: *cfg,
        scan,
        seeds: Seeds::from_file(file, Some(cfg.seed)),
    };
    Ok(CliOutput::json(0, &report))
}
