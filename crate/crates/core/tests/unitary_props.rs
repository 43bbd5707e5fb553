use std::collections::BTreeSet;
use std::f64::consts::PI;

use proptest::prelude::*;
use wordsolve::unitary::{
    evaluate, haar_random, haar_random_in, solve, solve_sequential, solve_traced, CoefficientAssignment, GroupKind,
    SolveConfig, UnitaryMatrix,
};
use wordsolve::words::{reduce, Token, Word};

const DIM: usize = 3;

fn token() -> impl Strategy<Value = Token> {
    prop_oneof![
        (prop::sample::select(vec!["g", "h"]), any::<bool>()).prop_map(|(s, inv)| {
            let t = Token::coefficient(s);
            if inv {
                t.inverse()
            } else {
                t
            }
        }),
        (1..=2usize, prop::sample::select(vec![-2i64, -1, 1, 2])).prop_map(|(i, e)| Token::variable(i, e)),
    ]
}

fn coeffs(seed: u64) -> CoefficientAssignment {
    CoefficientAssignment::new()
        .with("g", haar_random(DIM, seed).unwrap())
        .with("h", haar_random(DIM, seed + 1).unwrap())
}

fn vars(seed: u64) -> Vec<UnitaryMatrix> {
    vec![haar_random(DIM, seed).unwrap(), haar_random(DIM, seed + 1).unwrap()]
}

fn parse(text: &str, n: usize, syms: &[&str]) -> Word {
    let known: BTreeSet<String> = syms.iter().map(|s| s.to_string()).collect();
    Word::parse(text, n, &known).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_ignores_free_reduction(ts in prop::collection::vec(token(), 0..20), seed in 0u64..1000) {
        // from_tokens reduces, so build the unreduced product letter by letter
        let c = coeffs(seed);
        let v = vars(seed + 100);
        let raw = ts.iter().fold(UnitaryMatrix::identity(DIM).into_matrix(), |acc, t| {
            let single = Word::from_tokens(2, [t.clone()]);
            acc * evaluate(&single, &v, &c).unwrap()
        });
        let reduced = evaluate(&Word::from_tokens(2, reduce(ts)), &v, &c).unwrap();
        prop_assert!((raw - reduced).norm() < 1e-10);
    }

    #[test]
    fn identity_coefficients_give_content(ts in prop::collection::vec(token(), 0..20), seed in 0u64..1000) {
        let c = CoefficientAssignment::new()
            .with("g", UnitaryMatrix::identity(DIM))
            .with("h", UnitaryMatrix::identity(DIM));
        let v = vars(seed);
        let w = Word::from_tokens(2, ts);
        let lhs = evaluate(&w, &v, &c).unwrap();
        let rhs = evaluate(&w.content().to_word(), &v, &c).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn haar_samples_are_special_unitary(dim in 2usize..6, seed in any::<u64>()) {
        let u = haar_random(dim, seed).unwrap();
        prop_assert!(u.unitarity_defect() < 1e-12);
        prop_assert!((u.determinant() - wordsolve::unitary::C64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert_eq!(haar_random(dim, seed).unwrap(), u);
    }
}

#[test]
fn haar_trace_moments_on_su2() {
    let n = 10_000;
    let traces: Vec<f64> = (0..n).map(|s| haar_random(2, s).unwrap().matrix().trace().norm()).collect();
    let check = |values: Vec<f64>, expect: f64, name: &str| {
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - expect).abs() <= 3.0 * se, "{name}: mean {mean}, expected {expect}, se {se}");
    };
    check(traces.iter().map(|t| t * t).collect(), 1.0, "E|tr|^2");
    check(traces, 8.0 / (3.0 * PI), "E|tr|");
}

#[test]
fn haar_trace_second_moment_on_u3() {
    let n = 10_000;
    let sq: Vec<f64> = (0..n)
        .map(|s| haar_random_in(3, s, GroupKind::Unitary).unwrap().matrix().trace().norm_sqr())
        .collect();
    let mean = sq.iter().sum::<f64>() / n as f64;
    let var = sq.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((mean - 1.0).abs() <= 3.0 * (var / n as f64).sqrt(), "mean {mean}");
}

fn commutator_problem(dim: usize) -> (Word, CoefficientAssignment, UnitaryMatrix) {
    let w = parse("g x1 x2 x1^-1 x2^-1 h", 2, &["g", "h"]);
    let c = CoefficientAssignment::new()
        .with("g", haar_random(dim, 501).unwrap())
        .with("h", haar_random(dim, 502).unwrap());
    (w, c, haar_random(dim, 503).unwrap())
}

#[test]
fn solutions_reproduce_their_residual() {
    for dim in [2, 3, 5] {
        let (w, c, target) = commutator_problem(dim);
        let out = solve(&w, &c, &target, &SolveConfig::default()).unwrap();
        let sol = out.solution().expect("solved");
        assert!(sol.residual <= 1e-8);
        let again = (evaluate(&w, &sol.variables(), &c).unwrap() - target.matrix()).norm();
        assert!((again - sol.residual).abs() <= 1e-12, "dim {dim}: {again} vs {}", sol.residual);
        for v in sol.assignment.values() {
            assert!(v.unitarity_defect() < 1e-9);
        }
    }
}

#[test]
fn descent_is_monotone_and_drift_is_bounded() {
    let (w, c, target) = commutator_problem(3);
    // a small budget forces several restarts and periodic reprojections
    let cfg = SolveConfig { max_iters: 300, restarts: 6, tol: 1e-14, reprojection_period: 25, ..Default::default() };
    let run = solve_traced(&w, &c, &target, &cfg).unwrap();
    assert!(!run.restarts.is_empty());
    for r in &run.restarts {
        assert!(r.monotone, "restart {} not monotone", r.restart);
        assert!(r.max_drift <= 1e-6, "restart {} drift {}", r.restart, r.max_drift);
    }
}

#[test]
fn seed_determinism_regardless_of_parallelism() {
    let (w, c, target) = commutator_problem(3);
    let cfg = SolveConfig { seed: 77, ..Default::default() };
    let a = solve(&w, &c, &target, &cfg).unwrap();
    let b = solve_sequential(&w, &c, &target, &cfg).unwrap().outcome;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let d = pool.install(|| solve(&w, &c, &target, &cfg).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, d);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&d).unwrap());
    let other = solve(&w, &c, &target, &SolveConfig { seed: 78, ..cfg }).unwrap();
    assert_ne!(a, other);
}
