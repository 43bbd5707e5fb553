//! Solve `g1 x1 g2 x2 g1^-1 x1^-1 g2^-1 x2^-1 = T` in SU(3).

use std::collections::BTreeSet;

use wordsolve::unitary::{evaluate, haar_random, solve, CoefficientAssignment, SolveConfig};
use wordsolve::Word;

fn main() {
    let symbols: BTreeSet<String> = ["g1", "g2"].iter().map(|s| s.to_string()).collect();
    let w = Word::parse("g1 x1 g2 x2 g1^-1 x1^-1 g2^-1 x2^-1", 2, &symbols).unwrap();
    let dim = 3;
    let coeffs = CoefficientAssignment::new()
        .with("g1", haar_random(dim, 1).unwrap())
        .with("g2", haar_random(dim, 2).unwrap());
    let target = haar_random(dim, 3).unwrap();

    let outcome = solve(&w, &coeffs, &target, &SolveConfig::default()).unwrap();
    let sol = outcome.solution().expect("solved");
    println!(
        "solved at restart {} after {} iterations, residual {:.3e}",
        sol.restart_index, sol.iterations, sol.residual
    );
    let check = (evaluate(&w, &sol.variables(), &coeffs).unwrap() - target.matrix()).norm();
    println!("re-evaluated residual {check:.3e}");
    println!("{}", serde_json::to_string_pretty(&outcome).unwrap());
}
