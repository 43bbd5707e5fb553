//! Solve commutator words against many Haar-random targets in SU(2).

use std::collections::BTreeSet;

use wordsolve::unitary::{surjectivity_scan, CoefficientAssignment, SolveConfig};
use wordsolve::Word;

fn main() {
    let none = BTreeSet::new();
    let cfg = SolveConfig::default();
    for (label, text, n, targets) in [
        ("[x1,x2]", "x1 x2 x1^-1 x2^-1", 2, 100),
        ("c3", "x3 x2 x1 x2^-1 x1^-1 x3^-1 x1 x2 x1^-1 x2^-1", 3, 20),
    ] {
        let w = Word::parse(text, n, &none).unwrap();
        let r = surjectivity_scan(&w, &CoefficientAssignment::new(), 2, targets, &cfg).unwrap();
        let iters = r.targets.iter().filter_map(|t| t.iterations).max().unwrap_or(0);
        println!(
            "{label}: {}/{} solved, worst residual {:.2e}, max iterations {iters}",
            r.solved, r.num_targets, r.worst_residual
        );
    }
}
