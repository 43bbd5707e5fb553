//! One-variable equations in U(n), where no special unitary constraint is
//! imposed on the solution.

use std::collections::BTreeSet;

use wordsolve::unitary::{haar_random_in, solve, CoefficientAssignment, GroupKind, SolveConfig};
use wordsolve::Word;

fn main() {
    let symbols: BTreeSet<String> = ["g1", "g2"].iter().map(|s| s.to_string()).collect();
    let w = Word::parse("g1 x1^2 g2 x1", 1, &symbols).unwrap();
    let cfg = SolveConfig { group: GroupKind::Unitary, ..SolveConfig::default() };
    for dim in [2, 3, 4] {
        let coeffs = CoefficientAssignment::new()
            .with("g1", haar_random_in(dim, 10, GroupKind::Unitary).unwrap())
            .with("g2", haar_random_in(dim, 11, GroupKind::Unitary).unwrap());
        let target = haar_random_in(dim, 12, GroupKind::Unitary).unwrap();
        let out = solve(&w, &coeffs, &target, &cfg).unwrap();
        match out.solution() {
            Some(s) => {
                let det = s.variables()[0].determinant();
                println!("U({dim}): residual {:.2e}, det x1 = {:.4}{:+.4}i", s.residual, det.re, det.im);
            }
            None => println!("U({dim}): not found, best residual {:.2e}", out.residual()),
        }
    }
}
