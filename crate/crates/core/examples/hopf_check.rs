//! Run the Hopf algebra axiom suite for the mod-p cohomology of SU(p) and
//! PU(p) under both binomial conventions.

use wordsolve::cohomology::{hopf_axiom_check, BinomialConvention};

fn main() {
    for p in [3, 5, 7] {
        for convention in [BinomialConvention::Adopted, BinomialConvention::Printed] {
            let r = hopf_axiom_check(p, convention).unwrap();
            println!(
                "p = {p} {convention:?}: passed {} (PU degenerate: {}, failures: {:?})",
                r.passed, r.pu.degenerate, r.pu.failures
            );
        }
    }
    let r = hopf_axiom_check(3, BinomialConvention::Adopted).unwrap();
    for (g, s) in &r.pu.antipode {
        println!("S({g}) = {s}");
    }
}
