//! Pull the top class of SU(p) back along the commutator and check that the
//! leading term survives modulo J.

use std::time::Instant;

use wordsolve::cohomology::top_class_obstruction;

fn main() {
    for p in [3, 5, 7] {
        let start = Instant::now();
        let t = top_class_obstruction(p).unwrap();
        println!(
            "p = {p}: {} sign {:+}, degree {} bidegree {:?}, in J: {} ({} spanning monomials, {:.2?})",
            t.monomial,
            t.sign,
            t.degree,
            t.bidegree,
            t.in_j,
            t.spanning_monomials,
            start.elapsed()
        );
        let units: Vec<String> = t.units.iter().map(|u| u.name()).collect();
        println!("        units {}", units.join(" "));
    }
}
