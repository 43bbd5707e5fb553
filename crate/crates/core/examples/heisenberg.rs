//! Map contents to the integer Heisenberg group and test lower central
//! series membership.

use wordsolve::nilpotent::{heisenberg_eval, membership};
use wordsolve::words::{commutator_basis_word, CommutatorTerm, ContentWord};

fn main() {
    let x1 = ContentWord::generator(2, 1);
    let x2 = ContentWord::generator(2, 2);
    let c = x1.commutator(&x2).unwrap();
    println!("h([x1,x2])      = {:?}", heisenberg_eval(&c).unwrap());
    println!("h([x1,x2]^3)    = {:?}", heisenberg_eval(&c.pow(3)).unwrap());
    println!("h([[x1,x2],x1]) = {:?}", heisenberg_eval(&c.commutator(&x1).unwrap()).unwrap());

    // [x1^2, x2^3] [x1^-1, x2]^2 has b = 2*3*1 + (-1)*1*2
    let terms = [CommutatorTerm::new(2, 3, 1), CommutatorTerm::new(-1, 1, 2)];
    let w = commutator_basis_word(&terms).unwrap();
    println!("basis word {:?}: {:?}", w.letters(), heisenberg_eval(&w).unwrap());

    for p in [2, 3, 5] {
        let m = membership(&w, Some(p)).unwrap();
        println!("p = {p}: {m:?}");
    }
}
