//! The coefficient of `y ⊗ y_{i-1}` in the pullback of `y_i` along a product
//! of commutators, compared with the Heisenberg coordinate `b`.

use wordsolve::cohomology::{field, word_pullback_coefficient};
use wordsolve::nilpotent::heisenberg_eval;
use wordsolve::words::{commutator_basis_word, CommutatorTerm};

fn main() {
    let terms = [CommutatorTerm::new(2, 3, 1), CommutatorTerm::new(1, -1, 4)];
    let b = heisenberg_eval(&commutator_basis_word(&terms).unwrap()).unwrap().b;
    println!("b = {b}");
    for p in [3, 5, 7] {
        for i in 2..=p {
            let c = word_pullback_coefficient(&terms, i, p).unwrap();
            println!("p = {p} i = {i}: {} * {}   (b mod p = {})", c.coefficient, c.unit.name(), field::reduce(b, p));
        }
    }
}
