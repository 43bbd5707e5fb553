//! Exact computation in `H^*(SU(p); F_p)`, `H^*(PU(p); F_p)` and their
//! tensor powers, for odd primes `p`.
//!
//! Elements are sparse sums of monomials; each tensor factor of a monomial
//! is `y^e` times an ascending exterior word. Products carry Koszul signs
//! against that canonical order.

mod element;
pub mod field;
mod hopf;
mod obstruction;
mod ring;

use thiserror::Error;

pub use element::AlgebraElement;
pub use hopf::{
    antipode, convolve, coproduct, coproduct_map, counit, hopf_axiom_check, power_map_pullback,
    tensor_apply, AlgebraMap, BinomialConvention, HopfCheck, HopfReport,
};
pub use obstruction::{
    build_j_spanning_monomials, commutator_pullback_exact, commutator_pullback_leading,
    ideal_j_contains, pu_generator, quotient_reduce, top_class_obstruction,
    word_pullback_coefficient, LeadingTerm, TopClassObstruction, UnitSymbol, WordCoefficient,
};
pub use ring::{Factor, FactorKind, Generator, Monomial, RingDescriptor, Shape};

/// Primes for which tensor-square enumerations are run.
pub const SUPPORTED_PRIMES: [u32; 3] = [3, 5, 7];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("p = {0} is outside the supported set {{3, 5, 7}}")]
    UnsupportedPrime(u32),
    #[error("ring mismatch: {left:?} vs {right:?}")]
    RingMismatch {
        left: RingDescriptor,
        right: RingDescriptor,
    },
    #[error("expected a single-factor ring, got {0:?}")]
    NotSingleFactor(RingDescriptor),
    #[error("expected a two-factor PU ring, got {0} factors")]
    NotTensorSquare(usize),
    #[error("index {i} outside {lo}..={hi}")]
    IndexOutOfRange { i: u32, lo: u32, hi: u32 },
    #[error("commutator term {index} has a zero exponent")]
    ZeroCommutatorExponent { index: usize },
}

pub(crate) fn check_supported(p: u32) -> Result<(), CohomologyError> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(CohomologyError::UnsupportedPrime(p))
    }
}
