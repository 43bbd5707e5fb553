//! Solvability of equations over groups from their content.
//!
//! * [`words`]: the free product `G * F_n`, contents and commutator words.
//! * [`nilpotent`]: the Heisenberg quotient of `F_2` and the classification
//!   of equations by where their content sits in the lower central series.
//! * [`cohomology`]: exact mod-`p` Hopf algebra computations behind the
//!   surjectivity of commutator-type word maps on `SU(p)`.
//! * [`unitary`]: numerical word maps on `SU(n)` / `U(n)` and a Riemannian
//!   solver for `w(x) = target`.
//! * [`cli`]: the JSON pipeline behind the `wordsolve` binary.

pub mod cli;
pub mod cohomology;
pub mod nilpotent;
pub mod unitary;
pub mod words;

pub use nilpotent::{classify, ClassificationReport, HeisenbergElement, Thm14Primes};
pub use words::{CommutatorTerm, ContentWord, Token, Word};
