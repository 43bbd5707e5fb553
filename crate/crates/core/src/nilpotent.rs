//! The integer Heisenberg group as the free nilpotent quotient `F_2 / γ_3`,
//! and the content-based solvability classification built on it.
//!
//! A content `c ∈ F_2` maps to `(a, b, c)` where `a`, `c` are the exponent
//! sums and `b` is the central coordinate. Then
//!
//! * `c ∈ [F_2, F_2]` iff `a = c = 0`,
//! * `c ∈ γ_3` iff additionally `b = 0` (the quotient is exactly `H_3(Z)`),
//! * `c ∈ [F_2, F_2]^p γ_3` iff `a = c = 0` and `p | b`. That subgroup sits
//!   inside `[F_2, F_2]`, and modulo `γ_3` the derived subgroup is the
//!   infinite cyclic centre generated by `[x1, x2]`, so its `p`-th powers
//!   are exactly the elements with `b ≡ 0 (mod p)`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{iterated_commutator, ContentWord, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NilpotentError {
    #[error("expected a content word in 2 variables, got {0}")]
    NotTwoVariables(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent matrix is empty")]
    EmptyMatrix,
    #[error("exponent matrix rows have unequal lengths")]
    RaggedMatrix,
}

/// Upper unitriangular integer matrix
/// `[[1, a, b], [0, 1, c], [0, 0, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct HeisenbergElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HeisenbergElement {
    pub const IDENTITY: HeisenbergElement = HeisenbergElement { a: 0, b: 0, c: 0 };

    pub fn new(a: i64, b: i64, c: i64) -> Self {
        HeisenbergElement { a, b, c }
    }

    pub fn inverse(self) -> Self {
        HeisenbergElement {
            a: -self.a,
            b: self.a * self.c - self.b,
            c: -self.c,
        }
    }

    /// Image of the generator `x_index^exponent` (`x1 ↦ a`, `x2 ↦ c`).
    fn generator_power(index: usize, exponent: i64) -> Self {
        match index {
            1 => HeisenbergElement::new(exponent, 0, 0),
            2 => HeisenbergElement::new(0, 0, exponent),
            _ => unreachable!("Heisenberg evaluation is defined on F_2 only"),
        }
    }
}

impl Mul for HeisenbergElement {
    type Output = HeisenbergElement;

    fn mul(self, rhs: Self) -> Self {
        HeisenbergElement {
            a: self.a + rhs.a,
            b: self.b + rhs.b + self.a * rhs.c,
            c: self.c + rhs.c,
        }
    }
}

impl fmt::Display for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn heisenberg_eval(content: &ContentWord) -> Result<HeisenbergElement, NilpotentError> {
    if content.n() != 2 {
        return Err(NilpotentError::NotTwoVariables(content.n()));
    }
    Ok(content
        .letters()
        .iter()
        .fold(HeisenbergElement::IDENTITY, |acc, &(index, exponent)| {
            acc * HeisenbergElement::generator_power(index, exponent)
        }))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `|b|`, ascending. Empty for `b ∈ {-1, 0, 1}`.
pub fn prime_divisors(b: i64) -> Vec<u64> {
    let mut m = b.unsigned_abs();
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub in_derived: bool,
    pub in_gamma3: bool,
    /// `None` when no prime was supplied.
    pub in_modp: Option<bool>,
}

/// Membership of a two-variable content in `[F_2,F_2]`, `γ_3` and,
/// when `p` is given, `[F_2,F_2]^p γ_3`.
pub fn membership(content: &ContentWord, p: Option<u64>) -> Result<Membership, NilpotentError> {
    if let Some(p) = p {
        if !is_prime(p) {
            return Err(NilpotentError::NotPrime(p));
        }
    }
    let h = heisenberg_eval(content)?;
    let in_derived = h.a == 0 && h.c == 0;
    Ok(Membership {
        in_derived,
        in_gamma3: in_derived && h.b == 0,
        in_modp: p.map(|p| in_derived && h.b.rem_euclid(p as i64) == 0),
    })
}

/// The primes `p` for which the content criterion guarantees a solution
/// of the equation in `SU(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Thm14Primes {
    AllPrimes,
    AllPrimesNotDividing { b: i64, exceptions: Vec<u64> },
    None,
}

impl Thm14Primes {
    pub fn admits(&self, p: u64) -> bool {
        match self {
            Thm14Primes::AllPrimes => is_prime(p),
            Thm14Primes::AllPrimesNotDividing { b, .. } => is_prime(p) && b % p as i64 != 0,
            Thm14Primes::None => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub exponent_sums: Vec<i64>,
    /// Absent in the restricted report for more than two variables.
    pub heisenberg: Option<HeisenbergElement>,
    pub in_derived: bool,
    /// Absent in the restricted report for more than two variables.
    pub in_gamma3: Option<bool>,
    pub thm11_applies: bool,
    pub thm14_primes: Thm14Primes,
    pub notes: Vec<String>,
}

pub fn classify(word: &Word) -> ClassificationReport {
    let content = word.content();
    if content.n() > 2 {
        return classify_restricted(&content);
    }
    let mut notes = Vec::new();
    if content.n() == 1 {
        notes.push("one-variable equation read as a two-variable equation not involving x2".into());
    }
    let content = content.widen(2);
    let h = heisenberg_eval(&content).expect("two variables");
    let in_derived = h.a == 0 && h.c == 0;
    let in_gamma3 = in_derived && h.b == 0;

    let thm14_primes = if !in_derived {
        notes.push(format!(
            "content has exponent sums ({}, {}) outside [F2,F2]: solvable in SU(p) for every prime p and over every hyperlinear G",
            h.a, h.c
        ));
        Thm14Primes::AllPrimes
    } else if !in_gamma3 {
        let exceptions = prime_divisors(h.b);
        notes.push(format!(
            "content lies in [F2,F2] with Heisenberg coordinate b = {}: solvable over every hyperlinear G and in SU(p) for every prime p not dividing b",
            h.b
        ));
        if exceptions.is_empty() {
            notes.push("b = ±1, so every prime is admitted".into());
        }
        Thm14Primes::AllPrimesNotDividing {
            b: h.b,
            exceptions,
        }
    } else {
        if content.is_identity() {
            notes.push("singular equation: the content is trivial".into());
        } else {
            notes.push("content lies in [F2,[F2,F2]]".into());
        }
        notes.push("the content criteria are silent for this equation".into());
        Thm14Primes::None
    };

    ClassificationReport {
        exponent_sums: vec![h.a, h.c],
        heisenberg: Some(h),
        in_derived,
        in_gamma3: Some(in_gamma3),
        thm11_applies: !in_gamma3,
        thm14_primes,
        notes,
    }
}

fn classify_restricted(content: &ContentWord) -> ClassificationReport {
    let n = content.n();
    let exponent_sums = content.exponent_sums();
    let in_derived = exponent_sums.iter().all(|&s| s == 0);
    let mut notes = vec![format!(
        "restricted report: {n} variables; the two-variable criteria do not apply"
    )];
    if content.is_identity() {
        notes.push("singular equation: the content is trivial".into());
    } else if !in_derived {
        notes.push("exponent sums are nonzero: the equation is non-singular".into());
    }
    if *content == iterated_commutator(n).expect("n >= 1") {
        notes.push(format!(
            "content equals the iterated commutator c_{n}: solvable over every subgroup of SU(2)"
        ));
    }
    ClassificationReport {
        exponent_sums,
        heisenberg: None,
        in_derived,
        in_gamma3: None,
        thm11_applies: false,
        thm14_primes: Thm14Primes::None,
        notes,
    }
}

/// Whether the integer exponent matrix of a system (one row per equation)
/// has full row rank, i.e. trivial kernel on relation classes.
pub fn howie_nonsingular(exponent_matrix: &[Vec<i64>]) -> Result<bool, NilpotentError> {
    let m = exponent_matrix.len();
    let n = exponent_matrix.first().map_or(0, Vec::len);
    if m == 0 || n == 0 {
        return Err(NilpotentError::EmptyMatrix);
    }
    if exponent_matrix.iter().any(|r| r.len() != n) {
        return Err(NilpotentError::RaggedMatrix);
    }
    Ok(integer_rank(exponent_matrix) == m)
}

/// Exact rank by integer row elimination, rows kept primitive.
fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let (m, n) = (a.len(), a[0].len());
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(pivot) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..m {
            if a[r][col].is_zero() {
                continue;
            }
            let (lead, factor) = (a[rank][col].clone(), a[r][col].clone());
            for c in col..n {
                a[r][c] = &lead * &a[r][c] - &factor * &a[rank][c];
            }
            let g = a[r].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in a[r].iter_mut() {
                    *x /= &g;
                }
            }
        }
        rank += 1;
    }
    rank
}
