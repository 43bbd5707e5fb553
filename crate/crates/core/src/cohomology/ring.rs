use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::CohomologyError;
use crate::nilpotent::is_prime;

/// Which group a tensor factor is the cohomology of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorKind {
    /// `Λ(x_2, ..., x_p)`, `|x_i| = 2i - 1`.
    Su,
    /// `F_p[y]/(y^p) ⊗ Λ(y_1, ..., y_{p-1})`, `|y| = 2`, `|y_i| = 2i - 1`.
    Pu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Shape {
    Su,
    Pu,
    PuxPu,
    SuxSu,
}

/// `H^*(K^{×factors}; F_p)` for `K` one of `SU(p)`, `PU(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub p: u32,
    pub kind: FactorKind,
    pub factors: usize,
}

impl RingDescriptor {
    pub fn new(p: u32, shape: Shape) -> Result<Self, CohomologyError> {
        let (kind, factors) = match shape {
            Shape::Su => (FactorKind::Su, 1),
            Shape::Pu => (FactorKind::Pu, 1),
            Shape::PuxPu => (FactorKind::Pu, 2),
            Shape::SuxSu => (FactorKind::Su, 2),
        };
        Self::tensor_power(p, kind, factors)
    }

    pub fn tensor_power(p: u32, kind: FactorKind, factors: usize) -> Result<Self, CohomologyError> {
        if p < 3 || !is_prime(p as u64) {
            return Err(CohomologyError::NotOddPrime(p));
        }
        assert!(factors >= 1, "a ring needs at least one tensor factor");
        Ok(RingDescriptor { p, kind, factors })
    }

    pub fn shape(&self) -> Option<Shape> {
        match (self.kind, self.factors) {
            (FactorKind::Su, 1) => Some(Shape::Su),
            (FactorKind::Pu, 1) => Some(Shape::Pu),
            (FactorKind::Pu, 2) => Some(Shape::PuxPu),
            (FactorKind::Su, 2) => Some(Shape::SuxSu),
            _ => None,
        }
    }

    pub fn with_factors(&self, factors: usize) -> Self {
        RingDescriptor {
            factors,
            ..*self
        }
    }

    /// The single-factor ring of the same kind.
    pub fn single(&self) -> Self {
        self.with_factors(1)
    }

    /// Indices of the exterior generators of one factor.
    pub fn odd_indices(&self) -> std::ops::RangeInclusive<u32> {
        match self.kind {
            FactorKind::Su => 2..=self.p,
            FactorKind::Pu => 1..=self.p - 1,
        }
    }

    /// Generators of one factor in ascending degree.
    pub fn generators(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self.odd_indices().map(Generator::Odd).collect();
        if self.kind == FactorKind::Pu {
            gens.push(Generator::Y);
        }
        gens.sort_by_key(|g| (g.degree(), *g));
        gens
    }

    /// Largest allowed power of `y` in one factor.
    pub fn max_y(&self) -> u8 {
        match self.kind {
            FactorKind::Su => 0,
            FactorKind::Pu => (self.p - 1) as u8,
        }
    }

    /// Every monomial of one factor.
    pub fn factor_basis(&self) -> Vec<Factor> {
        let odd: Vec<u32> = self.odd_indices().collect();
        let mut out = Vec::new();
        for e in 0..=self.max_y() {
            for mask in 0u32..(1 << odd.len()) {
                let bits = odd
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .fold(0u32, |acc, (_, &i)| acc | (1 << i));
                out.push(Factor { e, odd: bits });
            }
        }
        out.sort();
        out
    }

    /// Every monomial of the full tensor power.
    pub fn basis(&self) -> Vec<Monomial> {
        let single = self.factor_basis();
        let mut out = vec![Monomial::unit(0)];
        for _ in 0..self.factors {
            out = out
                .into_iter()
                .flat_map(|m| {
                    single.iter().map(move |f| {
                        let mut m = m.clone();
                        m.factors.push(*f);
                        m
                    })
                })
                .collect();
        }
        out
    }
}

/// A generator of a single tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    Y,
    Odd(u32),
}

impl Generator {
    pub fn degree(&self) -> u32 {
        match self {
            Generator::Y => 2,
            Generator::Odd(i) => 2 * i - 1,
        }
    }

    pub fn factor(&self) -> Factor {
        match self {
            Generator::Y => Factor { e: 1, odd: 0 },
            Generator::Odd(i) => Factor { e: 0, odd: 1 << i },
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Y => write!(f, "y"),
            Generator::Odd(i) => write!(f, "y{i}"),
        }
    }
}

/// One tensor factor of a monomial: `y^e` times the exterior monomial on
/// the indices set in `odd` (bit `i` for generator `i`), in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Factor {
    pub e: u8,
    pub odd: u32,
}

impl Factor {
    pub const ONE: Factor = Factor { e: 0, odd: 0 };

    pub fn new(e: u8, odd: impl IntoIterator<Item = u32>) -> Self {
        Factor {
            e,
            odd: odd.into_iter().fold(0, |acc, i| acc | (1 << i)),
        }
    }

    pub fn degree(&self) -> u32 {
        2 * self.e as u32 + self.odd_indices().map(|i| 2 * i - 1).sum::<u32>()
    }

    /// Parity of the degree: the number of exterior generators.
    pub fn is_odd(&self) -> bool {
        self.odd.count_ones() % 2 == 1
    }

    pub fn is_one(&self) -> bool {
        *self == Factor::ONE
    }

    /// Number of generators multiplied together, counting `y^e` as `e`.
    pub fn length(&self) -> u32 {
        self.e as u32 + self.odd.count_ones()
    }

    pub fn odd_indices(&self) -> impl Iterator<Item = u32> + '_ {
        (0..32).filter(move |i| self.odd & (1 << i) != 0)
    }

    /// Product in one factor: `None` if it vanishes, otherwise whether the
    /// Koszul sign is negative and the canonical result.
    pub fn mul(&self, other: &Factor, p: u32) -> Option<(bool, Factor)> {
        if self.odd & other.odd != 0 || (self.e + other.e) as u32 >= p {
            return None;
        }
        // moving each generator of `other` left past the larger ones of `self`
        let swaps: u32 = other
            .odd_indices()
            .map(|t| (self.odd >> (t + 1)).count_ones())
            .sum();
        Some((
            swaps % 2 == 1,
            Factor {
                e: self.e + other.e,
                odd: self.odd | other.odd,
            },
        ))
    }
}

/// A tensor product `f_1 ⊗ ... ⊗ f_k` of factor monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub factors: SmallVec<[Factor; 4]>,
}

impl Monomial {
    pub fn unit(factors: usize) -> Self {
        Monomial {
            factors: SmallVec::from_elem(Factor::ONE, factors),
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = Factor>) -> Self {
        Monomial {
            factors: factors.into_iter().collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(Factor::degree).sum()
    }

    pub fn multidegree(&self) -> Vec<u32> {
        self.factors.iter().map(Factor::degree).collect()
    }

    pub fn is_odd(&self) -> bool {
        self.factors.iter().filter(|f| f.is_odd()).count() % 2 == 1
    }

    pub fn length(&self) -> u32 {
        self.factors.iter().map(Factor::length).sum()
    }

    /// Graded tensor product: `(a_1⊗..⊗a_k)(b_1⊗..⊗b_k) =
    /// ± a_1b_1 ⊗ .. ⊗ a_kb_k`, the sign collecting each `b_j` moving past
    /// `a_i` for `i > j` plus the exterior reorderings inside each factor.
    pub fn mul(&self, other: &Monomial, p: u32) -> Option<(bool, Monomial)> {
        debug_assert_eq!(self.factors.len(), other.factors.len());
        let mut negative = false;
        let mut odd_after = 0u32;
        for (k, b) in other.factors.iter().enumerate().rev() {
            if b.is_odd() && odd_after % 2 == 1 {
                negative = !negative;
            }
            if self.factors[k].is_odd() {
                odd_after += 1;
            }
        }
        let mut factors = SmallVec::new();
        for (a, b) in self.factors.iter().zip(other.factors.iter()) {
            let (neg, f) = a.mul(b, p)?;
            negative ^= neg;
            factors.push(f);
        }
        Some((negative, Monomial { factors }))
    }

    /// `y^e.{i,j}` per factor, joined by `|`.
    pub fn canonical(&self) -> String {
        self.factors
            .iter()
            .map(|f| {
                let idx: Vec<String> = f.odd_indices().map(|i| i.to_string()).collect();
                format!("y^{}.{{{}}}", f.e, idx.join(","))
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Human form such as `y^2⊗y1y2`; `kind` selects the odd-generator letter.
    pub fn pretty(&self, kind: FactorKind) -> String {
        let letter = match kind {
            FactorKind::Su => "x",
            FactorKind::Pu => "y",
        };
        self.factors
            .iter()
            .map(|f| {
                let mut s = String::new();
                match f.e {
                    0 => {}
                    1 => s.push('y'),
                    e => s.push_str(&format!("y^{e}")),
                }
                for i in f.odd_indices() {
                    s.push_str(&format!("{letter}{i}"));
                }
                if s.is_empty() {
                    s.push('1');
                }
                s
            })
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pu_dimension_is_p_times_two_to_p_minus_one() {
        for (p, dim) in [(3, 12), (5, 80), (7, 448)] {
            let r = RingDescriptor::new(p, Shape::Pu).unwrap();
            assert_eq!(r.basis().len(), dim);
        }
        let r = RingDescriptor::new(3, Shape::PuxPu).unwrap();
        assert_eq!(r.basis().len(), 144);
        let r = RingDescriptor::new(5, Shape::Su).unwrap();
        assert_eq!(r.basis().len(), 16);
    }

    #[test]
    fn rejects_even_and_composite() {
        assert_eq!(
            RingDescriptor::new(2, Shape::Pu),
            Err(CohomologyError::NotOddPrime(2))
        );
        assert_eq!(
            RingDescriptor::new(9, Shape::Su),
            Err(CohomologyError::NotOddPrime(9))
        );
    }

    #[test]
    fn top_su_class_has_dimension_p_squared_minus_one() {
        for p in [3u32, 5, 7] {
            let r = RingDescriptor::new(p, Shape::Su).unwrap();
            let top = r.basis().into_iter().max_by_key(|m| m.degree()).unwrap();
            assert_eq!(top.degree(), p * p - 1);
        }
    }

    #[test]
    fn exterior_signs() {
        let y1 = Factor::new(0, [1]);
        let y2 = Factor::new(0, [2]);
        assert_eq!(y1.mul(&y2, 3), Some((false, Factor::new(0, [1, 2]))));
        assert_eq!(y2.mul(&y1, 3), Some((true, Factor::new(0, [1, 2]))));
        assert_eq!(y1.mul(&y1, 3), None);
        let y = Factor::new(1, []);
        let y2sq = Factor::new(2, []);
        assert_eq!(y2sq.mul(&y, 3), None);
        assert_eq!(y.mul(&y, 3), Some((false, y2sq)));
    }

    #[test]
    fn tensor_interchange_sign() {
        // (1⊗y1)(y2⊗1) = -(y2⊗y1)
        let a = Monomial::from_factors([Factor::ONE, Factor::new(0, [1])]);
        let b = Monomial::from_factors([Factor::new(0, [2]), Factor::ONE]);
        let (neg, m) = a.mul(&b, 3).unwrap();
        assert!(neg);
        assert_eq!(m.pretty(FactorKind::Pu), "y2⊗y1");
        // (y⊗y1)(y⊗y2) = y^2⊗y1y2
        let a = Monomial::from_factors([Factor::new(1, []), Factor::new(0, [1])]);
        let b = Monomial::from_factors([Factor::new(1, []), Factor::new(0, [2])]);
        let (neg, m) = a.mul(&b, 3).unwrap();
        assert!(!neg);
        assert_eq!(m.pretty(FactorKind::Pu), "y^2⊗y1y2");
        assert_eq!(m.canonical(), "y^2.{}|y^0.{1,2}");
    }
}
