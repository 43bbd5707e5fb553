//! The commutator pullback on `H^*(PU(p) × PU(p); F_p)`, the monomial ideals
//! `J_i` and `J`, and the non-vanishing of the pulled-back top class.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::element::AlgebraElement;
use super::field;
use super::hopf::{antipode, coproduct_map, power_map_pullback, tensor_apply, AlgebraMap, BinomialConvention};
use super::ring::{Factor, FactorKind, Generator, Monomial, RingDescriptor, Shape};
use super::{check_supported, CohomologyError};
use crate::words::CommutatorTerm;

/// An unknown unit `a_i ∈ Z_(p)^×`, optionally pinned to a value in `F_p^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct UnitSymbol {
    pub index: u32,
    pub value: Option<u32>,
}

impl UnitSymbol {
    pub fn name(&self) -> String {
        format!("a_{}", self.index)
    }
}

/// `c^*(x_i) ≡ a_i · (y ⊗ y_{i-1})  (mod J_{i-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeadingTerm {
    pub unit: UnitSymbol,
    /// `y ⊗ y_{i-1}` with coefficient one; the unit multiplies it.
    pub term: AlgebraElement,
}

fn pu_square(p: u32) -> Result<RingDescriptor, CohomologyError> {
    RingDescriptor::new(p, Shape::PuxPu)
}

fn y_tensor_odd(i: u32) -> Monomial {
    Monomial::from_factors([Factor::new(1, []), Factor::new(0, [i])])
}

/// Leading term of the commutator pullback of `x_i`, `2 ≤ i ≤ p`.
///
/// With `pin_units`, `a_i` for `i ≤ p-1` is set to `-(i-1) mod p`, the
/// value obtained by reducing the exact pullback of `y_i` modulo
/// `J_{i-1}` (see [`commutator_pullback_exact`]). `a_p` is never pinned.
pub fn commutator_pullback_leading(i: u32, p: u32, pin_units: bool) -> Result<LeadingTerm, CohomologyError> {
    let ring = pu_square(p)?;
    if !(2..=p).contains(&i) {
        return Err(CohomologyError::IndexOutOfRange { i, lo: 2, hi: p });
    }
    let value = if pin_units && i < p {
        let v = field::reduce(-(i as i64 - 1), p);
        assert_ne!(v, 0, "pinned unit must be invertible");
        Some(v)
    } else {
        None
    };
    Ok(LeadingTerm {
        unit: UnitSymbol { index: i, value },
        term: AlgebraElement::monomial(ring, y_tensor_odd(i - 1), 1),
    })
}

/// The full pullback of `z ∈ H^*(PU(p))` along the commutator
/// `(u, v) ↦ u v u^{-1} v^{-1}`: four-fold coproduct, antipode on the last
/// two slots, then the diagonal pullback sending slots `(1, 2, 3, 4)` to
/// coordinates `(u, v, u, v)`.
pub fn commutator_pullback_exact(
    z: &AlgebraElement,
    convention: BinomialConvention,
) -> Result<AlgebraElement, CohomologyError> {
    let ring = z.ring();
    if ring.factors != 1 {
        return Err(CohomologyError::NotSingleFactor(ring));
    }
    let delta = coproduct_map(ring, convention);
    let id = AlgebraMap::identity(ring);
    let s = antipode(&delta);
    let d2 = delta.apply(z)?;
    let d3 = tensor_apply(&[&delta, &id], &d2);
    let d4 = tensor_apply(&[&delta, &id, &id], &d3);
    let inverted = tensor_apply(&[&id, &id, &s, &s], &d4);
    Ok(inverted.regroup(2, &[0, 1, 0, 1]))
}

fn check_ideal_index(i: u32, p: u32) -> Result<(), CohomologyError> {
    if !(1..p).contains(&i) {
        return Err(CohomologyError::IndexOutOfRange { i, lo: 1, hi: p - 1 });
    }
    Ok(())
}

/// Membership in `J_i = (y²⊗1, y_j⊗1, 1⊗y, 1⊗y_k : k ≠ i)`. The quotient by
/// `J_i` is spanned by `1, y⊗1, 1⊗y_i, y⊗y_i`.
pub fn ideal_j_contains(m: &Monomial, i: u32, p: u32) -> Result<bool, CohomologyError> {
    check_ideal_index(i, p)?;
    if m.factors.len() != 2 {
        return Err(CohomologyError::NotTensorSquare(m.factors.len()));
    }
    let (left, right) = (m.factors[0], m.factors[1]);
    Ok(left.e >= 2 || left.odd != 0 || right.e >= 1 || right.odd & !(1 << i) != 0)
}

/// Reduction modulo `J_i`.
pub fn quotient_reduce(u: &AlgebraElement, i: u32) -> Result<AlgebraElement, CohomologyError> {
    let ring = u.ring();
    if ring.kind != FactorKind::Pu || ring.factors != 2 {
        return Err(CohomologyError::NotTensorSquare(ring.factors));
    }
    check_ideal_index(i, ring.p)?;
    Ok(u.filter(|m| !ideal_j_contains(m, i, ring.p).expect("checked")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordCoefficient {
    pub i: u32,
    pub p: u32,
    /// Multiplies `unit · (y ⊗ y_{i-1})` modulo `J_{i-1}`.
    pub coefficient: u32,
    pub unit: UnitSymbol,
}

/// Coefficient of `a_i (y ⊗ y_{i-1})` in the pullback of `x_i` along
/// `w = Π_k [x1^{n_k}, x2^{m_k}]^{l_k}`. Each factor contributes
/// `(μ_{n_k}^* ⊗ μ_{m_k}^*)` applied to the commutator leading term; since
/// `x_i` is primitive, the pointwise product of maps adds pullbacks and the
/// `l_k`-th power multiplies by `l_k`.
pub fn word_pullback_coefficient(
    terms: &[CommutatorTerm],
    i: u32,
    p: u32,
) -> Result<WordCoefficient, CohomologyError> {
    let lead = commutator_pullback_leading(i, p, false)?;
    let pu = RingDescriptor::new(p, Shape::Pu)?;
    let target = y_tensor_odd(i - 1);
    let mut total = 0u32;
    for (k, t) in terms.iter().enumerate() {
        if t.n == 0 || t.m == 0 {
            return Err(CohomologyError::ZeroCommutatorExponent { index: k });
        }
        let mu_n = power_map_pullback(t.n, pu, BinomialConvention::Adopted);
        let mu_m = power_map_pullback(t.m, pu, BinomialConvention::Adopted);
        let pulled = tensor_apply(&[&mu_n, &mu_m], &lead.term);
        let reduced = quotient_reduce(&pulled, i - 1)?;
        debug_assert!(reduced.terms().all(|(m, _)| *m == target));
        let c = reduced.coefficient(&target);
        total = (total + field::mul(c, field::reduce(t.l, p), p)) % p;
    }
    Ok(WordCoefficient {
        i,
        p,
        coefficient: total,
        unit: lead.unit,
    })
}

/// Bidegree of a two-factor monomial.
fn bidegree(m: &Monomial) -> (u32, u32) {
    (m.factors[0].degree(), m.factors[1].degree())
}

/// Monomials spanning the degree `p² - 1` part of
/// `J = Σ_{E ⊊ {1..p-1}} Π_{i∈E} (y⊗y_i) · Π_{i∉E} J_i^{≥(2, 2i-1)}`,
/// where `J_i^{≥(2,2i-1)}` is spanned by the monomials of `J_i` whose
/// bidegree is componentwise at least `(2, 2i-1)`.
pub fn build_j_spanning_monomials(p: u32) -> Result<BTreeSet<Monomial>, CohomologyError> {
    check_supported(p)?;
    let ring = pu_square(p)?;
    let top_degree = p * p - 1;
    let indices: Vec<u32> = (1..p).collect();
    let min_degree = |i: u32| 2 + 2 * i - 1;
    let basis = ring.basis();

    // candidates[i-1]: monomials of J_i^{≥(2,2i-1)} that can still fit
    let slack = top_degree - indices.iter().map(|&i| min_degree(i)).sum::<u32>();
    let candidates: Vec<Vec<Monomial>> = indices
        .iter()
        .map(|&i| {
            basis
                .iter()
                .filter(|m| {
                    let (l, r) = bidegree(m);
                    l >= 2
                        && r >= 2 * i - 1
                        && m.degree() <= min_degree(i) + slack
                        && ideal_j_contains(m, i, p).expect("valid index")
                })
                .cloned()
                .collect()
        })
        .collect();

    let full = (1u32 << (p - 1)) - 1;
    let sets: Vec<BTreeSet<Monomial>> = (0..full)
        .into_par_iter()
        .map(|mask| {
            let choices: Vec<Vec<Monomial>> = indices
                .iter()
                .map(|&i| {
                    if mask & (1 << (i - 1)) != 0 {
                        vec![y_tensor_odd(i)]
                    } else {
                        candidates[(i - 1) as usize].clone()
                    }
                })
                .collect();
            let mut found = BTreeSet::new();
            extend_products(&choices, 0, Monomial::unit(2), top_degree, p, &mut found);
            found
        })
        .collect();
    Ok(sets.into_iter().flatten().collect())
}

fn extend_products(
    choices: &[Vec<Monomial>],
    k: usize,
    acc: Monomial,
    top_degree: u32,
    p: u32,
    found: &mut BTreeSet<Monomial>,
) {
    if k == choices.len() {
        if acc.degree() == top_degree {
            found.insert(acc);
        }
        return;
    }
    let remaining_min: u32 = choices[k + 1..]
        .iter()
        .map(|c| c.iter().map(Monomial::degree).min().unwrap_or(u32::MAX / 8))
        .sum();
    for m in &choices[k] {
        if acc.degree() + m.degree() + remaining_min > top_degree {
            continue;
        }
        if let Some((_, next)) = acc.mul(m, p) {
            extend_products(choices, k + 1, next, top_degree, p, found);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopClassObstruction {
    pub p: u32,
    pub in_j: bool,
    /// `Π_{i=2}^p (y ⊗ y_{i-1})`, the units factored out.
    pub product_leading_term: AlgebraElement,
    pub monomial: String,
    pub sign: i8,
    pub degree: u32,
    pub bidegree: (u32, u32),
    pub units: Vec<UnitSymbol>,
    pub spanning_monomials: usize,
}

/// The pullback of the top class `x_2 ⋯ x_p` along the commutator is
/// `(Π a_i) · (±1) · y^{p-1} ⊗ y_1 ⋯ y_{p-1}` modulo `J`; this computes the
/// product and its Koszul sign exactly and decides whether the monomial
/// lies in `J`.
pub fn top_class_obstruction(p: u32) -> Result<TopClassObstruction, CohomologyError> {
    check_supported(p)?;
    let ring = pu_square(p)?;
    let mut product = AlgebraElement::one(ring);
    let mut units = Vec::new();
    for i in 2..=p {
        let lead = commutator_pullback_leading(i, p, false)?;
        product = product.multiply(&lead.term)?;
        units.push(lead.unit);
    }
    let monomial = Monomial::from_factors([Factor::new((p - 1) as u8, []), Factor::new(0, 1..p)]);
    let coefficient = product.coefficient(&monomial);
    assert_eq!(product.len(), 1, "product of leading terms is a single monomial");
    let sign = if field::signed(coefficient, p) == 1 { 1 } else { -1 };
    assert_eq!(field::signed(coefficient, p).abs(), 1);

    let spanning = build_j_spanning_monomials(p)?;
    let (l, r) = bidegree(&monomial);
    Ok(TopClassObstruction {
        p,
        in_j: spanning.contains(&monomial),
        product_leading_term: product,
        monomial: monomial.pretty(FactorKind::Pu),
        sign,
        degree: monomial.degree(),
        bidegree: (l, r),
        units,
        spanning_monomials: spanning.len(),
    })
}

/// Generator `y_i` of `H^*(PU(p))` as an element.
pub fn pu_generator(p: u32, i: u32) -> Result<AlgebraElement, CohomologyError> {
    let ring = RingDescriptor::new(p, Shape::Pu)?;
    Ok(AlgebraElement::generator(ring, 0, Generator::Odd(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: Factor, b: Factor) -> Monomial {
        Monomial::from_factors([a, b])
    }

    #[test]
    fn leading_term_examples() {
        let t = commutator_pullback_leading(2, 3, true).unwrap();
        assert_eq!(t.unit.value, Some(2));
        assert_eq!(t.term.render(), "1*y^1.{}|y^0.{1}");
        let t = commutator_pullback_leading(3, 3, true).unwrap();
        assert_eq!(t.unit.value, None);
        assert_eq!(t.term.render(), "1*y^1.{}|y^0.{2}");
        let t = commutator_pullback_leading(3, 5, true).unwrap();
        assert_eq!(t.unit.value, Some(3));
        assert_eq!(commutator_pullback_leading(3, 5, false).unwrap().unit.value, None);
        assert!(matches!(
            commutator_pullback_leading(1, 3, false),
            Err(CohomologyError::IndexOutOfRange { .. })
        ));
        assert!(commutator_pullback_leading(4, 3, false).is_err());
    }

    #[test]
    fn ideal_membership_examples() {
        let y = Factor::new(1, []);
        let y1 = Factor::new(0, [1]);
        assert!(!ideal_j_contains(&m2(y, y1), 1, 3).unwrap());
        assert!(ideal_j_contains(&m2(Factor::new(2, []), y1), 1, 3).unwrap());
        assert!(ideal_j_contains(&m2(Factor::ONE, Factor::new(1, [1])), 1, 3).unwrap());
        assert!(!ideal_j_contains(&m2(Factor::ONE, Factor::ONE), 1, 3).unwrap());
        assert!(ideal_j_contains(&m2(y, y1), 2, 3).unwrap());
        assert!(ideal_j_contains(&m2(y, y1), 3, 3).is_err());
    }

    #[test]
    fn quotient_examples() {
        let r = pu_square(3).unwrap();
        let e = |a, b| AlgebraElement::monomial(r, m2(a, b), 1);
        let y = Factor::new(1, []);
        let y1 = Factor::new(0, [1]);
        assert_eq!(quotient_reduce(&e(y, y1), 1).unwrap(), e(y, y1));
        assert!(quotient_reduce(&e(Factor::new(0, [2]), y1), 1).unwrap().is_zero());
        let sum = e(y, y1).add(&e(Factor::new(2, []), y1)).unwrap();
        assert_eq!(quotient_reduce(&sum, 1).unwrap(), e(y, y1));
        let q = quotient_reduce(&sum, 1).unwrap();
        assert_eq!(quotient_reduce(&q, 1).unwrap(), q);
    }

    #[test]
    fn word_coefficient_examples() {
        let t = |n, m, l| CommutatorTerm::new(n, m, l);
        assert_eq!(word_pullback_coefficient(&[t(1, 1, 1)], 2, 3).unwrap().coefficient, 1);
        assert_eq!(word_pullback_coefficient(&[t(2, 3, 1)], 2, 5).unwrap().coefficient, 1);
        assert_eq!(word_pullback_coefficient(&[t(1, 1, 3)], 2, 3).unwrap().coefficient, 0);
        assert_eq!(word_pullback_coefficient(&[t(-1, 2, 1)], 3, 5).unwrap().coefficient, 3);
        assert!(word_pullback_coefficient(&[t(0, 2, 1)], 2, 5).is_err());
        assert!(word_pullback_coefficient(&[t(1, 1, 1)], 6, 5).is_err());
    }

    #[test]
    fn top_class_at_three() {
        let r = top_class_obstruction(3).unwrap();
        assert!(!r.in_j);
        assert_eq!(r.monomial, "y^2⊗y1y2");
        assert_eq!(r.sign, 1);
        assert_eq!(r.degree, 8);
        assert_eq!(r.bidegree, (4, 4));
    }

    #[test]
    fn spanning_set_at_three() {
        let set = build_j_spanning_monomials(3).unwrap();
        let top = m2(Factor::new(2, []), Factor::new(0, [1, 2]));
        assert!(!set.contains(&top));
        assert!(set.iter().all(|m| m.degree() == 8));
        assert!(build_j_spanning_monomials(11).is_err());
    }

    #[test]
    fn exact_commutator_pullback_reproduces_known_formula_at_three() {
        // c^*(y_2) = y_1 ⊗ y - y ⊗ y_1 exactly at p = 3
        let y2 = pu_generator(3, 2).unwrap();
        let c = commutator_pullback_exact(&y2, BinomialConvention::Adopted).unwrap();
        let r = pu_square(3).unwrap();
        let expected = AlgebraElement::monomial(r, m2(Factor::new(0, [1]), Factor::new(1, [])), 1)
            .sub(&AlgebraElement::monomial(r, m2(Factor::new(1, []), Factor::new(0, [1])), 1))
            .unwrap();
        assert_eq!(c, expected);
    }
}
