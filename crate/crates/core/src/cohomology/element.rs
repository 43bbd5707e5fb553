use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::field;
use super::ring::{Factor, Generator, Monomial, RingDescriptor};
use super::CohomologyError;

/// A sparse `F_p`-linear combination of monomials. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    ring: RingDescriptor,
    terms: BTreeMap<Monomial, u32>,
}

impl AlgebraElement {
    pub fn zero(ring: RingDescriptor) -> Self {
        AlgebraElement {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: RingDescriptor) -> Self {
        Self::monomial(ring, Monomial::unit(ring.factors), 1)
    }

    pub fn monomial(ring: RingDescriptor, m: Monomial, coeff: i64) -> Self {
        assert_eq!(m.factors.len(), ring.factors, "monomial has wrong arity");
        let mut out = Self::zero(ring);
        out.add_term(m, field::reduce(coeff, ring.p));
        out
    }

    /// A generator placed in tensor factor `position`.
    pub fn generator(ring: RingDescriptor, position: usize, g: Generator) -> Self {
        let mut m = Monomial::unit(ring.factors);
        m.factors[position] = g.factor();
        Self::monomial(ring, m, 1)
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn p(&self) -> u32 {
        self.ring.p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, or `None` if zero or inhomogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, coeff: u32) {
        if coeff == 0 {
            return;
        }
        let p = self.ring.p;
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff % p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let c = (*o.get() + coeff) % p;
                if c == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), CohomologyError> {
        if self.ring != other.ring {
            return Err(CohomologyError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = field::reduce(k, self.ring.p);
        let mut out = Self::zero(self.ring);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), field::mul(c, k, self.ring.p));
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.check_ring(other)?;
        let p = self.ring.p;
        let mut out = Self::zero(self.ring);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some((negative, m)) = a.mul(b, p) {
                    let c = field::mul(ca, cb, p);
                    out.add_term(m, if negative { field::neg(c, p) } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.ring);
        for _ in 0..k {
            out = out.multiply(self).expect("same ring");
        }
        out
    }

    /// Cross product `a ⊗ b`: concatenate tensor factors.
    pub fn tensor(&self, other: &Self) -> Result<Self, CohomologyError> {
        if self.ring.p != other.ring.p || self.ring.kind != other.ring.kind {
            return Err(CohomologyError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        let ring = self.ring.with_factors(self.ring.factors + other.ring.factors);
        let mut out = Self::zero(ring);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let m = Monomial::from_factors(a.factors.iter().chain(b.factors.iter()).copied());
                out.add_term(m, field::mul(ca, cb, ring.p));
            }
        }
        Ok(out)
    }

    /// Keep only the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        AlgebraElement {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Pull back along a map `K^{×n} -> K^{×targets}` that sends source
    /// coordinate `j` to target coordinate `positions[j]`: each monomial
    /// `u_1 ⊗ ... ⊗ u_n` becomes the ordered product of the `u_j` placed in
    /// factor `positions[j]`. With all positions zero this is the cup
    /// product `H^{⊗n} -> H`.
    pub fn regroup(&self, targets: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.ring.factors);
        let ring = self.ring.with_factors(targets);
        let p = ring.p;
        let mut out = Self::zero(ring);
        for (m, c) in self.terms() {
            let mut acc = Some((false, Monomial::unit(targets)));
            for (f, &pos) in m.factors.iter().zip(positions) {
                let Some((neg, cur)) = acc else { break };
                let mut placed = Monomial::unit(targets);
                placed.factors[pos] = *f;
                acc = cur.mul(&placed, p).map(|(n, mm)| (n ^ neg, mm));
            }
            if let Some((negative, mm)) = acc {
                out.add_term(mm, if negative { field::neg(c, p) } else { c });
            }
        }
        out
    }

    /// Apply the counit in tensor factor `position`, dropping that factor.
    pub fn counit_at(&self, position: usize) -> Self {
        let ring = self.ring.with_factors(self.ring.factors - 1);
        let mut out = Self::zero(ring);
        for (m, c) in self.terms() {
            if m.factors[position].is_one() {
                let mut f = m.factors.clone();
                f.remove(position);
                out.add_term(Monomial { factors: f }, c);
            }
        }
        out
    }

    /// Canonical text: `c*y^e.{..}|y^e.{..} + ...`, `0` for zero.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|(m, c)| format!("{c}*{}", m.canonical()))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Whether every term is a product of at least two positive-degree
    /// generators.
    pub fn is_decomposable(&self) -> bool {
        self.terms.keys().all(|m| m.length() >= 2)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

/// Convenience for a single-factor monomial.
pub fn factor_element(ring: RingDescriptor, f: Factor) -> AlgebraElement {
    AlgebraElement::monomial(ring, Monomial::from_factors([f]), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::ring::Shape;

    fn pu2(p: u32) -> RingDescriptor {
        RingDescriptor::new(p, Shape::PuxPu).unwrap()
    }

    fn mono(ring: RingDescriptor, fs: &[Factor]) -> AlgebraElement {
        AlgebraElement::monomial(ring, Monomial::from_factors(fs.iter().copied()), 1)
    }

    #[test]
    fn multiply_examples() {
        let r = pu2(3);
        let a = mono(r, &[Factor::new(1, []), Factor::new(0, [1])]);
        let b = mono(r, &[Factor::new(1, []), Factor::new(0, [2])]);
        assert_eq!(
            a.multiply(&b).unwrap(),
            mono(r, &[Factor::new(2, []), Factor::new(0, [1, 2])])
        );

        let pu = RingDescriptor::new(3, Shape::Pu).unwrap();
        let y1 = AlgebraElement::generator(pu, 0, Generator::Odd(1));
        assert!(y1.multiply(&y1).unwrap().is_zero());
        let y = AlgebraElement::generator(pu, 0, Generator::Y);
        assert!(y.pow(2).multiply(&y).unwrap().is_zero());
        assert!(!y.pow(2).is_zero());

        let su = RingDescriptor::new(3, Shape::Su).unwrap();
        assert!(matches!(
            y.multiply(&AlgebraElement::one(su)),
            Err(CohomologyError::RingMismatch { .. })
        ));
    }

    #[test]
    fn vector_space_laws() {
        let r = RingDescriptor::new(5, Shape::Pu).unwrap();
        let y = AlgebraElement::generator(r, 0, Generator::Y);
        let y2 = AlgebraElement::generator(r, 0, Generator::Odd(2));
        let s = y.add(&y2).unwrap();
        assert!(s.sub(&s).unwrap().is_zero());
        assert_eq!(s.scale(5), AlgebraElement::zero(r));
        assert_eq!(s.scale(3).scale(2), s.scale(6));
        assert_eq!(s.scale(-1).add(&s).unwrap(), AlgebraElement::zero(r));
    }

    #[test]
    fn render_format() {
        let r = pu2(3);
        let a = mono(r, &[Factor::new(1, [1, 2]), Factor::ONE]).scale(2);
        assert_eq!(a.render(), "2*y^1.{1,2}|y^0.{}");
        assert_eq!(AlgebraElement::zero(r).render(), "0");
    }

    #[test]
    fn regroup_matches_cup_product() {
        let r = pu2(3);
        // y1 ⊗ y2 cupped is y1 y2; y2 ⊗ y1 cupped is y2 y1 = -y1 y2.
        let a = mono(r, &[Factor::new(0, [1]), Factor::new(0, [2])]);
        let b = mono(r, &[Factor::new(0, [2]), Factor::new(0, [1])]);
        let single = RingDescriptor::new(3, Shape::Pu).unwrap();
        assert_eq!(a.regroup(1, &[0, 0]), mono(single, &[Factor::new(0, [1, 2])]));
        assert_eq!(
            b.regroup(1, &[0, 0]),
            mono(single, &[Factor::new(0, [1, 2])]).scale(-1)
        );
    }
}
