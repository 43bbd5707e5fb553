//! Hopf structure on `H^*(SU(p); F_p)` and `H^*(PU(p); F_p)`: coproduct,
//! counit, antipode, convolution and the power-map pullbacks `μ_n^*`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::element::{factor_element, AlgebraElement};
use super::field;
use super::ring::{Factor, FactorKind, Generator, Monomial, RingDescriptor};
use super::{check_supported, CohomologyError};

/// Index order of the binomial coefficient in the coproduct of `y_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BinomialConvention {
    /// `binom(i-1, j-1)`; coassociative and non-cocommutative.
    #[default]
    Adopted,
    /// `binom(j-1, i-1)`, which vanishes for every `j < i`.
    Printed,
}

impl BinomialConvention {
    fn coefficient(self, i: u32, j: u32, p: u32) -> u32 {
        match self {
            BinomialConvention::Adopted => field::binomial(i - 1, j - 1, p),
            BinomialConvention::Printed => field::binomial(j - 1, i - 1, p),
        }
    }
}

/// A degree-preserving algebra map out of a single-factor ring, given by
/// the images of its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMap {
    source: RingDescriptor,
    target: RingDescriptor,
    images: BTreeMap<Generator, AlgebraElement>,
}

impl AlgebraMap {
    pub fn new(
        source: RingDescriptor,
        target: RingDescriptor,
        images: BTreeMap<Generator, AlgebraElement>,
    ) -> Self {
        assert_eq!(source.factors, 1, "algebra maps are defined on one factor");
        for g in source.generators() {
            let img = images.get(&g).expect("every generator needs an image");
            assert_eq!(img.ring(), target);
        }
        AlgebraMap {
            source,
            target,
            images,
        }
    }

    pub fn identity(ring: RingDescriptor) -> Self {
        let ring = ring.single();
        let images = ring
            .generators()
            .into_iter()
            .map(|g| (g, AlgebraElement::generator(ring, 0, g)))
            .collect();
        AlgebraMap::new(ring, ring, images)
    }

    /// `η ∘ ε`: every generator goes to zero.
    pub fn unit_counit(ring: RingDescriptor) -> Self {
        let ring = ring.single();
        let images = ring
            .generators()
            .into_iter()
            .map(|g| (g, AlgebraElement::zero(ring)))
            .collect();
        AlgebraMap::new(ring, ring, images)
    }

    pub fn source(&self) -> RingDescriptor {
        self.source
    }

    pub fn target(&self) -> RingDescriptor {
        self.target
    }

    pub fn image(&self, g: Generator) -> &AlgebraElement {
        &self.images[&g]
    }

    pub fn images(&self) -> impl Iterator<Item = (Generator, &AlgebraElement)> {
        self.images.iter().map(|(g, e)| (*g, e))
    }

    /// Image of a single-factor monomial `y^e y_{i_1} ... y_{i_k}`.
    pub fn apply_factor(&self, f: Factor) -> AlgebraElement {
        let mut out = AlgebraElement::one(self.target);
        if f.e > 0 {
            out = out
                .multiply(&self.images[&Generator::Y].pow(f.e as u32))
                .expect("same ring");
        }
        for i in f.odd_indices() {
            out = out
                .multiply(&self.images[&Generator::Odd(i)])
                .expect("same ring");
        }
        out
    }

    pub fn apply(&self, u: &AlgebraElement) -> Result<AlgebraElement, CohomologyError> {
        if u.ring() != self.source {
            return Err(CohomologyError::RingMismatch {
                left: u.ring(),
                right: self.source,
            });
        }
        Ok(tensor_apply(&[self], u))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AlgebraMap) -> AlgebraMap {
        assert_eq!(other.target, self.source);
        let images = other
            .images
            .iter()
            .map(|(g, img)| (*g, self.apply(img).expect("composable")))
            .collect();
        AlgebraMap::new(other.source, self.target, images)
    }
}

/// Apply `f_1 ⊗ ... ⊗ f_k` to an element of a `k`-factor ring. All maps
/// have degree zero, so no Koszul sign arises.
pub fn tensor_apply(maps: &[&AlgebraMap], u: &AlgebraElement) -> AlgebraElement {
    assert_eq!(maps.len(), u.ring().factors);
    let target_factors: usize = maps.iter().map(|f| f.target.factors).sum();
    let target = maps[0].target.with_factors(target_factors);
    let mut cache: Vec<HashMap<Factor, AlgebraElement>> = vec![HashMap::new(); maps.len()];
    let mut out = AlgebraElement::zero(target);
    for (m, c) in u.terms() {
        let mut acc: Option<AlgebraElement> = None;
        for (j, f) in m.factors.iter().enumerate() {
            let img = cache[j]
                .entry(*f)
                .or_insert_with(|| maps[j].apply_factor(*f))
                .clone();
            acc = Some(match acc {
                None => img,
                Some(a) => a.tensor(&img).expect("same kind"),
            });
        }
        let acc = acc.expect("at least one factor");
        for (mm, cc) in acc.terms() {
            out.add_term(mm.clone(), field::mul(c, cc, target.p));
        }
    }
    out
}

/// The coproduct `Δ: H -> H ⊗ H` on generators. Exterior generators of
/// `SU(p)` and `y` are primitive; `Δ(y_i) = y_i⊗1 + 1⊗y_i +
/// Σ_{j<i} binom · y_j ⊗ y^{i-j}` on `PU(p)`.
pub fn coproduct_map(ring: RingDescriptor, convention: BinomialConvention) -> AlgebraMap {
    let ring = ring.single();
    let square = ring.with_factors(2);
    let p = ring.p;
    let primitive = |g: Generator| {
        AlgebraElement::generator(square, 0, g)
            .add(&AlgebraElement::generator(square, 1, g))
            .expect("same ring")
    };
    let mut images = BTreeMap::new();
    for g in ring.generators() {
        let mut img = primitive(g);
        if let (FactorKind::Pu, Generator::Odd(i)) = (ring.kind, g) {
            for j in 1..i {
                let c = convention.coefficient(i, j, p);
                let m = Monomial::from_factors([Factor::new(0, [j]), Factor::new((i - j) as u8, [])]);
                img = img
                    .add(&AlgebraElement::monomial(square, m, c as i64))
                    .expect("same ring");
            }
        }
        images.insert(g, img);
    }
    AlgebraMap::new(ring, square, images)
}

pub fn coproduct(
    u: &AlgebraElement,
    convention: BinomialConvention,
) -> Result<AlgebraElement, CohomologyError> {
    if u.ring().factors != 1 {
        return Err(CohomologyError::NotSingleFactor(u.ring()));
    }
    coproduct_map(u.ring(), convention).apply(u)
}

/// The scalar part of a single-factor element.
pub fn counit(u: &AlgebraElement) -> u32 {
    u.coefficient(&Monomial::unit(u.ring().factors))
}

/// `f * g = m ∘ (f ⊗ g) ∘ Δ`. For a graded-commutative Hopf algebra the
/// convolution of algebra maps is again an algebra map.
pub fn convolve(f: &AlgebraMap, g: &AlgebraMap, delta: &AlgebraMap) -> AlgebraMap {
    let ring = delta.source;
    let images = ring
        .generators()
        .into_iter()
        .map(|gen| {
            let split = tensor_apply(&[f, g], delta.image(gen));
            (gen, split.regroup(1, &[0, 0]))
        })
        .collect();
    AlgebraMap::new(ring, ring, images)
}

/// The antipode, solved generator by generator in ascending degree from
/// `m (S ⊗ id) Δ = η ε`.
pub fn antipode(delta: &AlgebraMap) -> AlgebraMap {
    let ring = delta.source;
    let mut images: BTreeMap<Generator, AlgebraElement> = BTreeMap::new();
    for g in ring.generators() {
        let gen_factor = g.factor();
        let mut rest = AlgebraElement::zero(ring);
        for (m, c) in delta.image(g).terms() {
            let (left, right) = (m.factors[0], m.factors[1]);
            if left == gen_factor && right.is_one() {
                continue;
            }
            // S on `left`: multiplicative extension over the generators known so far
            let mut s_left = AlgebraElement::one(ring);
            for _ in 0..left.e {
                s_left = s_left.multiply(&images[&Generator::Y]).expect("same ring");
            }
            for i in left.odd_indices() {
                s_left = s_left
                    .multiply(&images[&Generator::Odd(i)])
                    .expect("lower degree generator already solved");
            }
            let term = s_left
                .multiply(&factor_element(ring, right))
                .expect("same ring")
                .scale(c as i64);
            rest = rest.add(&term).expect("same ring");
        }
        images.insert(g, rest.scale(-1));
    }
    AlgebraMap::new(ring, ring, images)
}

/// Pullback of `u ↦ u^n` as the `n`-fold convolution power of the identity;
/// negative `n` precomposes with the inversion, `μ_{-n}^* = S ∘ μ_n^*`.
pub fn power_map_pullback(n: i64, ring: RingDescriptor, convention: BinomialConvention) -> AlgebraMap {
    let ring = ring.single();
    let delta = coproduct_map(ring, convention);
    let id = AlgebraMap::identity(ring);
    let mut mu = AlgebraMap::unit_counit(ring);
    for _ in 0..n.unsigned_abs() {
        mu = convolve(&mu, &id, &delta);
    }
    if n < 0 {
        antipode(&delta).compose(&mu)
    } else {
        mu
    }
}

/// Outcome of the Hopf axiom suite on one ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HopfCheck {
    pub kind: FactorKind,
    pub coassociative: bool,
    pub counital: bool,
    pub multiplicative: bool,
    pub antipode_ok: bool,
    pub cocommutative: bool,
    /// Every generator is primitive: the coproduct carries no information.
    pub degenerate: bool,
    pub primitive_generators: Vec<String>,
    pub antipode: BTreeMap<String, AlgebraElement>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HopfReport {
    pub p: u32,
    pub convention: BinomialConvention,
    pub su: HopfCheck,
    pub pu: HopfCheck,
    pub passed: bool,
}

/// Checks coassociativity, the counit laws, multiplicativity of `Δ` on
/// generator pairs (including `Δ(y)^p = 0`), the antipode identities and
/// cocommutativity. The cohomology of `PU(p)` must come out
/// non-degenerate for the report to pass.
pub fn hopf_axiom_check(p: u32, convention: BinomialConvention) -> Result<HopfReport, CohomologyError> {
    check_supported(p)?;
    let su = check_ring(RingDescriptor::tensor_power(p, FactorKind::Su, 1)?, convention);
    let pu = check_ring(RingDescriptor::tensor_power(p, FactorKind::Pu, 1)?, convention);
    let passed = su.failures.is_empty() && pu.failures.is_empty() && !pu.degenerate;
    Ok(HopfReport {
        p,
        convention,
        su,
        pu,
        passed,
    })
}

fn check_ring(ring: RingDescriptor, convention: BinomialConvention) -> HopfCheck {
    let delta = coproduct_map(ring, convention);
    let id = AlgebraMap::identity(ring);
    let square = ring.with_factors(2);
    let s = antipode(&delta);
    let mut failures = Vec::new();
    let gens = ring.generators();

    let mut coassociative = true;
    let mut counital = true;
    let mut antipode_ok = true;
    let mut cocommutative = true;
    let mut primitive_generators = Vec::new();
    for &g in &gens {
        let x = AlgebraElement::generator(ring, 0, g);
        let dx = delta.image(g);

        let left = tensor_apply(&[&delta, &id], dx);
        let right = tensor_apply(&[&id, &delta], dx);
        if left != right {
            coassociative = false;
            failures.push(format!("coassociativity fails on {g}"));
        }

        if dx.counit_at(0) != x || dx.counit_at(1) != x {
            counital = false;
            failures.push(format!("counit law fails on {g}"));
        }

        let s_left = tensor_apply(&[&s, &id], dx).regroup(1, &[0, 0]);
        let s_right = tensor_apply(&[&id, &s], dx).regroup(1, &[0, 0]);
        if !s_left.is_zero() || !s_right.is_zero() {
            antipode_ok = false;
            failures.push(format!("antipode identity fails on {g}"));
        }

        let flipped = dx.regroup(2, &[1, 0]);
        if &flipped != dx {
            cocommutative = false;
        }

        let prim = AlgebraElement::generator(square, 0, g)
            .add(&AlgebraElement::generator(square, 1, g))
            .expect("same ring");
        if dx == &prim {
            primitive_generators.push(g.to_string());
        }
    }

    let mut multiplicative = true;
    for &g in &gens {
        for &h in &gens {
            let gh = AlgebraElement::generator(ring, 0, g)
                .multiply(&AlgebraElement::generator(ring, 0, h))
                .expect("same ring");
            let lhs = delta.apply(&gh).expect("source ring");
            let rhs = delta
                .image(g)
                .multiply(delta.image(h))
                .expect("same ring");
            if lhs != rhs {
                multiplicative = false;
                failures.push(format!("Δ({g}·{h}) ≠ Δ({g})·Δ({h})"));
            }
        }
    }
    if ring.kind == FactorKind::Pu && !delta.image(Generator::Y).pow(ring.p).is_zero() {
        multiplicative = false;
        failures.push("Δ(y)^p ≠ 0".into());
    }

    let degenerate = primitive_generators.len() == gens.len();
    let antipode_images = s.images().map(|(g, e)| (g.to_string(), e.clone())).collect();
    HopfCheck {
        kind: ring.kind,
        coassociative,
        counital,
        multiplicative,
        antipode_ok,
        cocommutative,
        degenerate,
        primitive_generators,
        antipode: antipode_images,
        failures,
    }
}
