use proptest::prelude::*;
use wordsolve::cohomology::{
    antipode, commutator_pullback_exact, commutator_pullback_leading, convolve, coproduct_map, field,
    ideal_j_contains, power_map_pullback, pu_generator, quotient_reduce, tensor_apply, word_pullback_coefficient,
    AlgebraElement, AlgebraMap, BinomialConvention, FactorKind, Monomial, RingDescriptor, Shape,
};
use wordsolve::nilpotent::heisenberg_eval;
use wordsolve::words::{commutator_basis_word, CommutatorTerm};

const ADOPTED: BinomialConvention = BinomialConvention::Adopted;

fn ring(p: u32, shape: Shape) -> RingDescriptor {
    RingDescriptor::new(p, shape).unwrap()
}

fn pick(ring: RingDescriptor, index: usize) -> Monomial {
    let basis = ring.basis();
    basis[index % basis.len()].clone()
}

fn element(ring: RingDescriptor, picks: &[(usize, i64)]) -> AlgebraElement {
    picks.iter().fold(AlgebraElement::zero(ring), |acc, &(i, c)| {
        acc.add(&AlgebraElement::monomial(ring, pick(ring, i), c)).unwrap()
    })
}

fn shapes() -> impl Strategy<Value = (u32, Shape)> {
    (
        prop::sample::select(vec![3u32, 5]),
        prop::sample::select(vec![Shape::Su, Shape::Pu, Shape::PuxPu, Shape::SuxSu]),
    )
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((any::<usize>(), 1i64..5), 1..4)
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-6i64..=-1, 1i64..=6]
}

fn terms() -> impl Strategy<Value = Vec<CommutatorTerm>> {
    prop::collection::vec((nonzero(), nonzero(), -4i64..=4), 1..5)
        .prop_map(|ts| ts.into_iter().map(|(n, m, l)| CommutatorTerm::new(n, m, l)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_commutativity((p, shape) in shapes(), i in any::<usize>(), j in any::<usize>()) {
        let r = ring(p, shape);
        let (a, b) = (pick(r, i), pick(r, j));
        let ea = AlgebraElement::monomial(r, a.clone(), 1);
        let eb = AlgebraElement::monomial(r, b.clone(), 1);
        let sign = if a.is_odd() && b.is_odd() { -1 } else { 1 };
        prop_assert_eq!(ea.multiply(&eb).unwrap(), eb.multiply(&ea).unwrap().scale(sign));
    }

    #[test]
    fn associativity_and_distributivity((p, shape) in shapes(), a in picks(), b in picks(), c in picks()) {
        let r = ring(p, shape);
        let (a, b, c) = (element(r, &a), element(r, &b), element(r, &c));
        prop_assert_eq!(
            a.multiply(&b).unwrap().multiply(&c).unwrap(),
            a.multiply(&b.multiply(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.multiply(&b.add(&c).unwrap()).unwrap(),
            a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn coproduct_is_multiplicative_on_monomials(p in prop::sample::select(vec![3u32, 5]), i in any::<usize>(), j in any::<usize>()) {
        let r = ring(p, Shape::Pu);
        let delta = coproduct_map(r, ADOPTED);
        let a = AlgebraElement::monomial(r, pick(r, i), 1);
        let b = AlgebraElement::monomial(r, pick(r, j), 1);
        let lhs = delta.apply(&a.multiply(&b).unwrap()).unwrap();
        let rhs = delta.apply(&a).unwrap().multiply(&delta.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antipode_on_elements(p in prop::sample::select(vec![3u32, 5]), a in picks()) {
        let r = ring(p, Shape::Pu);
        let delta = coproduct_map(r, ADOPTED);
        let s = antipode(&delta);
        let id = AlgebraMap::identity(r);
        let u = element(r, &a);
        let eps = u.coefficient(&Monomial::unit(1));
        let expect = AlgebraElement::one(r).scale(eps as i64);
        let du = delta.apply(&u).unwrap();
        prop_assert_eq!(tensor_apply(&[&s, &id], &du).regroup(1, &[0, 0]), expect.clone());
        prop_assert_eq!(tensor_apply(&[&id, &s], &du).regroup(1, &[0, 0]), expect);
        prop_assert_eq!(s.apply(&s.apply(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn convolution_and_composition_laws(p in prop::sample::select(vec![3u32, 5]), n in -4i64..=4, m in -4i64..=4) {
        let r = ring(p, Shape::Pu);
        let delta = coproduct_map(r, ADOPTED);
        let mu = |k: i64| power_map_pullback(k, r, ADOPTED);
        prop_assert_eq!(convolve(&mu(n), &mu(m), &delta), mu(n + m));
        prop_assert_eq!(mu(n).compose(&mu(m)), mu(n * m));
    }

    #[test]
    fn cross_module_oracle(p in prop::sample::select(vec![3u32, 5]), ts in terms()) {
        let b = heisenberg_eval(&commutator_basis_word(&ts).unwrap()).unwrap().b;
        for i in 2..=p {
            let c = word_pullback_coefficient(&ts, i, p).unwrap();
            prop_assert_eq!(c.coefficient, field::reduce(b, p));
            prop_assert_eq!(c.unit.index, i);
        }
    }

    #[test]
    fn triple_products_lie_in_every_j_i(p in prop::sample::select(vec![3u32, 5]), x in any::<usize>(), y in any::<usize>(), z in any::<usize>()) {
        let r = ring(p, Shape::PuxPu);
        let positive = |k: usize| {
            let m = pick(r, k);
            if m.degree() == 0 { pick(r, k + 1) } else { m }
        };
        let prod = [positive(x), positive(y), positive(z)]
            .into_iter()
            .map(|m| AlgebraElement::monomial(r, m, 1))
            .reduce(|a, b| a.multiply(&b).unwrap())
            .unwrap();
        for i in 1..p {
            for (m, _) in prod.terms() {
                prop_assert!(ideal_j_contains(m, i, p).unwrap(), "{} not in J_{}", m.canonical(), i);
            }
        }
    }

    #[test]
    fn power_maps_preserve_j_i(p in prop::sample::select(vec![3u32, 5]), k in any::<usize>(), n in nonzero(), m in nonzero()) {
        let r = ring(p, Shape::PuxPu);
        let pu = ring(p, Shape::Pu);
        let mono = pick(r, k);
        let (mu_n, mu_m) = (power_map_pullback(n, pu, ADOPTED), power_map_pullback(m, pu, ADOPTED));
        let image = tensor_apply(&[&mu_n, &mu_m], &AlgebraElement::monomial(r, mono.clone(), 1));
        for i in 1..p {
            if ideal_j_contains(&mono, i, p).unwrap() {
                prop_assert!(quotient_reduce(&image, i).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn power_map_generators_are_n_times_plus_decomposable() {
    for p in [3u32, 5] {
        let r = ring(p, Shape::Pu);
        for n in 1..=7i64 {
            let mu = power_map_pullback(n, r, ADOPTED);
            for g in r.generators() {
                let linear = AlgebraElement::generator(r, 0, g).scale(n);
                let rest = mu.image(g).sub(&linear).unwrap();
                assert!(rest.is_decomposable(), "p={p} n={n} {g}: {rest}");
            }
        }
    }
}

#[test]
fn exact_commutator_pullback_reproduces_pinned_units() {
    for p in [3u32, 5] {
        let pu2 = ring(p, Shape::PuxPu);
        for i in 2..p {
            let exact = commutator_pullback_exact(&pu_generator(p, i).unwrap(), ADOPTED).unwrap();
            let reduced = quotient_reduce(&exact, i - 1).unwrap();
            let lead = commutator_pullback_leading(i, p, true).unwrap();
            let a = lead.unit.value.expect("pinned for i < p");
            assert_eq!(reduced, lead.term.scale(a as i64), "p={p} i={i}");
            // modulo triple products the pullback is (i-1)(y_{i-1}⊗y - y⊗y_{i-1})
            let quadratic = exact.filter(|m| m.length() <= 2);
            let y_odd = Monomial::from_factors([wordsolve::cohomology::Factor::new(1, []), wordsolve::cohomology::Factor::new(0, [i - 1])]);
            let odd_y = Monomial::from_factors([wordsolve::cohomology::Factor::new(0, [i - 1]), wordsolve::cohomology::Factor::new(1, [])]);
            let expect = AlgebraElement::monomial(pu2, odd_y, i as i64 - 1)
                .sub(&AlgebraElement::monomial(pu2, y_odd, i as i64 - 1))
                .unwrap();
            assert_eq!(quadratic, expect, "p={p} i={i}");
        }
    }
}

#[test]
fn su_generators_are_primitive() {
    for p in [3u32, 5, 7] {
        let r = RingDescriptor::tensor_power(p, FactorKind::Su, 1).unwrap();
        let delta = coproduct_map(r, ADOPTED);
        let square = r.with_factors(2);
        for g in r.generators() {
            let prim = AlgebraElement::generator(square, 0, g).add(&AlgebraElement::generator(square, 1, g)).unwrap();
            assert_eq!(delta.image(g), &prim);
        }
    }
}
