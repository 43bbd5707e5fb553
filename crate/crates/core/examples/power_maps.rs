//! Pullbacks of the power maps `x -> x^n` on PU(p) as convolution powers of
//! the identity.

use wordsolve::cohomology::{convolve, coproduct_map, power_map_pullback, AlgebraElement, BinomialConvention, RingDescriptor, Shape};

fn main() {
    let conv = BinomialConvention::Adopted;
    let ring = RingDescriptor::new(3, Shape::Pu).unwrap();
    for n in [2, 3, -1] {
        let mu = power_map_pullback(n, ring, conv);
        println!("n = {n}");
        for g in ring.generators() {
            let linear = AlgebraElement::generator(ring, 0, g).scale(n);
            let rest = mu.image(g).sub(&linear).unwrap();
            println!("  {g} -> {}   (decomposable remainder: {})", mu.image(g), rest.is_decomposable());
        }
    }
    let delta = coproduct_map(ring, conv);
    let five = convolve(&power_map_pullback(2, ring, conv), &power_map_pullback(3, ring, conv), &delta);
    println!("[2] * [3] == [5]: {}", five == power_map_pullback(5, ring, conv));
}
