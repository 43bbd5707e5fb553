//! Arithmetic in `F_p` on canonical representatives `0..p`.

pub fn reduce(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn neg(a: u32, p: u32) -> u32 {
    (p - a % p) % p
}

pub fn inv(a: u32, p: u32) -> Option<u32> {
    if a % p == 0 {
        return None;
    }
    // Fermat
    let mut result = 1u32;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(result, base, p);
        }
        base = mul(base, base, p);
        e >>= 1;
    }
    Some(result)
}

/// `binom(n, k)` reduced mod `p`; zero when `k > n`.
pub fn binomial(n: u32, k: u32, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let mut c: u128 = 1;
    for j in 0..k as u128 {
        c = c * (n as u128 - j) / (j + 1);
    }
    (c % p as u128) as u32
}

/// Symmetric representative in `(-p/2, p/2]`.
pub fn signed(a: u32, p: u32) -> i64 {
    let a = a as i64;
    if 2 * a > p as i64 {
        a - p as i64
    } else {
        a
    }
}
