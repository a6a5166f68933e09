#![allow(dead_code)]

use lorenz_core::lorenz_map::LorenzMap;
use lorenz_core::numerics::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

pub fn sym(n: i64, d: i64) -> LorenzMap {
    LorenzMap::symmetric(q(n, d)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational in the open interval `(lo/den, hi/den)` with denominator `den`.
pub fn rational_between(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Scalar {
    q(rng.random_range(lo + 1..hi), den)
}

/// Random symmetric maps with slope in `(1, 2)`.
pub fn random_symmetric(rng: &mut ChaCha8Rng) -> (String, LorenzMap) {
    let a = rational_between(rng, 100, 200, 100);
    (format!("symmetric a={a}"), LorenzMap::symmetric(a).unwrap())
}

/// Random β-maps with `β ∈ [6/5, 19/10]` and `0 < α < 2 - β`.
pub fn random_beta(rng: &mut ChaCha8Rng) -> (String, LorenzMap) {
    let n = rng.random_range(120..=190);
    let beta = q(n, 100);
    let alpha = rational_between(rng, 0, 200 - n, 100);
    (format!("beta β={beta} α={alpha}"), LorenzMap::beta(beta, alpha).unwrap())
}

/// Alternating symmetric and β samples.
pub fn mixed_sample(seed: u64, count: usize) -> Vec<(String, LorenzMap)> {
    let mut r = rng(seed);
    (0..count).map(|i| if i % 2 == 0 { random_symmetric(&mut r) } else { random_beta(&mut r) }).collect()
}

/// A 50-point `(β, α)` grid with `β + α < 2`.
pub fn beta_grid() -> Vec<(Scalar, Scalar, LorenzMap)> {
    let mut out = Vec::new();
    for bn in [21, 22, 24, 26, 28, 30, 32, 34, 36, 38] {
        let beta = q(bn, 20);
        for j in 1..=5 {
            let alpha = q((40 - bn) * j, 20 * 6);
            out.push((beta.clone(), alpha.clone(), LorenzMap::beta(beta.clone(), alpha).unwrap()));
        }
    }
    out
}

/// Random rational in `[a, b]` with the given denominator.
pub fn random_point(rng: &mut ChaCha8Rng, map: &LorenzMap, den: i64) -> Scalar {
    let t = q(rng.random_range(0..=den), den);
    map.a() + &(&(map.b() - map.a()) * &t)
}
