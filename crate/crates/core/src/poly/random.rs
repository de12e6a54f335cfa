//! Seeded random polyvectors and coordinate changes.

use rand::Rng;

use super::Polyvector;
use crate::rational::{q, qf, Q};

fn small_coefficient(rng: &mut impl Rng) -> Q {
    loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            return qf(n, rng.gen_range(1i64..=3));
        }
    }
}

fn random_exponents(rng: &mut impl Rng, d: usize, max_order: u32) -> Vec<u32> {
    let order = rng.gen_range(0..=max_order);
    let mut exps = vec![0u32; d];
    for _ in 0..order {
        exps[rng.gen_range(0..d)] += 1;
    }
    exps
}

/// A polyvector of `θ`-degree `degree` with up to `terms` monomials of
/// `x`-order at most `max_order`.
pub fn random_polyvector(
    rng: &mut impl Rng,
    d: usize,
    degree: usize,
    max_order: u32,
    terms: usize,
) -> Polyvector {
    let mut out = Polyvector::zero(d);
    if degree > d {
        return out;
    }
    for _ in 0..terms {
        let mut theta = 0u64;
        while (theta.count_ones() as usize) < degree {
            theta |= 1 << rng.gen_range(0..d);
        }
        let exps = random_exponents(rng, d, max_order);
        out.add_term(exps, theta, small_coefficient(rng));
    }
    out
}

/// `Σ p_i(x) θ_i` with random polynomial components of order at most `max_order`.
pub fn random_vector_field(rng: &mut impl Rng, d: usize, max_order: u32) -> Polyvector {
    let mut out = Polyvector::zero(d);
    for i in 0..d {
        for _ in 0..2 {
            let exps = random_exponents(rng, d, max_order);
            out.add_term(exps, 1 << i, small_coefficient(rng));
        }
    }
    out
}

/// A random invertible `d × d` matrix with small integer entries.
pub fn random_invertible(rng: &mut impl Rng, d: usize) -> Vec<Vec<Q>> {
    loop {
        let m: Vec<Vec<Q>> = (0..d)
            .map(|_| (0..d).map(|_| q(rng.gen_range(-3i64..=3))).collect())
            .collect();
        if super::action::invert(&m).is_some() {
            return m;
        }
    }
}
