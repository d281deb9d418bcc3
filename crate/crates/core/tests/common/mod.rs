#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use blaschke_core::{angle_diff, BlaschkeProduct};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the disk `|z| <= radius`.
pub fn disk_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI))
}

/// `n` zeros in `|a| <= 0.9`, pairwise at least 0.05 apart, with a random unimodular constant.
pub fn random_product(rng: &mut impl Rng, n: usize) -> BlaschkeProduct {
    let mut zeros: Vec<Complex64> = Vec::with_capacity(n);
    while zeros.len() < n {
        let a = disk_point(rng, 0.9);
        if zeros.iter().all(|b| (a - b).norm() > 0.05) {
            zeros.push(a);
        }
    }
    let epsilon = Complex64::from_polar(1.0, rng.gen_range(-PI..PI));
    BlaschkeProduct::new(epsilon, zeros).unwrap()
}

pub fn power(n: usize) -> BlaschkeProduct {
    BlaschkeProduct::power(n).unwrap()
}

/// Random angle at least `gap` away from every angle in `avoid`.
pub fn angle_avoiding(rng: &mut impl Rng, avoid: &[f64], gap: f64) -> f64 {
    loop {
        let t = rng.gen_range(-PI..PI);
        if avoid.iter().all(|s| angle_diff(t, *s).abs() > gap) {
            return t;
        }
    }
}

pub fn unit(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Pairs every element of `a` with a distinct element of `b`, greedily by distance.
/// Returns the worst pairing distance, or infinity on length mismatch.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn wrap(t: f64) -> f64 {
    t.rem_euclid(TAU)
}
