mod common;

use std::f64::consts::PI;

use blaschke_core::polyroot::{all_roots, preimages};
use blaschke_core::{BlaschkeProduct, CriticalData, Polynomial};
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn product_strategy() -> impl Strategy<Value = BlaschkeProduct> {
    (1usize..=7, any::<u64>()).prop_map(|(n, seed)| random_product(&mut rng(seed), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_point_is_among_the_preimages_of_its_image(
        b in product_strategy(),
        seed in any::<u64>(),
    ) {
        let z = disk_point(&mut rng(seed), 0.95);
        let critical = CriticalData::compute(&b).unwrap();
        prop_assume!(critical.points_inside.iter().all(|p| (z - p).norm() > 1e-2));
        let w = b.eval(z).unwrap();
        let points = preimages(&b, w).unwrap();
        prop_assert_eq!(points.len(), b.degree());
        let nearest = points.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
        prop_assert!(nearest <= 1e-8, "nearest preimage at distance {nearest:e}");
    }

    #[test]
    fn unimodular_values_pull_back_to_the_circle(b in product_strategy(), t in -PI..PI) {
        for z in preimages(&b, unit(t)).unwrap().iter() {
            prop_assert!((z.norm() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn root_sum_matches_vieta(b in product_strategy(), seed in any::<u64>()) {
        let w = disk_point(&mut rng(seed), 0.99);
        let n = b.degree();
        let a = b.zeros();
        // ε∏(z − a) − w∏(1 − āz): leading and subleading coefficients by hand.
        let neg_conj: Vec<Complex64> = a.iter().map(|x| -x.conj()).collect();
        let prod_all: Complex64 = neg_conj.iter().product();
        let leave_one_out: Complex64 = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).map(|j| neg_conj[j]).product::<Complex64>())
            .sum();
        let c_n = b.epsilon() - w * prod_all;
        let c_n1 = -b.epsilon() * a.iter().sum::<Complex64>() - w * leave_one_out;
        prop_assume!(c_n.norm() > 1e-3);
        let sum: Complex64 = preimages(&b, w).unwrap().iter().sum();
        prop_assert!((sum + c_n1 / c_n).norm() <= 1e-8);
    }

    #[test]
    fn aberth_recovers_prescribed_roots(seed in any::<u64>(), d in 1usize..=12) {
        let mut rng = rng(seed);
        let roots: Vec<Complex64> = (0..d).map(|_| disk_point(&mut rng, 2.0)).collect();
        let min_gap = roots
            .iter()
            .enumerate()
            .flat_map(|(i, x)| roots[i + 1..].iter().map(move |y| (x - y).norm()))
            .fold(f64::INFINITY, f64::min);
        prop_assume!(min_gap > 0.05);
        let found = all_roots(&Polynomial::from_roots(&roots)).unwrap();
        prop_assert!(multiset_distance(&roots, &found) <= 1e-8);
    }
}

#[test]
fn preimages_of_zero_are_the_zeros() {
    let mut rng = rng(3);
    for n in 1..=6 {
        let b = random_product(&mut rng, n);
        let points = preimages(&b, Complex64::new(0.0, 0.0)).unwrap();
        assert!(multiset_distance(&points, b.zeros()) <= 1e-10);
    }
}
