mod common;

use blaschke_core::critical::derivative_numerator;
use blaschke_core::{angle_diff, CriticalData};
use common::*;
use num_complex::Complex64;

#[test]
fn critical_points_are_zeros_of_the_derivative() {
    let mut rng = rng(101);
    for trial in 0..40 {
        let n = 2 + trial % 6;
        let b = random_product(&mut rng, n);
        let data = CriticalData::compute(&b).unwrap();
        for p in data.points_inside.iter().chain(&data.points_outside) {
            let d = b.derivative(*p).unwrap();
            assert!(d.norm() <= 1e-8, "B'({p}) = {d:e} for {:?}", b.zeros());
        }
        for p in &data.points_inside {
            assert!(p.norm() < 1.0);
        }
        // Distinct zeros and a full-degree numerator: n - 1 inside counting multiplicity.
        if data.numerator_degree == 2 * n - 2 {
            assert_eq!(data.points_inside.len(), n - 1);
        }
    }
}

#[test]
fn outside_critical_points_mirror_inside_ones() {
    let mut rng = rng(202);
    let mut checked = 0;
    for trial in 0..40 {
        let n = 2 + trial % 5;
        let b = random_product(&mut rng, n);
        let data = CriticalData::compute(&b).unwrap();
        if data.numerator_degree != 2 * n - 2 {
            continue;
        }
        let mirrored: Vec<Complex64> = data
            .points_inside
            .iter()
            .filter(|p| p.norm() > 0.0)
            .map(|p| 1.0 / p.conj())
            .collect();
        let d = multiset_distance(&mirrored, &data.points_outside);
        assert!(d <= 1e-7, "reflection mismatch {d:e}");
        checked += 1;
    }
    assert!(checked >= 30);
}

#[test]
fn critical_values_and_angles_are_consistent() {
    let mut rng = rng(303);
    for n in 2..=6 {
        let b = random_product(&mut rng, n);
        let data = CriticalData::compute(&b).unwrap();
        for p in &data.points_inside {
            let v = b.eval(*p).unwrap();
            assert!(data.values.iter().any(|k| (k - v).norm() <= 1e-10));
        }
        for v in data.nonzero_values() {
            assert!(data
                .params
                .iter()
                .any(|t| angle_diff(*t, v.arg()).abs() <= 1e-10));
        }
        assert!(data.params.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn numerator_of_power_map() {
    for n in 2..=6u32 {
        let b = power(n as usize);
        let numerator = derivative_numerator(&b);
        assert_eq!(numerator.degree(), Some(n as usize - 1));
        let top = numerator.coefficients()[n as usize - 1];
        assert!((top - Complex64::new(n as f64, 0.0)).norm() <= 1e-14);
        let data = CriticalData::compute(&b).unwrap();
        assert_eq!(data.points_inside.len(), n as usize - 1);
        assert!(data.points_inside.iter().all(|p| p.norm() <= 1e-12));
        assert!(data.params.is_empty());
    }
}
