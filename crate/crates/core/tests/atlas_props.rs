mod common;

use std::f64::consts::PI;

use blaschke_core::atlas::{basin_targets, classify_point, raster_basins, raster_branches};
use blaschke_core::continuation::radial_grid;
use blaschke_core::{BlaschkeProduct, ContinuationConfig, InverseTracker, RasterImage};
use common::*;
use num_complex::Complex64;
use rand::Rng;

fn tracker(b: &BlaschkeProduct) -> InverseTracker<'_> {
    InverseTracker::new(b, ContinuationConfig::default()).unwrap()
}

fn components(image: &RasterImage, label: i32) -> usize {
    let (w, h) = (image.width, image.height);
    let mut seen = vec![false; w * h];
    let mut count = 0;
    for start in 0..w * h {
        if seen[start] || image.labels[start] != label {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            let (row, col) = (i / w, i % w);
            let mut neighbours = Vec::with_capacity(4);
            if row > 0 {
                neighbours.push(i - w);
            }
            if row + 1 < h {
                neighbours.push(i + w);
            }
            if col > 0 {
                neighbours.push(i - 1);
            }
            if col + 1 < w {
                neighbours.push(i + 1);
            }
            for j in neighbours {
                if !seen[j] && image.labels[j] == label {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    count
}

#[test]
fn power_map_branches_are_equal_connected_sectors() {
    for n in 2..=4 {
        let b = power(n);
        let resolution = 96;
        let image = raster_branches(&tracker(&b), resolution).unwrap();
        let in_disk = image.in_disk_pixels() as f64;
        for k in 0..n as i32 {
            let area = image.labels.iter().filter(|l| **l == k).count() as f64 / in_disk;
            assert!(
                (area - 1.0 / n as f64).abs() <= 2.0 / resolution as f64,
                "n={n} k={k}: {area}"
            );
            assert_eq!(components(&image, k), 1);
        }
        // Pixel centres away from sector edges carry the sector index.
        for row in 0..resolution {
            for col in 0..resolution {
                let z = image.pixel_center(row, col);
                if z.norm() >= 1.0 {
                    assert_eq!(image.label(row, col), -1);
                    continue;
                }
                // Labels jump where the image crosses the negative real axis.
                let theta = z.arg();
                let image_arg = z.powu(n as u32).arg();
                let edge = ((n as f64 * theta - PI) / (2.0 * PI)).rem_euclid(1.0);
                if edge.min(1.0 - edge) > 0.01 {
                    let k = ((n as f64 * theta - image_arg) / (2.0 * PI)).round() as i64;
                    assert_eq!(image.label(row, col) as i64, k.rem_euclid(n as i64));
                }
            }
        }
    }
}

#[test]
fn trajectory_points_classify_to_their_branch() {
    let mut rng = rng(8);
    for trial in 0..8 {
        let b = random_product(&mut rng, 2 + trial % 4);
        let tracker = tracker(&b);
        let t = angle_avoiding(&mut rng, &tracker.critical().params, 0.05);
        let grid = radial_grid(0.05, 24);
        for k in 0..b.degree() {
            let trajectory = tracker.radial_trajectory(t, k, &grid).unwrap();
            for s in trajectory.samples.iter().skip(1) {
                assert_eq!(classify_point(&tracker, s.z).unwrap(), k);
            }
        }
    }
}

fn oracle_newton(b: &BlaschkeProduct, w: Complex64, mut z: Complex64) -> Option<Complex64> {
    for _ in 0..100 {
        let f = b.eval(z).ok()? - w;
        if f.norm() <= 1e-13 {
            return Some(z);
        }
        z -= f / b.derivative(z).ok()?;
        if !z.norm().is_finite() || z.norm() > 10.0 {
            return None;
        }
    }
    None
}

#[test]
fn basin_labels_pass_an_independent_audit() {
    let mut rng = rng(9);
    for trial in 0..3 {
        let b = random_product(&mut rng, 2 + trial);
        let tracker = tracker(&b);
        let w = disk_point(&mut rng, 0.5);
        let targets = basin_targets(&tracker, w).unwrap();
        let image = raster_basins(&tracker, w, 48).unwrap();
        let mut agreed = 0;
        for row in 0..image.height {
            for col in 0..image.width {
                let label = image.label(row, col);
                if label < 0 {
                    continue;
                }
                let target = targets[label as usize];
                assert!((b.eval(target).unwrap() - w).norm() <= 1e-12);
                if let Some(z) = oracle_newton(&b, w, image.pixel_center(row, col)) {
                    if (z - target).norm() <= 1e-8 {
                        agreed += 1;
                    }
                }
            }
        }
        let labeled = image.labels.iter().filter(|l| **l >= 0).count();
        assert!(
            agreed as f64 >= 0.97 * labeled as f64,
            "{agreed} of {labeled}"
        );
        for (j, target) in targets.iter().enumerate() {
            if let Some((row, col)) = image.pixel_of(*target) {
                if target.norm() < 0.98 {
                    assert_eq!(image.label(row, col), j as i32);
                }
            }
        }
    }
}

#[test]
fn random_branch_rasters_are_nearly_fully_resolved() {
    let mut rng = rng(10);
    for _ in 0..2 {
        let n = rng.gen_range(2..=4);
        let b = random_product(&mut rng, n);
        let image = raster_branches(&tracker(&b), 64).unwrap();
        assert!(image.unresolved_fraction() < 0.02);
        assert!(image
            .labels
            .iter()
            .all(|l| *l >= -1 && *l < b.degree() as i32));
    }
}
