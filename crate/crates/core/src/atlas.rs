//! Inverse branches as collections of trajectories, and raster renderings.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::continuation::{radial_grid, InverseTracker, Trajectory};
use crate::polyroot::preimages;
use crate::{angle_diff, Error, Result};

/// Angles closer than this to a critical angle are left out of an atlas.
pub const ATLAS_ANGLE_EXCLUSION: f64 = 1e-3;
pub const ATLAS_RADIAL_SAMPLES: usize = 256;
/// Pixels closer than this to a zero or critical point are not classified.
pub const SINGULAR_POINT_TOL: f64 = 1e-6;
/// Two basin targets closer than this are considered equal.
pub const DISTINCT_ROOT_TOL: f64 = 1e-6;
pub const MIN_RESOLUTION: usize = 16;
pub const UNRESOLVED: i32 = -1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassificationMode {
    /// Branch `k` collects the trajectories starting at `e^{iτ_k(t)}`.
    Theorem1,
    /// A branch collects the trajectories ending in the same zero.
    ByZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchAtlas {
    pub mode: ClassificationMode,
    pub branches: BTreeMap<usize, Vec<Trajectory>>,
    pub t_grid: Vec<f64>,
}

impl BranchAtlas {
    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.branches.keys().copied()
    }
}

/// Radial trajectories of every branch over `t_count` uniform angles in `[-π, π)`.
pub fn build_atlas(
    tracker: &InverseTracker<'_>,
    mode: ClassificationMode,
    t_count: usize,
) -> Result<BranchAtlas> {
    if t_count == 0 {
        return Err(Error::InvalidParameter("t_count must be at least 1".into()));
    }
    let critical = &tracker.critical().params;
    let t_grid: Vec<f64> = (0..t_count)
        .map(|i| -PI + TAU * i as f64 / t_count as f64)
        .filter(|t| {
            critical
                .iter()
                .all(|c| angle_diff(*c, *t).abs() > ATLAS_ANGLE_EXCLUSION)
        })
        .collect();

    let n = tracker.product().degree();
    let r_grid = radial_grid(tracker.config().r_min, ATLAS_RADIAL_SAMPLES);
    let jobs: Vec<(f64, usize)> = t_grid
        .iter()
        .flat_map(|t| (0..n).map(move |k| (*t, k)))
        .collect();
    let trajectories = jobs
        .par_iter()
        .map(|(t, k)| tracker.radial_trajectory(*t, *k, &r_grid))
        .collect::<Result<Vec<_>>>()?;

    let mut branches: BTreeMap<usize, Vec<Trajectory>> = BTreeMap::new();
    if mode == ClassificationMode::Theorem1 {
        for k in 0..n {
            branches.insert(k, Vec::new());
        }
    }
    let zeros = tracker.product().zeros();
    for trajectory in trajectories {
        let label = match mode {
            ClassificationMode::Theorem1 => trajectory.branch.unwrap_or(0),
            ClassificationMode::ByZero => {
                let end = trajectory.last().z;
                let nearest = (0..zeros.len())
                    .min_by(|&i, &j| (zeros[i] - end).norm().total_cmp(&(zeros[j] - end).norm()))
                    .unwrap_or(0);
                canonical_zero(zeros, nearest)
            }
        };
        branches.entry(label).or_default().push(trajectory);
    }
    Ok(BranchAtlas {
        mode,
        branches,
        t_grid,
    })
}

// First index holding the same zero, so repeated zeros share a label.
fn canonical_zero(zeros: &[Complex64], i: usize) -> usize {
    zeros
        .iter()
        .position(|a| (a - zeros[i]).norm() <= 1e-12)
        .unwrap_or(i)
}

/// Index `k` of the boundary-indexed branch whose trajectory passes through `z`.
///
/// The preimage is continued outward along its own ray to the boundary and
/// matched with the nearest `τ_k(t)`.
pub fn classify_point(tracker: &InverseTracker<'_>, z: Complex64) -> Result<usize> {
    if z.norm().is_nan() || z.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "{z} is outside the closed disk"
        )));
    }
    let singular = tracker
        .product()
        .zeros()
        .iter()
        .chain(tracker.critical().points_inside.iter())
        .any(|p| (p - z).norm() < SINGULAR_POINT_TOL);
    if singular {
        return Err(Error::InvalidParameter(format!(
            "{z} is too close to a zero or critical point"
        )));
    }
    let (t, arrival) = tracker.continue_to_boundary(z)?;
    let theta = arrival.arg();
    let taus = tracker.product().boundary().taus(t)?;
    let k = taus
        .iter()
        .enumerate()
        .min_by(|a, b| {
            angle_diff(theta, *a.1)
                .abs()
                .total_cmp(&angle_diff(theta, *b.1).abs())
        })
        .map(|(k, _)| k)
        .expect("a product has at least one branch");
    Ok(k)
}

/// Square label grid over `[-1, 1]²`, row-major, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    /// Number of distinct labels a pixel may carry (`0..classes`).
    pub classes: usize,
    /// `-1` marks pixels outside the disk or unresolved ones.
    pub labels: Vec<i32>,
}

impl RasterImage {
    /// Center of pixel `(row, col)` in the complex plane.
    pub fn pixel_center(&self, row: usize, col: usize) -> Complex64 {
        pixel_center(self.width, self.height, row, col)
    }

    pub fn label(&self, row: usize, col: usize) -> i32 {
        self.labels[row * self.width + col]
    }

    /// Pixel whose area contains `z`, if `z` lies in `[-1, 1]²`.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let col = ((z.re + 1.0) / 2.0 * self.width as f64).floor();
        let row = ((1.0 - z.im) / 2.0 * self.height as f64).floor();
        let inside = |x: f64, max: usize| x >= 0.0 && x < max as f64;
        (inside(row, self.height) && inside(col, self.width))
            .then_some((row as usize, col as usize))
    }

    pub fn in_disk_pixels(&self) -> usize {
        (0..self.height)
            .flat_map(|r| (0..self.width).map(move |c| (r, c)))
            .filter(|&(r, c)| self.pixel_center(r, c).norm() <= 1.0)
            .count()
    }

    /// Fraction of in-disk pixels labeled `-1`.
    pub fn unresolved_fraction(&self) -> f64 {
        let mut inside = 0usize;
        let mut unresolved = 0usize;
        for r in 0..self.height {
            for c in 0..self.width {
                if self.pixel_center(r, c).norm() <= 1.0 {
                    inside += 1;
                    if self.label(r, c) == UNRESOLVED {
                        unresolved += 1;
                    }
                }
            }
        }
        unresolved as f64 / inside.max(1) as f64
    }
}

fn pixel_center(width: usize, height: usize, row: usize, col: usize) -> Complex64 {
    Complex64::new(
        -1.0 + (2 * col + 1) as f64 / width as f64,
        1.0 - (2 * row + 1) as f64 / height as f64,
    )
}

fn render<F>(resolution: usize, classes: usize, label: F) -> Result<RasterImage>
where
    F: Fn(Complex64) -> i32 + Sync,
{
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} is below {MIN_RESOLUTION}"
        )));
    }
    let labels = (0..resolution * resolution)
        .into_par_iter()
        .map(|i| {
            let z = pixel_center(resolution, resolution, i / resolution, i % resolution);
            if z.norm() > 1.0 {
                UNRESOLVED
            } else {
                label(z)
            }
        })
        .collect();
    Ok(RasterImage {
        width: resolution,
        height: resolution,
        classes,
        labels,
    })
}

/// Branch label (boundary index `k`) of every in-disk pixel; failures become `-1`.
pub fn raster_branches(tracker: &InverseTracker<'_>, resolution: usize) -> Result<RasterImage> {
    render(resolution, tracker.product().degree(), |z| {
        classify_point(tracker, z).map_or(UNRESOLVED, |k| k as i32)
    })
}

/// Preimages of `w` in the order used for basin labels (by argument, then modulus).
pub fn basin_targets(tracker: &InverseTracker<'_>, w: Complex64) -> Result<Vec<Complex64>> {
    let targets = preimages(tracker.product(), w)?.sorted_by_argument();
    for (i, a) in targets.iter().enumerate() {
        if targets[i + 1..]
            .iter()
            .any(|b| (a - b).norm() <= DISTINCT_ROOT_TOL)
        {
            return Err(Error::InvalidParameter(format!(
                "preimages of {w} are not distinct"
            )));
        }
    }
    Ok(targets)
}

/// Newton basins of the preimages of `w`, labeled by [`basin_targets`] order.
///
/// Pixels whose Newton iteration fails are labeled `-1`.
pub fn raster_basins(
    tracker: &InverseTracker<'_>,
    w: Complex64,
    resolution: usize,
) -> Result<RasterImage> {
    let targets = basin_targets(tracker, w)?;
    render(resolution, targets.len(), |z| {
        match tracker.newton_solve(w, z) {
            Ok(outcome) => nearest_index(&targets, outcome.z) as i32,
            Err(_) => UNRESOLVED,
        }
    })
}

fn nearest_index(points: &[Complex64], z: Complex64) -> usize {
    (0..points.len())
        .min_by(|&i, &j| (points[i] - z).norm().total_cmp(&(points[j] - z).norm()))
        .unwrap_or(0)
}
