//! Critical points, critical values and critical angles of a product.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::blaschke::BlaschkeProduct;
use crate::polyroot::{all_roots, factor_polynomials, Polynomial};
use crate::{angle_diff, Result};

/// Deduplication tolerance for critical values and angles.
pub const DEDUP_TOL: f64 = 1e-10;

// Relative size below which the top coefficients of the derivative
// numerator are treated as cancelled.
const NUMERATOR_TRIM: f64 = 1e-14;
// Numerator roots this close to a pole are common factors with the
// denominator (repeated zeros), not critical points.
const POLE_FACTOR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalData {
    /// Critical points in the open disk, repeated by multiplicity.
    pub points_inside: Vec<Complex64>,
    /// Critical points outside the closed disk.
    pub points_outside: Vec<Complex64>,
    /// Critical values `B(p)` of the inside points, deduplicated.
    pub values: Vec<Complex64>,
    /// Principal arguments in `(-π, π]` of the nonzero critical values, sorted.
    pub params: Vec<f64>,
    /// Degree of the numerator of `B'`; `2n - 2` unless 0 is a critical point.
    pub numerator_degree: usize,
}

impl CriticalData {
    pub fn compute(b: &BlaschkeProduct) -> Result<Self> {
        let numerator = derivative_numerator(b);
        let numerator_degree = numerator.degree().unwrap_or(0);
        let roots = if numerator_degree == 0 {
            vec![]
        } else {
            all_roots(&numerator)?
        };

        let (mut points_inside, outside): (Vec<_>, Vec<_>) =
            roots.into_iter().partition(|p| p.norm() < 1.0);
        let points_outside: Vec<_> = outside
            .into_iter()
            .filter(|p| {
                b.zeros()
                    .iter()
                    .all(|a| (1.0 - a.conj() * p).norm() > POLE_FACTOR_TOL)
            })
            .map(|p| polish(b, p))
            .collect();
        for p in &mut points_inside {
            *p = polish(b, *p);
        }
        points_inside.sort_by(|a, b| cmp_complex(*a, *b));

        let values = dedup_points(points_inside.iter().map(|p| b.eval_unchecked(*p)));
        let params = params_of(&values);
        Ok(CriticalData {
            points_inside,
            points_outside,
            values,
            params,
            numerator_degree,
        })
    }

    /// Critical values other than 0.
    ///
    /// The value 0 is reached at r = 0 by every radial segment and never
    /// obstructs continuation for r > 0.
    pub fn nonzero_values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.values.iter().copied().filter(|v| v.norm() > DEDUP_TOL)
    }

    /// Partition of the segment `{r e^{it} : 0 ≤ r ≤ R}` by the critical values on it.
    pub fn segment_partition(&self, t: f64, outer_radius: f64) -> SegmentPartition {
        let mut interior: Vec<f64> = self
            .nonzero_values()
            .filter(|v| angle_diff(v.arg(), t).abs() <= DEDUP_TOL)
            .map(|v| v.norm())
            .collect();
        interior.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        let mut radii = Vec::with_capacity(interior.len() + 2);
        radii.push(0.0);
        radii.extend(interior);
        radii.push(outer_radius);
        SegmentPartition { t, radii }
    }
}

/// Breakpoints `0 = ρ_0 < ρ_1 < … < ρ_{m+1} = R` along one radial segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPartition {
    pub t: f64,
    pub radii: Vec<f64>,
}

impl SegmentPartition {
    /// The open radial intervals between consecutive breakpoints.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.radii.windows(2).map(|w| (w[0], w[1]))
    }
}

// Newton on B'/B = Σ 1/(z - a) + Σ ā/(1 - āz), which stays well scaled near
// poles where B' itself varies too fast for the polynomial root to be sharp.
// Steps are kept only while |B'| decreases.
fn polish(b: &BlaschkeProduct, mut p: Complex64) -> Complex64 {
    let slope = |z: Complex64| b.derivative(z).map_or(f64::INFINITY, |d| d.norm());
    let mut best = slope(p);
    for _ in 0..3 {
        if best == 0.0 || b.zeros().iter().any(|a| (p - a).norm() < POLE_FACTOR_TOL) {
            break;
        }
        let (mut l, mut dl) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for a in b.zeros() {
            let u = 1.0 / (p - a);
            let v = a.conj() / (1.0 - a.conj() * p);
            l += u + v;
            dl += v * v - u * u;
        }
        let step = l / dl;
        if step.norm().is_nan() || step.norm() >= POLE_FACTOR_TOL {
            break;
        }
        let next = p - step;
        let size = slope(next);
        if size.is_nan() || size >= best {
            break;
        }
        p = next;
        best = size;
    }
    p
}

/// Numerator of `B'` up to the factor `ε`: `p'q - pq'` with
/// `p = ∏ (z - a_i)` and `q = ∏ (1 - conj(a_i) z)`.
///
/// The `z^{2n-1}` terms cancel identically and are dropped.
pub fn derivative_numerator(b: &BlaschkeProduct) -> Polynomial {
    let (p, q) = factor_polynomials(b);
    let raw = p.derivative().mul(&q).sub(&p.mul(&q.derivative()));
    let full = 2 * b.degree() - 1;
    let mut coefficients: Vec<Complex64> = raw.coefficients().iter().take(full).copied().collect();
    let scale = coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while coefficients
        .last()
        .is_some_and(|c| c.norm() <= NUMERATOR_TRIM * scale)
        && coefficients.len() > 1
    {
        coefficients.pop();
    }
    Polynomial::new(coefficients)
}

pub fn critical_points(b: &BlaschkeProduct) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    CriticalData::compute(b).map(|d| (d.points_inside, d.points_outside))
}

pub fn critical_values(b: &BlaschkeProduct) -> Result<Vec<Complex64>> {
    CriticalData::compute(b).map(|d| d.values)
}

pub fn critical_params(b: &BlaschkeProduct) -> Result<Vec<f64>> {
    CriticalData::compute(b).map(|d| d.params)
}

/// Smallest distance between a sampled curve and a set of critical values.
///
/// Infinite when either set is empty.
pub fn curve_clearance(points: &[Complex64], values: &[Complex64]) -> f64 {
    points
        .iter()
        .flat_map(|p| values.iter().map(move |v| (p - v).norm()))
        .fold(f64::INFINITY, f64::min)
}

/// Distance from `point` to the segment `[from, to]`.
pub fn segment_distance(from: Complex64, to: Complex64, point: Complex64) -> f64 {
    let dir = to - from;
    let len2 = dir.norm_sqr();
    if len2 == 0.0 {
        return (point - from).norm();
    }
    let s = ((point - from) * dir.conj()).re / len2;
    (from + dir * s.clamp(0.0, 1.0) - point).norm()
}

fn dedup_points(points: impl Iterator<Item = Complex64>) -> Vec<Complex64> {
    let mut kept: Vec<Complex64> = Vec::new();
    for p in points {
        if kept.iter().all(|k| (k - p).norm() > DEDUP_TOL) {
            kept.push(p);
        }
    }
    kept
}

fn params_of(values: &[Complex64]) -> Vec<f64> {
    let mut params: Vec<f64> = values
        .iter()
        .filter(|v| v.norm() > DEDUP_TOL)
        .map(|v| v.arg())
        .collect();
    params.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let mut kept: Vec<f64> = Vec::with_capacity(params.len());
    for t in params {
        if kept.iter().all(|k| angle_diff(*k, t).abs() > DEDUP_TOL) {
            kept.push(t);
        }
    }
    kept
}

fn cmp_complex(a: Complex64, b: Complex64) -> Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}
