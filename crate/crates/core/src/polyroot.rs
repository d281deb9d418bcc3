//! Preimages of a point as roots of a polynomial.
//!
//! `B(z) = w` is equivalent to `P(z) = 0` with
//! `P(z) = ε ∏ (z - a_i) - w ∏ (1 - conj(a_i) z)`.

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::ops::Deref;

use num_complex::Complex64;

use crate::blaschke::BlaschkeProduct;
use crate::{Error, Result};

pub const MAX_ITERATIONS: usize = 500;
/// Accepted residual `|p(root)|` relative to the largest coefficient.
pub const RESIDUAL_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Complex polynomial, coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coefficients: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial, trimming leading coefficients of magnitude `<= 1e-300`.
    pub fn new(mut coefficients: Vec<Complex64>) -> Self {
        while coefficients.last().is_some_and(|c| c.norm() <= 1e-300) {
            coefficients.pop();
        }
        Polynomial { coefficients }
    }

    /// `∏ (z - r)` over `roots`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Polynomial::new(vec![ONE]), |acc, r| {
            acc.mul(&Polynomial::new(vec![-r, ONE]))
        })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(ZERO, |acc, c| acc * z + c)
    }

    /// `(p(z), p'(z))` by Horner's scheme.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = ZERO;
        let mut slope = ZERO;
        for c in self.coefficients.iter().rev() {
            slope = slope * z + value;
            value = value * z + c;
        }
        (value, slope)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return Polynomial::new(vec![]);
        }
        let mut out = vec![ZERO; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let len = self.coefficients.len().max(other.coefficients.len());
        let at = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or(ZERO);
        Polynomial::new(
            (0..len)
                .map(|k| at(&self.coefficients, k) - at(&other.coefficients, k))
                .collect(),
        )
    }

    pub fn scale(&self, factor: Complex64) -> Polynomial {
        Polynomial::new(self.coefficients.iter().map(|c| c * factor).collect())
    }

    fn max_coefficient(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    // Σ |c_k| |z|^k, the scale of rounding errors in evaluating p(z).
    fn error_bound(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }
}

/// All complex roots of `p`, repeated by multiplicity.
///
/// Exact zero roots are split off first; the rest come from Aberth–Ehrlich
/// iteration started on a circle of radius `|c_0 / c_d|^{1/d}`, followed by a
/// Newton polish that only accepts residual-reducing steps.
pub fn all_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::InvalidParameter(
                "root finding needs a polynomial of degree >= 1".into(),
            ))
        }
    };
    if p.coefficients
        .iter()
        .any(|c| !(c.re.is_finite() && c.im.is_finite()))
    {
        return Err(Error::InvalidParameter("non-finite coefficient".into()));
    }

    let zero_roots = p.coefficients.iter().take_while(|c| **c == ZERO).count();
    let reduced = Polynomial::new(p.coefficients[zero_roots..].to_vec());
    let mut roots = vec![ZERO; zero_roots];
    if zero_roots < degree {
        roots.extend(aberth(&reduced)?);
    }

    // Outside the unit disk the bound grows like |z|^d, as the evaluation error does.
    for z in &roots {
        let tol = RESIDUAL_TOL * p.max_coefficient() * z.norm().max(1.0).powi(degree as i32);
        let residual = p.eval(*z).norm();
        if residual.is_nan() || residual > tol {
            return Err(Error::NotConverged(format!(
                "root {z} has residual {residual:e} > {tol:e}"
            )));
        }
    }
    Ok(roots)
}

fn aberth(p: &Polynomial) -> Result<Vec<Complex64>> {
    let coeffs = p.coefficients();
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    if d == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }

    let radius = (coeffs[0] / lead).norm().powf(1.0 / d as f64);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / d as f64 + 0.4))
        .collect();
    let mut done = vec![false; d];

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (value, slope) = p.eval_with_derivative(z[i]);
            if value.norm() <= 4.0 * f64::EPSILON * p.error_bound(z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = value / slope;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                // stationary point of p: nudge off it
                let nudge = Complex64::new(1e-3, 1e-3) * (1.0 + z[i].norm());
                z[i] += nudge;
                continue;
            }
            z[i] -= step;
            if step.norm() <= f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&x| x) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged(format!(
            "Aberth iteration exceeded {MAX_ITERATIONS} sweeps"
        )));
    }

    for root in &mut z {
        polish(root, |x| p.eval_with_derivative(x));
    }
    Ok(z)
}

// A few Newton steps, keeping only those that reduce the residual.
fn polish(z: &mut Complex64, f: impl Fn(Complex64) -> (Complex64, Complex64)) {
    let (mut value, mut slope) = f(*z);
    for _ in 0..3 {
        if value.norm() == 0.0 {
            return;
        }
        let next = *z - value / slope;
        if !(next.re.is_finite() && next.im.is_finite()) {
            return;
        }
        let (v, s) = f(next);
        if v.norm() >= value.norm() {
            return;
        }
        *z = next;
        value = v;
        slope = s;
    }
}

/// `P(z) = ε ∏ (z - a_i) - w ∏ (1 - conj(a_i) z)`; its roots solve `B(z) = w`.
pub fn preimage_poly(b: &BlaschkeProduct, w: Complex64) -> Polynomial {
    let (numerator, denominator) = factor_polynomials(b);
    numerator.scale(b.epsilon()).sub(&denominator.scale(w))
}

/// `(∏ (z - a_i), ∏ (1 - conj(a_i) z))`.
pub(crate) fn factor_polynomials(b: &BlaschkeProduct) -> (Polynomial, Polynomial) {
    let numerator = Polynomial::from_roots(b.zeros());
    let denominator = b.zeros().iter().fold(Polynomial::new(vec![ONE]), |acc, a| {
        acc.mul(&Polynomial::new(vec![ONE, -a.conj()]))
    });
    (numerator, denominator)
}

/// The preimage multiset of a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Preimages {
    pub points: Vec<Complex64>,
    /// `n - deg P`; nonzero only if the leading coefficient of `P` vanishes.
    pub degree_drop: usize,
}

impl Deref for Preimages {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.points
    }
}

impl Preimages {
    /// Points ordered by principal argument, ties broken by modulus.
    pub fn sorted_by_argument(&self) -> Vec<Complex64> {
        let mut points = self.points.clone();
        points.sort_by(|a, b| {
            a.arg()
                .partial_cmp(&b.arg())
                .unwrap_or(Ordering::Equal)
                .then(a.norm().partial_cmp(&b.norm()).unwrap_or(Ordering::Equal))
        });
        points
    }

    /// Index of the point closest to `z`.
    pub fn nearest(&self, z: Complex64) -> Option<usize> {
        self.points
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (*a - z)
                    .norm()
                    .partial_cmp(&(*b - z).norm())
                    .unwrap_or(Ordering::Equal)
            })
            .map(|(i, _)| i)
    }
}

/// All solutions of `B(z) = w`, refined by Newton's method on `B` itself.
pub fn preimages(b: &BlaschkeProduct, w: Complex64) -> Result<Preimages> {
    if !(w.re.is_finite() && w.im.is_finite()) || w.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "target {w} is outside the closed disk"
        )));
    }
    let p = preimage_poly(b, w);
    let degree = p.degree().unwrap_or(0);
    let mut points = if degree == 0 { vec![] } else { all_roots(&p)? };
    for z in &mut points {
        polish(z, |x| {
            let (value, slope) = b
                .eval_with_derivative(x)
                .unwrap_or((Complex64::new(f64::INFINITY, 0.0), ONE));
            (value - w, slope)
        });
    }
    Ok(Preimages {
        points,
        degree_drop: b.degree() - degree,
    })
}
