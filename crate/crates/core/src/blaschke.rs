//! Finite Blaschke products and their boundary argument.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerance on `| |ε| - 1 |`.
pub const EPSILON_UNIT_TOL: f64 = 1e-9;
/// `|1 - conj(a) z|` below this is treated as a pole.
pub const POLE_TOL: f64 = 1e-14;
/// `|B'(z)|` below this is treated as a critical point.
pub const DERIVATIVE_TOL: f64 = 1e-12;
/// Outer radius used when every zero is at the origin.
pub const OUTER_RADIUS_CAP: f64 = 1e6;

const TAU_RESIDUAL_TOL: f64 = 1e-12;
const TAU_MAX_ITERS: usize = 200;

/// `B(z) = ε ∏_k (z - a_k) / (1 - conj(a_k) z)` with `|ε| = 1` and `|a_k| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    epsilon: Complex64,
    zeros: Vec<Complex64>,
    outer_radius: f64,
    // n·β(t) = beta_offset + Σ_k γ_k(t); fixes n·β(0) = Arg B(1).
    beta_offset: f64,
}

impl BlaschkeProduct {
    pub fn new(epsilon: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if !is_finite(epsilon) || zeros.iter().any(|a| !is_finite(*a)) {
            return Err(Error::InvalidParameter("non-finite parameter".into()));
        }
        if (epsilon.norm() - 1.0).abs() > EPSILON_UNIT_TOL {
            return Err(Error::InvalidParameter(format!(
                "|epsilon| = {} is not 1",
                epsilon.norm()
            )));
        }
        if zeros.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one zero is required".into(),
            ));
        }
        if let Some(a) = zeros.iter().find(|a| a.norm() >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "zero {a} is not inside the unit disk"
            )));
        }

        let outer_radius = zeros
            .iter()
            .filter(|a| a.norm() > 0.0)
            .map(|a| 1.0 / a.norm())
            .fold(OUTER_RADIUS_CAP, f64::min);

        let mut product = BlaschkeProduct {
            epsilon,
            zeros,
            outer_radius,
            beta_offset: 0.0,
        };
        let unnormalized = epsilon.arg()
            + product
                .zeros
                .iter()
                .map(|a| factor_argument_excess(*a, 0.0))
                .sum::<f64>();
        let target = product.eval(Complex64::new(1.0, 0.0))?.arg();
        product.beta_offset = epsilon.arg() + TAU * ((target - unnormalized) / TAU).round();
        Ok(product)
    }

    /// The power map `z^n`.
    pub fn power(n: usize) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn epsilon(&self) -> Complex64 {
        self.epsilon
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// `R = min 1/|a_k|` over nonzero zeros, capped at [`OUTER_RADIUS_CAP`].
    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    fn check_point(&self, z: Complex64) -> Result<()> {
        if !is_finite(z) {
            return Err(Error::InvalidParameter(format!("non-finite point {z}")));
        }
        let distance = self
            .zeros
            .iter()
            .map(|a| (1.0 - a.conj() * z).norm())
            .fold(f64::INFINITY, f64::min);
        if distance < POLE_TOL {
            return Err(Error::PoleProximity { z, distance });
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_point(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.epsilon, |acc, a| {
            acc * ((z - a) / (1.0 - a.conj() * z))
        })
    }

    /// `B'(z)` by the product rule over factors; finite at the zeros of `B`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.eval_with_derivative(z).map(|(_, d)| d)
    }

    /// `(B(z), B'(z))` sharing the factor evaluations.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_point(z)?;
        let n = self.zeros.len();
        let mut factors = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        for a in &self.zeros {
            let den = 1.0 - a.conj() * z;
            factors.push((z - a) / den);
            slopes.push((1.0 - a.norm_sqr()) / (den * den));
        }
        // suffix[i] = ∏_{j >= i} factors[j]
        let mut suffix = vec![Complex64::new(1.0, 0.0); n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] * factors[i];
        }
        let mut prefix = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..n {
            sum += slopes[i] * prefix * suffix[i + 1];
            prefix *= factors[i];
        }
        // same operation order as `eval_unchecked`, so both agree bitwise
        let value = factors.iter().fold(self.epsilon, |acc, f| acc * f);
        Ok((value, self.epsilon * sum))
    }

    /// `B'(z) = B(z) [Σ 1/(z - a_i) + Σ conj(a_i)/(1 - conj(a_i) z)]`.
    ///
    /// Singular at the zeros of `B`; used as a cross-check of [`Self::derivative`].
    pub fn derivative_logarithmic(&self, z: Complex64) -> Result<Complex64> {
        let value = self.eval(z)?;
        let sum: Complex64 = self
            .zeros
            .iter()
            .map(|a| 1.0 / (z - a) + a.conj() / (1.0 - a.conj() * z))
            .sum();
        let d = value * sum;
        if !is_finite(d) {
            return Err(Error::InvalidParameter(format!("{z} is a zero of B")));
        }
        Ok(d)
    }

    /// The ODE field `f(z) = B(z) / B'(z)`.
    pub fn ode_field(&self, z: Complex64) -> Result<Complex64> {
        let (value, slope) = self.eval_with_derivative(z)?;
        if slope.norm() < DERIVATIVE_TOL {
            return Err(Error::DegenerateDerivative {
                z,
                modulus: slope.norm(),
            });
        }
        Ok(value / slope)
    }

    pub fn boundary(&self) -> BoundaryArgument<'_> {
        BoundaryArgument { product: self }
    }
}

/// The continuous argument `β` with `B(e^{it}) = e^{i n β(t)}`.
///
/// Normalized so that `n β(0)` is the principal argument of `B(1)`.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryArgument<'a> {
    product: &'a BlaschkeProduct,
}

impl<'a> BoundaryArgument<'a> {
    pub fn product(&self) -> &'a BlaschkeProduct {
        self.product
    }

    pub fn beta(&self, t: f64) -> f64 {
        let p = self.product;
        let excess: f64 = p.zeros.iter().map(|a| factor_argument_excess(*a, t)).sum();
        let n = p.degree() as f64;
        t + (p.beta_offset + excess) / n
    }

    /// `β'(t)`: the mean of the Poisson kernels of the zeros. Always positive.
    pub fn beta_derivative(&self, t: f64) -> f64 {
        let p = self.product;
        let total: f64 = p
            .zeros
            .iter()
            .map(|a| {
                let rho = a.norm();
                let alpha = a.arg();
                (1.0 - rho * rho) / (1.0 - 2.0 * rho * (t - alpha).cos() + rho * rho)
            })
            .sum();
        total / p.degree() as f64
    }

    /// `τ_k(t) = β⁻¹((t + 2πk)/n)`, so that `B(e^{iτ_k(t)}) = e^{it}`.
    pub fn tau(&self, k: usize, t: f64) -> Result<f64> {
        let n = self.product.degree();
        if k >= n {
            return Err(Error::InvalidParameter(format!(
                "branch {k} out of range 0..{n}"
            )));
        }
        if !t.is_finite() {
            return Err(Error::InvalidParameter("non-finite angle".into()));
        }
        self.invert((t + TAU * k as f64) / n as f64)
    }

    /// `[τ_0(t), …, τ_{n-1}(t)]`, strictly increasing and spanning less than `2π`.
    pub fn taus(&self, t: f64) -> Result<Vec<f64>> {
        (0..self.product.degree()).map(|k| self.tau(k, t)).collect()
    }

    /// Solves `β(s) = target` by Newton's method safeguarded with bisection.
    pub fn invert(&self, target: f64) -> Result<f64> {
        // β(s) - s - offset/n lies strictly inside (-π, π).
        let shift = self.product.beta_offset / self.product.degree() as f64;
        let mut lo = target - shift - PI;
        let mut hi = target - shift + PI;
        let mut s = target - shift;
        let mut residual = self.beta(s) - target;
        for _ in 0..TAU_MAX_ITERS {
            if residual.abs() <= 1e-15 * (1.0 + target.abs()) {
                break;
            }
            if residual < 0.0 {
                lo = s;
            } else {
                hi = s;
            }
            let mut next = s - residual / self.beta_derivative(s);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if next == s || hi - lo <= f64::EPSILON * s.abs().max(1.0) {
                break;
            }
            s = next;
            residual = self.beta(s) - target;
        }
        if residual.abs() > TAU_RESIDUAL_TOL {
            return Err(Error::NotConverged(format!(
                "boundary inversion at {target}: residual {residual:e}"
            )));
        }
        Ok(s)
    }
}

// γ_a(t) - t for one factor: 2·atan2(ρ sin(t - α), 1 - ρ cos(t - α)).
fn factor_argument_excess(a: Complex64, t: f64) -> f64 {
    let q = a.conj() * Complex64::from_polar(1.0, t);
    2.0 * q.im.atan2(1.0 - q.re)
}

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
