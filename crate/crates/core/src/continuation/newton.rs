use num_complex::Complex64;

use super::ContinuationConfig;
use crate::blaschke::{BlaschkeProduct, DERIVATIVE_TOL};
use crate::{Error, Result};

// Extra steps taken after the residual test passes, while corrections still shrink.
const REFINEMENT_STEPS: usize = 2;

/// Result of a converged Newton iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub z: Complex64,
    pub iterations: usize,
    /// `|z_j - z|` for every iterate `z_0, …, z_m = z`.
    pub errors: Vec<f64>,
    pub residual: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Safeguard {
    None,
    /// Every correction must be at most half the previous one.
    Contraction,
}

/// Solves `B(z) = w` by `z ← z - (B(z) - w) / B'(z)` starting at `z0`.
///
/// Converged once `|B(z) - w| <= newton_tol`; at most two further steps are
/// then taken as long as each correction is smaller than half the previous
/// one, which brings `z` to working precision where `|B'|` is small. Fails on
/// the iteration cap, on a vanishing derivative, or when an iterate leaves the
/// disk of radius `R`.
pub fn newton_solve(
    b: &BlaschkeProduct,
    w: Complex64,
    z0: Complex64,
    cfg: &ContinuationConfig,
) -> Result<NewtonOutcome> {
    iterate(b, w, z0, cfg, Safeguard::None)
}

pub(crate) fn iterate(
    b: &BlaschkeProduct,
    w: Complex64,
    z0: Complex64,
    cfg: &ContinuationConfig,
    safeguard: Safeguard,
) -> Result<NewtonOutcome> {
    let fail = |msg: String| Error::NotConverged(format!("Newton toward {w}: {msg}"));
    let mut iterates = vec![z0];
    let mut z = z0;
    let mut last_step = f64::INFINITY;
    let (mut value, mut slope) = b.eval_with_derivative(z).map_err(|e| fail(e.to_string()))?;
    let mut residual = (value - w).norm();

    while residual > cfg.newton_tol {
        if iterates.len() > cfg.max_newton_iters {
            return Err(fail(format!(
                "{} iterations, residual {residual:e}",
                cfg.max_newton_iters
            )));
        }
        if slope.norm() < DERIVATIVE_TOL {
            return Err(fail(format!("derivative vanishes at {z}")));
        }
        let step = (value - w) / slope;
        let size = step.norm();
        if safeguard == Safeguard::Contraction
            && size > 0.5 * last_step
            && size > 1e-14 * (1.0 + z.norm())
        {
            return Err(fail(format!("corrections stopped contracting at {z}")));
        }
        last_step = size;
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > b.outer_radius() {
            return Err(fail(format!("iterate escaped to {z}")));
        }
        iterates.push(z);
        (value, slope) = b.eval_with_derivative(z).map_err(|e| fail(e.to_string()))?;
        residual = (value - w).norm();
    }

    for _ in 0..REFINEMENT_STEPS {
        if residual == 0.0 || slope.norm() < DERIVATIVE_TOL {
            break;
        }
        let step = (value - w) / slope;
        let size = step.norm();
        if size > 0.5 * last_step || size <= f64::EPSILON * z.norm() {
            break;
        }
        let next = z - step;
        let Ok((v, s)) = b.eval_with_derivative(next) else {
            break;
        };
        let r = (v - w).norm();
        if r > cfg.newton_tol {
            break;
        }
        last_step = size;
        z = next;
        value = v;
        slope = s;
        residual = r;
        iterates.push(z);
    }

    let errors = iterates.iter().map(|x| (x - z).norm()).collect();
    Ok(NewtonOutcome {
        z,
        iterations: iterates.len() - 1,
        errors,
        residual,
    })
}
