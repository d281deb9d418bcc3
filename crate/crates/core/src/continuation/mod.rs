//! Newton path continuation of preimages.
//!
//! Given a solution `B(z_0) = w_0` and a curve of targets starting at `w_0`
//! that stays away from the critical values, each target is solved by Newton's
//! method seeded with the previous solution. Targets on which the corrector
//! fails are approached through bisected intermediate targets.

mod newton;
mod ode;

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::blaschke::BlaschkeProduct;
use crate::critical::{curve_clearance, segment_distance, CriticalData};
use crate::polyroot::preimages;
use crate::{angle_diff, Error, Result};

use newton::Safeguard;
pub use newton::{newton_solve, NewtonOutcome};

/// A final radial sample this close to a zero is attached to it.
pub const ENDPOINT_ATTACH_TOL: f64 = 1e-2;
/// Angular distance to a critical angle that counts as being on it.
pub const CRITICAL_ANGLE_TOL: f64 = 1e-9;

const ODE_RTOL: f64 = 1e-10;
const ODE_MIN_STEP: f64 = 1e-14;
const SEED_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationConfig {
    /// Required residual `|B(z) - w|` of every accepted point.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    /// Bisections allowed between two consecutive targets.
    pub max_halvings: usize,
    /// Radial trajectories stop at this radius.
    pub r_min: f64,
    /// Minimum distance of the target curve from the nonzero critical values.
    pub clearance_min: f64,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        ContinuationConfig {
            newton_tol: 1e-12,
            max_newton_iters: 50,
            max_halvings: 40,
            r_min: 1e-8,
            clearance_min: 1e-6,
        }
    }
}

impl ContinuationConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.newton_tol)
            || !positive(self.r_min)
            || !positive(self.clearance_min)
            || self.max_newton_iters == 0
            || self.max_halvings == 0
            || self.r_min >= 1.0
        {
            return Err(Error::InvalidParameter(format!(
                "invalid continuation config {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrajectoryKind {
    Radial,
    Circular,
    Generic,
}

impl TrajectoryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrajectoryKind::Radial => "radial",
            TrajectoryKind::Circular => "circular",
            TrajectoryKind::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// `r` on radial paths, `t` on circles, curve position otherwise.
    pub param: f64,
    pub z: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kind: TrajectoryKind,
    pub branch: Option<usize>,
    /// `t` for radial paths, `r` for circles.
    pub fixed_param: f64,
    pub samples: Vec<Sample>,
    /// Zero of `B` that a radial path ends in, when its last sample is close to one.
    pub endpoint_zero: Option<usize>,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.residual).fold(0.0, f64::max)
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.samples.iter().map(|s| s.z)
    }
}

/// `samples` radii from 1 down to `r_min`, geometrically spaced.
pub fn radial_grid(r_min: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => vec![],
        1 => vec![1.0],
        _ => {
            let last = (samples - 1) as f64;
            let mut grid: Vec<f64> = (0..samples).map(|i| r_min.powf(i as f64 / last)).collect();
            grid[samples - 1] = r_min;
            grid
        }
    }
}

/// `samples` angles sweeping `[t0, t0 + 2π]` inclusive.
pub fn circle_grid(t0: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => vec![],
        1 => vec![t0],
        _ => {
            let last = (samples - 1) as f64;
            (0..samples).map(|i| t0 + TAU * i as f64 / last).collect()
        }
    }
}

/// Continuation engine for one product; caches its critical data.
#[derive(Debug, Clone)]
pub struct InverseTracker<'a> {
    product: &'a BlaschkeProduct,
    critical: CriticalData,
    obstacles: Vec<Complex64>,
    config: ContinuationConfig,
}

impl<'a> InverseTracker<'a> {
    pub fn new(product: &'a BlaschkeProduct, config: ContinuationConfig) -> Result<Self> {
        Self::with_critical(product, CriticalData::compute(product)?, config)
    }

    pub fn with_critical(
        product: &'a BlaschkeProduct,
        critical: CriticalData,
        config: ContinuationConfig,
    ) -> Result<Self> {
        config.validate()?;
        let obstacles = critical.nonzero_values().collect();
        Ok(InverseTracker {
            product,
            critical,
            obstacles,
            config,
        })
    }

    pub fn product(&self) -> &'a BlaschkeProduct {
        self.product
    }

    pub fn critical(&self) -> &CriticalData {
        &self.critical
    }

    pub fn config(&self) -> &ContinuationConfig {
        &self.config
    }

    pub fn newton_solve(&self, w: Complex64, z0: Complex64) -> Result<NewtonOutcome> {
        newton_solve(self.product, w, z0, &self.config)
    }

    /// Follows the preimage of a polyline of targets starting from `B(z0) = curve[0]`.
    pub fn continue_curve(&self, curve: &[Complex64], z0: Complex64) -> Result<Trajectory> {
        if curve.is_empty() {
            return Err(Error::InvalidParameter("empty curve".into()));
        }
        self.check_clearance(curve)?;
        let params: Vec<f64> = (0..curve.len()).map(|i| i as f64).collect();
        let at = |s: f64| {
            let i = (s.floor() as usize).min(curve.len() - 1);
            let frac = s - i as f64;
            if frac == 0.0 {
                curve[i]
            } else {
                curve[i] + (curve[i + 1] - curve[i]) * frac
            }
        };
        let samples = self.track(&params, at, z0)?;
        Ok(Trajectory {
            kind: TrajectoryKind::Generic,
            branch: None,
            fixed_param: f64::NAN,
            samples,
            endpoint_zero: None,
        })
    }

    /// Branch `k` along the ray of angle `t`: `B(φ_k(r)) = r e^{it}`, `φ_k(1) = e^{iτ_k(t)}`.
    ///
    /// `r_grid` must start at 1 and decrease strictly, ending no lower than `r_min`.
    pub fn radial_trajectory(&self, t: f64, k: usize, r_grid: &[f64]) -> Result<Trajectory> {
        let n = self.product.degree();
        if k >= n {
            return Err(Error::InvalidParameter(format!(
                "branch {k} out of range 0..{n}"
            )));
        }
        if !t.is_finite() {
            return Err(Error::InvalidParameter("non-finite angle".into()));
        }
        let valid = r_grid.first() == Some(&1.0)
            && r_grid.windows(2).all(|w| w[1] < w[0])
            && r_grid.last().is_some_and(|r| *r >= self.config.r_min);
        if !valid {
            return Err(Error::InvalidParameter(
                "radial grid must decrease strictly from 1 to at least r_min".into(),
            ));
        }
        let r_inner = r_grid[r_grid.len() - 1];
        self.check_ray(t, r_inner, 1.0)?;

        let direction = Complex64::from_polar(1.0, t);
        let z0 = Complex64::from_polar(1.0, self.product.boundary().tau(k, t)?);
        let samples = self.track(r_grid, |r| direction * r, z0)?;
        let endpoint_zero = if r_grid.len() > 1 {
            self.attached_zero(samples[samples.len() - 1].z)
        } else {
            None
        };
        Ok(Trajectory {
            kind: TrajectoryKind::Radial,
            branch: Some(k),
            fixed_param: t,
            samples,
            endpoint_zero,
        })
    }

    /// Preimage `j` continued around the circle `|w| = r`: `B(ψ_j(t)) = r e^{it}`.
    ///
    /// Seeds are the preimages of `r e^{i t_grid[0]}` sorted by argument.
    pub fn circle_trajectory(&self, r: f64, j: usize, t_grid: &[f64]) -> Result<Trajectory> {
        let n = self.product.degree();
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidParameter(format!("radius {r} not in (0, 1]")));
        }
        if j >= n {
            return Err(Error::InvalidParameter(format!(
                "seed {j} out of range 0..{n}"
            )));
        }
        if t_grid.is_empty()
            || t_grid.iter().any(|t| !t.is_finite())
            || !t_grid.windows(2).all(|w| w[1] > w[0])
        {
            return Err(Error::InvalidParameter(
                "angle grid must be non-empty and strictly increasing".into(),
            ));
        }
        if let Some((value, distance)) = self
            .critical
            .values
            .iter()
            .map(|v| (*v, (v.norm() - r).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
        {
            if distance < self.config.clearance_min {
                return Err(Error::NearCriticalValue { value, distance });
            }
        }

        let seeds =
            preimages(self.product, Complex64::from_polar(r, t_grid[0]))?.sorted_by_argument();
        let z0 = *seeds
            .get(j)
            .ok_or_else(|| Error::NotConverged(format!("only {} preimages found", seeds.len())))?;
        let samples = self.track(t_grid, |t| Complex64::from_polar(r, t), z0)?;
        Ok(Trajectory {
            kind: TrajectoryKind::Circular,
            branch: Some(j),
            fixed_param: r,
            samples,
            endpoint_zero: None,
        })
    }

    /// Integrates `χ'(r) = f(χ(r)) / r`, `f = B / B'`, from `r_from` to `r_to`.
    ///
    /// Uses `s = ln r` as the independent variable, which turns the field
    /// autonomous: `dχ/ds = f(χ)`.
    pub fn ode_trajectory(
        &self,
        t: f64,
        z_start: Complex64,
        r_from: f64,
        r_to: f64,
    ) -> Result<Trajectory> {
        if !(r_from > 0.0 && r_to > 0.0 && r_from.is_finite() && r_to.is_finite()) {
            return Err(Error::InvalidParameter("radii must be positive".into()));
        }
        let direction = Complex64::from_polar(1.0, t);
        let start_residual = (self.product.eval(z_start)? - direction * r_from).norm();
        if start_residual > SEED_RESIDUAL_TOL {
            return Err(Error::InvalidParameter(format!(
                "start point residual {start_residual:e} exceeds {SEED_RESIDUAL_TOL:e}"
            )));
        }
        self.check_ray(t, r_from.min(r_to), r_from.max(r_to))?;

        let tol = ode::Tolerances {
            rtol: ODE_RTOL,
            atol: ODE_RTOL,
            min_step: ODE_MIN_STEP,
        };
        let path = ode::integrate(
            |z| self.product.ode_field(z),
            z_start,
            r_from.ln(),
            r_to.ln(),
            &tol,
        )?;
        let last = path.len() - 1;
        let samples = path
            .into_iter()
            .enumerate()
            .map(|(i, (s, z))| {
                let r = match i {
                    0 => r_from,
                    i if i == last => r_to,
                    _ => s.exp(),
                };
                Sample {
                    param: r,
                    z,
                    residual: (self.product.eval_unchecked(z) - direction * r).norm(),
                }
            })
            .collect();
        Ok(Trajectory {
            kind: TrajectoryKind::Radial,
            branch: None,
            fixed_param: t,
            samples,
            endpoint_zero: None,
        })
    }

    /// Continues `z` outward along its own ray `B(z) = r e^{it}` to `r = 1`.
    ///
    /// Returns `(t, e^{iθ})` with `B(e^{iθ}) = e^{it}`.
    pub(crate) fn continue_to_boundary(&self, z: Complex64) -> Result<(f64, Complex64)> {
        let w = self.product.eval(z)?;
        let r = w.norm().min(1.0);
        let t = w.arg();
        if r <= 0.0 {
            return Err(Error::InvalidParameter(format!("{z} is a zero of B")));
        }
        self.check_ray(t, r, 1.0)?;
        // about 16 steps per e-fold of r
        let steps = ((-r.ln()) * 16.0).ceil().max(4.0) as usize;
        let grid: Vec<f64> = (0..=steps)
            .map(|i| {
                if i == steps {
                    1.0
                } else {
                    r.powf(1.0 - i as f64 / steps as f64)
                }
            })
            .collect();
        let direction = Complex64::from_polar(1.0, t);
        let samples = self.track(&grid, |s| direction * s, z)?;
        Ok((t, samples[samples.len() - 1].z))
    }

    fn attached_zero(&self, z: Complex64) -> Option<usize> {
        self.product
            .zeros()
            .iter()
            .enumerate()
            .map(|(i, a)| (i, (a - z).norm()))
            .filter(|(_, d)| *d <= ENDPOINT_ATTACH_TOL)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }

    fn check_clearance(&self, curve: &[Complex64]) -> Result<()> {
        let distance = curve_clearance(curve, &self.obstacles);
        if distance < self.config.clearance_min {
            let value = self
                .obstacles
                .iter()
                .copied()
                .min_by(|a, b| {
                    curve_clearance(curve, &[*a]).total_cmp(&curve_clearance(curve, &[*b]))
                })
                .expect("finite clearance implies a critical value");
            return Err(Error::NearCriticalValue { value, distance });
        }
        Ok(())
    }

    // Rejects rays `[r_lo, r_hi] e^{it}` that meet or pass too close to a critical value.
    fn check_ray(&self, t: f64, r_lo: f64, r_hi: f64) -> Result<()> {
        let direction = Complex64::from_polar(1.0, t);
        for v in &self.obstacles {
            let on_ray = angle_diff(v.arg(), t).abs() <= CRITICAL_ANGLE_TOL;
            let radius = v.norm();
            let clearance = self.config.clearance_min;
            if on_ray && radius >= r_lo - clearance && radius <= r_hi + clearance {
                return Err(Error::CriticalParameter { t, value: *v });
            }
            let distance = segment_distance(direction * r_lo, direction * r_hi, *v);
            if distance < clearance {
                return Err(Error::NearCriticalValue {
                    value: *v,
                    distance,
                });
            }
        }
        Ok(())
    }

    // Sequential continuation over a parametrized target curve.
    fn track<F>(&self, params: &[f64], curve: F, z0: Complex64) -> Result<Vec<Sample>>
    where
        F: Fn(f64) -> Complex64,
    {
        let b = self.product;
        let cfg = &self.config;
        let w0 = curve(params[0]);
        let start = newton::iterate(b, w0, z0, cfg, Safeguard::None)?;
        if (start.z - z0).norm() > SEED_RESIDUAL_TOL.sqrt() {
            return Err(Error::InvalidParameter(format!(
                "seed {z0} is not a preimage of {w0}"
            )));
        }
        let mut samples = Vec::with_capacity(params.len());
        samples.push(Sample {
            param: params[0],
            z: start.z,
            residual: start.residual,
        });

        let mut current = (params[0], start.z);
        for &target in &params[1..] {
            let finest = (target - current.0).abs() * 0.5f64.powi(cfg.max_halvings as i32);
            let mut pending = vec![target];
            while let Some(&p) = pending.last() {
                match newton::iterate(b, curve(p), current.1, cfg, Safeguard::Contraction) {
                    Ok(outcome) => {
                        // Intermediate halving points are not reported.
                        if pending.len() == 1 {
                            samples.push(Sample {
                                param: p,
                                z: outcome.z,
                                residual: outcome.residual,
                            });
                        }
                        current = (p, outcome.z);
                        pending.pop();
                    }
                    Err(err) => {
                        let mid = 0.5 * (current.0 + p);
                        if (mid - current.0).abs() < finest {
                            return Err(Error::NotConverged(format!(
                                "halving budget exhausted near parameter {}: {err}",
                                current.0
                            )));
                        }
                        pending.push(mid);
                    }
                }
            }
        }
        Ok(samples)
    }
}
