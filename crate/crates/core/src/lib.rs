//! Inverse branches of finite Blaschke products on the closed unit disk.
//!
//! A product `B(z) = ε ∏ (z - a_k) / (1 - conj(a_k) z)` with all `a_k` in the
//! open disk maps the disk onto itself `n`-to-one. Its inverse branches
//! generalize the complex `n`-th root (`a_k = 0`, `ε = 1` gives `B(z) = z^n`).
//!
//! The crate is organized bottom-up:
//!
//! - [`blaschke`]: evaluation, derivatives and the boundary argument `β`
//!   together with the boundary inverse branches `τ_k`.
//! - [`polyroot`]: the degree-`n` polynomial whose roots are the preimages of
//!   a point, and an Aberth–Ehrlich solver for it.
//! - [`critical`]: critical points, critical values and critical angles.
//! - [`continuation`]: Newton path continuation along radial segments and
//!   circles, plus an ODE integrator used as an independent oracle.
//! - [`atlas`]: grouping of trajectories into branches and raster rendering.

pub mod atlas;
pub mod blaschke;
pub mod continuation;
pub mod critical;
mod error;
pub mod polyroot;

pub use atlas::{BranchAtlas, ClassificationMode, RasterImage};
pub use blaschke::{BlaschkeProduct, BoundaryArgument};
pub use continuation::{ContinuationConfig, InverseTracker, Sample, Trajectory, TrajectoryKind};
pub use critical::{CriticalData, SegmentPartition};
pub use error::{Error, Result};
pub use polyroot::{Polynomial, Preimages};

/// A point of the complex plane. Operations reject non-finite components.
pub type ComplexPoint = num_complex::Complex64;

/// Signed distance between two angles reduced to `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}
