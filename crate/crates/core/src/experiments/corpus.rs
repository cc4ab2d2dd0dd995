//! Maps and schedules shared by the experiments, the command line and tests.

use nalgebra::{dmatrix, dvector};

use crate::error::Result;
use crate::mappings::{AffineMap, ContractiveLike};
use crate::schemes::Schedule;
use crate::wspace::Euclidean;

/// Coefficient of the quadratic corpus map; its Lipschitz constant is 1.1.
pub const QUADRATIC_C: f64 = 0.3;

/// A non-symmetric affine contraction of the plane.
pub fn affine_r2() -> Result<ContractiveLike<Euclidean>> {
    let m = AffineMap::new(dmatrix![0.5, 0.2; -0.1, 0.4], dvector![0.1, -0.2])?;
    ContractiveLike::affine_map("affine-r2", m)
}

/// An affine contraction of three-space.
pub fn affine_r3() -> Result<ContractiveLike<Euclidean>> {
    let m = AffineMap::new(
        dmatrix![0.4, 0.1, 0.0; 0.1, 0.3, -0.1; 0.0, 0.2, 0.5],
        dvector![0.2, 0.0, -0.1],
    )?;
    ContractiveLike::affine_map("affine-r3", m)
}

/// Schedules with `Σ(1 − αₙ) = ∞` used across the property suites.
pub fn schedules() -> Result<Vec<Schedule>> {
    Ok(vec![Schedule::paper_example(), Schedule::sqrt_decay(), Schedule::constant(0.5, 0.5)?])
}
