//! W-hyperbolic spaces.
//!
//! A W-hyperbolic space is a metric space `(X, d)` together with a convexity
//! mapping `W: X × X × [0, 1] → X` such that for all `x, y, z, w, u` and
//! `λ, μ ∈ [0, 1]`:
//!
//! ```text
//! (i)   d(u, W(x, y, λ))            ≤ (1 − λ) d(u, x) + λ d(u, y)
//! (ii)  d(W(x, y, λ), W(x, y, μ))   = |λ − μ| d(x, y)
//! (iii) W(x, y, λ)                  = W(y, x, 1 − λ)
//! (iv)  d(W(x, z, λ), W(y, w, λ))   ≤ (1 − λ) d(x, y) + λ d(z, w)
//! ```
//!
//! Under (i) the weight `1 − λ` belongs to the *first* argument, so
//! `W(x, y, 0) = x` and `W(x, y, 1) = y`. Every space in this module follows
//! that convention.

mod axioms;
mod broken;
mod convex;
mod euclidean;
mod halfplane;
mod tripod;

pub use axioms::{check_axioms, Axiom, AxiomReport, AxiomResult, DEFAULT_AXIOM_TOLERANCE};
pub use broken::BrokenDemo;
pub use convex::{check_closure, Ball, BoxRegion, ClosureReport, ConvexSubset, WholeSpace};
pub use euclidean::Euclidean;
pub use halfplane::{HalfPlane, HalfPlanePoint};
pub use tripod::{Ray, Tripod, TripodPoint};

use std::fmt::Debug;

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};

/// A metric space equipped with a convexity mapping.
pub trait Space: Send + Sync {
    type Point: Clone + Debug + PartialEq + Send + Sync + 'static;

    /// Registry name, e.g. `euclidean:2`.
    fn name(&self) -> String;

    /// Checks that `p` belongs to the space.
    fn validate(&self, p: &Self::Point) -> Result<()>;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64;

    /// The convexity mapping `W(x, y, λ)` without domain checks.
    ///
    /// Callers guarantee that both points are valid and `λ ∈ [0, 1]`; use
    /// [`interpolate`] for checked access.
    fn convex_combination(&self, x: &Self::Point, y: &Self::Point, lambda: f64) -> Self::Point;

    /// Draws a point from the space's default sampling distribution.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Point;

    fn parse_point(&self, s: &str) -> Result<Self::Point>;

    fn format_point(&self, p: &Self::Point, digits: usize) -> String;

    /// Linear coordinates, for spaces that are (subsets of) vector spaces.
    fn coordinates(&self, _p: &Self::Point) -> Option<DVector<f64>> {
        None
    }

    fn from_coordinates(&self, _v: DVector<f64>) -> Option<Self::Point> {
        None
    }
}

/// Checked convexity mapping: validates both endpoints and `lambda`.
pub fn interpolate<S: Space>(
    space: &S,
    x: &S::Point,
    y: &S::Point,
    lambda: f64,
) -> Result<S::Point> {
    space.validate(x)?;
    space.validate(y)?;
    check_unit(lambda)?;
    Ok(space.convex_combination(x, y, lambda))
}

pub(crate) fn check_unit(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::parameter(format!(
            "interpolation parameter must lie in [0, 1], got {lambda}"
        )))
    }
}

pub(crate) fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
}
