use nalgebra::DVector;
use rand::Rng;

use super::Space;
use crate::error::{Error, Result};

/// A subset `E` closed under the convexity mapping.
pub trait ConvexSubset<S: Space> {
    fn contains(&self, space: &S, p: &S::Point) -> bool;

    /// Draws a point of the subset.
    fn sample<R: Rng + ?Sized>(&self, space: &S, rng: &mut R) -> S::Point;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WholeSpace;

impl<S: Space> ConvexSubset<S> for WholeSpace {
    fn contains(&self, space: &S, p: &S::Point) -> bool {
        space.validate(p).is_ok()
    }

    fn sample<R: Rng + ?Sized>(&self, space: &S, rng: &mut R) -> S::Point {
        space.sample(rng)
    }
}

/// Closed ball `{p : d(center, p) ≤ radius}`; convex in every W-hyperbolic
/// space by axiom (i).
#[derive(Debug, Clone)]
pub struct Ball<P> {
    pub center: P,
    pub radius: f64,
    /// Slack allowed on the boundary for rounding.
    pub slack: f64,
}

impl<P> Ball<P> {
    pub fn new(center: P, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::parameter(format!("ball radius must be finite and >= 0, got {radius}")));
        }
        Ok(Ball {
            center,
            radius,
            slack: 1e-12,
        })
    }
}

impl<S: Space> ConvexSubset<S> for Ball<S::Point> {
    fn contains(&self, space: &S, p: &S::Point) -> bool {
        space.validate(p).is_ok() && space.distance(&self.center, p) <= self.radius + self.slack
    }

    /// Rejection sampling from the space's own distribution, falling back to
    /// a geodesic shrink towards the centre.
    fn sample<R: Rng + ?Sized>(&self, space: &S, rng: &mut R) -> S::Point {
        for _ in 0..64 {
            let p = space.sample(rng);
            if space.distance(&self.center, &p) <= self.radius {
                return p;
            }
        }
        let p = space.sample(rng);
        let d = space.distance(&self.center, &p);
        let t = rng.gen::<f64>() * self.radius / d;
        space.convex_combination(&self.center, &p, t.min(1.0))
    }
}

/// Axis-aligned box in Euclidean space; an interval in one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRegion {
    pub lower: DVector<f64>,
    pub upper: DVector<f64>,
}

impl BoxRegion {
    pub fn new(lower: DVector<f64>, upper: DVector<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::parameter("box bounds must have equal length and lower <= upper"));
        }
        Ok(BoxRegion { lower, upper })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(DVector::from_element(1, lo), DVector::from_element(1, hi))
    }
}

impl<S: Space<Point = DVector<f64>>> ConvexSubset<S> for BoxRegion {
    fn contains(&self, space: &S, p: &DVector<f64>) -> bool {
        space.validate(p).is_ok()
            && p.len() == self.lower.len()
            && p
                .iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .all(|(c, (l, u))| *l <= *c && *c <= *u)
    }

    fn sample<R: Rng + ?Sized>(&self, _space: &S, rng: &mut R) -> DVector<f64> {
        DVector::from_fn(self.lower.len(), |i, _| {
            let (l, u) = (self.lower[i], self.upper[i]);
            if l == u {
                l
            } else {
                rng.gen_range(l..=u)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub trials: usize,
    pub escapes: usize,
}

impl ClosureReport {
    pub fn closed(&self) -> bool {
        self.escapes == 0
    }
}

/// Draws `(x, y, λ)` from the subset and counts combinations that leave it.
pub fn check_closure<S, E, R>(space: &S, set: &E, rng: &mut R, trials: usize) -> ClosureReport
where
    S: Space,
    E: ConvexSubset<S>,
    R: Rng + ?Sized,
{
    let escapes = (0..trials)
        .filter(|_| {
            let x = set.sample(space, rng);
            let y = set.sample(space, rng);
            let lambda = rng.gen::<f64>();
            !set.contains(space, &space.convex_combination(&x, &y, lambda))
        })
        .count();
    ClosureReport { trials, escapes }
}
