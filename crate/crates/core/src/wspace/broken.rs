use nalgebra::DVector;
use rand::Rng;

use super::{Euclidean, Space};
use crate::error::Result;

/// The real line with the deliberately wrong convexity mapping
/// `W(x, y, λ) = y`. Used to check that the axiom checker catches violations.
#[derive(Debug, Clone, Copy)]
pub struct BrokenDemo {
    line: Euclidean,
}

impl Default for BrokenDemo {
    fn default() -> Self {
        BrokenDemo {
            line: Euclidean::new(1).expect("dimension 1 is valid"),
        }
    }
}

impl Space for BrokenDemo {
    type Point = DVector<f64>;

    fn name(&self) -> String {
        "broken-demo".into()
    }

    fn validate(&self, p: &DVector<f64>) -> Result<()> {
        self.line.validate(p)
    }

    fn distance(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.line.distance(x, y)
    }

    fn convex_combination(&self, _x: &DVector<f64>, y: &DVector<f64>, _lambda: f64) -> DVector<f64> {
        y.clone()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        self.line.sample(rng)
    }

    fn parse_point(&self, s: &str) -> Result<DVector<f64>> {
        self.line.parse_point(s)
    }

    fn format_point(&self, p: &DVector<f64>, digits: usize) -> String {
        self.line.format_point(p, digits)
    }
}
