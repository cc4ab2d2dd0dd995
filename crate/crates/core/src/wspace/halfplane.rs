use rand::Rng;

use super::{parse_f64, Space};
use crate::error::{Error, Result};

/// A point `x + iy` of the upper half-plane (`y > 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Self {
        HalfPlanePoint { x, y }
    }
}

/// The Poincaré upper half-plane model of the hyperbolic plane.
///
/// Distance: `d(z₁, z₂) = arccosh(1 + |z₁ − z₂|² / (2 y₁ y₂))`, evaluated as
/// `2 asinh(|z₁ − z₂| / (2 √(y₁ y₂)))` which is the same quantity without the
/// cancellation near the diagonal.
///
/// Geodesic interpolation moves the pair onto the imaginary axis with a
/// Möbius isometry, interpolates geometrically there (`t₁^{1−λ} t₂^λ`) and
/// maps back.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HalfPlane;

impl HalfPlane {
    /// Points of the geodesic through `z1` and `z2`, expressed after the
    /// normalisation `z ↦ (z − x₁) / y₁` that sends `z1` to `i`.
    fn geodesic_point(z1: &HalfPlanePoint, z2: &HalfPlanePoint, lambda: f64) -> HalfPlanePoint {
        let u = (z2.x - z1.x) / z1.y;
        let v = z2.y / z1.y;

        if u == 0.0 {
            return HalfPlanePoint::new(z1.x, z1.y * v.powf(lambda));
        }

        // The geodesic through i and u + iv is the semicircle centred at c on
        // the real axis; a and b are its endpoints, with a·b = −1.
        let c = (u * u + v * v - 1.0) / (2.0 * u);
        let r = c.hypot(1.0);
        let (a, b) = if c >= 0.0 {
            (-1.0 / (c + r), c + r)
        } else {
            (c - r, 1.0 / (r - c))
        };

        // f(z) = (z − a) / (b − z) sends a ↦ 0 and b ↦ ∞, so the semicircle
        // becomes the positive imaginary axis; only Im f is nonzero there.
        let image = |p: f64, q: f64| q * (b - a) / ((b - p) * (b - p) + q * q);
        let t1 = image(0.0, 1.0);
        let t2 = image(u, v);
        let t = t1.powf(1.0 - lambda) * t2.powf(lambda);

        // f⁻¹(it) = (a + b·t² + i t (b − a)) / (1 + t²)
        let denom = 1.0 + t * t;
        let re = (a + b * t * t) / denom;
        let im = t * (b - a) / denom;
        HalfPlanePoint::new(z1.x + z1.y * re, z1.y * im)
    }
}

impl Space for HalfPlane {
    type Point = HalfPlanePoint;

    fn name(&self) -> String {
        "halfplane".into()
    }

    fn validate(&self, p: &HalfPlanePoint) -> Result<()> {
        if p.x.is_finite() && p.y.is_finite() && p.y > 0.0 {
            Ok(())
        } else {
            Err(Error::invalid_point(format!(
                "half-plane point needs finite x and y > 0, got ({}, {})",
                p.x, p.y
            )))
        }
    }

    fn distance(&self, p: &HalfPlanePoint, q: &HalfPlanePoint) -> f64 {
        let chord = (p.x - q.x).hypot(p.y - q.y);
        2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh()
    }

    fn convex_combination(&self, p: &HalfPlanePoint, q: &HalfPlanePoint, lambda: f64) -> HalfPlanePoint {
        if lambda == 0.0 || p == q {
            return *p;
        }
        if lambda == 1.0 {
            return *q;
        }
        // Always parametrise from the endpoint with the smaller weight so
        // that W(x, y, λ) and W(y, x, 1 − λ) run the same arithmetic.
        if lambda > 0.5 {
            Self::geodesic_point(q, p, 1.0 - lambda)
        } else {
            Self::geodesic_point(p, q, lambda)
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> HalfPlanePoint {
        HalfPlanePoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-2.0f64..2.0).exp())
    }

    fn parse_point(&self, s: &str) -> Result<HalfPlanePoint> {
        let (x, y) = s
            .split_once([',', ';'])
            .ok_or_else(|| Error::Parse(format!("half-plane point must look like `x,y`, got `{s}`")))?;
        let p = HalfPlanePoint::new(parse_f64(x)?, parse_f64(y)?);
        self.validate(&p)?;
        Ok(p)
    }

    fn format_point(&self, p: &HalfPlanePoint, digits: usize) -> String {
        format!("{:.digits$};{:.digits$}", p.x, p.y)
    }
}
