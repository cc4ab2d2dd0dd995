use std::fmt;

use rand::Rng;

use super::{parse_f64, Space};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ray {
    A,
    B,
    C,
}

impl Ray {
    pub const ALL: [Ray; 3] = [Ray::A, Ray::B, Ray::C];
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Ray::A => "A",
            Ray::B => "B",
            Ray::C => "C",
        };
        f.write_str(s)
    }
}

/// A point on one of the three rays, at distance `radius` from the hub.
///
/// All points with radius 0 denote the hub regardless of their ray label.
#[derive(Debug, Clone, Copy)]
pub struct TripodPoint {
    pub ray: Ray,
    pub radius: f64,
}

impl TripodPoint {
    pub const HUB: TripodPoint = TripodPoint {
        ray: Ray::A,
        radius: 0.0,
    };

    pub fn new(ray: Ray, radius: f64) -> Self {
        TripodPoint { ray, radius }
    }

    pub fn is_hub(&self) -> bool {
        self.radius == 0.0
    }

    fn shares_ray(&self, other: &TripodPoint) -> bool {
        self.ray == other.ray || self.is_hub() || other.is_hub()
    }
}

impl PartialEq for TripodPoint {
    fn eq(&self, other: &Self) -> bool {
        self.radius == other.radius && (self.ray == other.ray || self.is_hub())
    }
}

/// Three half-lines glued at a common hub, with the path metric.
///
/// `d((A, r), (A, s)) = |r − s|` and `d((A, r), (B, s)) = r + s` for `A ≠ B`.
/// Geodesics between points on different rays run through the hub. The space
/// is an R-tree, hence CAT(0), and `W` picks the point at fraction `λ` of the
/// unique geodesic.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tripod;

impl Space for Tripod {
    type Point = TripodPoint;

    fn name(&self) -> String {
        "tripod".into()
    }

    fn validate(&self, p: &TripodPoint) -> Result<()> {
        if p.radius.is_finite() && p.radius >= 0.0 {
            Ok(())
        } else {
            Err(Error::invalid_point(format!(
                "tripod radius must be finite and nonnegative, got {}",
                p.radius
            )))
        }
    }

    fn distance(&self, x: &TripodPoint, y: &TripodPoint) -> f64 {
        if x.shares_ray(y) {
            (x.radius - y.radius).abs()
        } else {
            x.radius + y.radius
        }
    }

    fn convex_combination(&self, x: &TripodPoint, y: &TripodPoint, lambda: f64) -> TripodPoint {
        if x.shares_ray(y) {
            let ray = if x.is_hub() { y.ray } else { x.ray };
            return TripodPoint::new(ray, (1.0 - lambda) * x.radius + lambda * y.radius);
        }
        let travelled = lambda * (x.radius + y.radius);
        if travelled <= x.radius {
            TripodPoint::new(x.ray, x.radius - travelled)
        } else {
            TripodPoint::new(y.ray, travelled - x.radius)
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TripodPoint {
        let ray = Ray::ALL[rng.gen_range(0..3)];
        // put some mass on the hub itself
        let radius = if rng.gen_bool(0.1) {
            0.0
        } else {
            rng.gen_range(0.0..2.0)
        };
        TripodPoint::new(ray, radius)
    }

    fn parse_point(&self, s: &str) -> Result<TripodPoint> {
        let (ray, radius) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("tripod point must look like `A:1.0`, got `{s}`")))?;
        let ray = match ray.trim() {
            "A" | "a" => Ray::A,
            "B" | "b" => Ray::B,
            "C" | "c" => Ray::C,
            other => return Err(Error::Parse(format!("unknown tripod ray `{other}`"))),
        };
        let p = TripodPoint::new(ray, parse_f64(radius)?);
        self.validate(&p)?;
        Ok(p)
    }

    fn format_point(&self, p: &TripodPoint, digits: usize) -> String {
        format!("{}:{:.digits$}", p.ray, p.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wspace::interpolate;

    #[test]
    fn midpoint_across_hub_is_hub() {
        let t = Tripod;
        let x = TripodPoint::new(Ray::A, 1.0);
        let y = TripodPoint::new(Ray::B, 1.0);
        assert_eq!(t.distance(&x, &y), 2.0);
        let m = interpolate(&t, &x, &y, 0.5).unwrap();
        assert!(m.is_hub());
        assert_eq!(m, TripodPoint::HUB);
    }

    #[test]
    fn geodesic_segments_match_brute_force() {
        // brute force: walk the concatenation of the two radial segments
        let t = Tripod;
        let x = TripodPoint::new(Ray::A, 0.75);
        let y = TripodPoint::new(Ray::C, 1.25);
        for k in 0..=20 {
            let lambda = k as f64 / 20.0;
            let s = lambda * 2.0;
            let expected = if s <= 0.75 {
                TripodPoint::new(Ray::A, 0.75 - s)
            } else {
                TripodPoint::new(Ray::C, s - 0.75)
            };
            let got = t.convex_combination(&x, &y, lambda);
            assert!(t.distance(&got, &expected) < 1e-15, "lambda={lambda}");
            assert!((t.distance(&x, &got) - lambda * 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hub_belongs_to_every_ray() {
        let t = Tripod;
        let hub = TripodPoint::new(Ray::C, 0.0);
        let y = TripodPoint::new(Ray::B, 2.0);
        assert_eq!(t.distance(&hub, &y), 2.0);
        let m = t.convex_combination(&hub, &y, 0.25);
        assert_eq!(m, TripodPoint::new(Ray::B, 0.5));
    }

    #[test]
    fn parse_and_validate() {
        let t = Tripod;
        assert_eq!(t.parse_point("B:1.5").unwrap(), TripodPoint::new(Ray::B, 1.5));
        assert!(t.parse_point("D:1").is_err());
        assert!(t.parse_point("A:-1").is_err());
        assert!(t.parse_point("1.0").is_err());
    }
}
