use nalgebra::DVector;
use rand::Rng;

use super::{parse_f64, Space};
use crate::error::{Error, Result};

/// `ℝⁿ` with the Euclidean norm and `W(x, y, λ) = (1 − λ)x + λy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Euclidean {
    dim: usize,
}

impl Euclidean {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::parameter("euclidean dimension must be at least 1"));
        }
        Ok(Euclidean { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, coords: &[f64]) -> Result<DVector<f64>> {
        let p = DVector::from_column_slice(coords);
        self.validate(&p)?;
        Ok(p)
    }

    /// Shorthand for one-dimensional points.
    pub fn scalar(x: f64) -> DVector<f64> {
        DVector::from_element(1, x)
    }
}

impl Space for Euclidean {
    type Point = DVector<f64>;

    fn name(&self) -> String {
        format!("euclidean:{}", self.dim)
    }

    fn validate(&self, p: &DVector<f64>) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::invalid_point(format!(
                "expected {} coordinates, got {}",
                self.dim,
                p.len()
            )));
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid_point("non-finite coordinate"));
        }
        Ok(())
    }

    fn distance(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x - y).norm()
    }

    fn convex_combination(&self, x: &DVector<f64>, y: &DVector<f64>, lambda: f64) -> DVector<f64> {
        // (1-λ)x + λy rather than x + λ(y-x): swapping the arguments with
        // λ' = 1-λ then evaluates the same products whenever 1-λ is exact.
        x.zip_map(y, |a, b| (1.0 - lambda) * a + lambda * b)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        DVector::from_fn(self.dim, |_, _| rng.gen_range(-2.0..2.0))
    }

    fn parse_point(&self, s: &str) -> Result<DVector<f64>> {
        let coords = s
            .split([',', ';'])
            .map(parse_f64)
            .collect::<Result<Vec<_>>>()?;
        let coords = if coords.len() == 1 && self.dim > 1 {
            vec![coords[0]; self.dim]
        } else {
            coords
        };
        self.point(&coords)
    }

    fn format_point(&self, p: &DVector<f64>, digits: usize) -> String {
        p.iter()
            .map(|c| format!("{c:.digits$}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn coordinates(&self, p: &DVector<f64>) -> Option<DVector<f64>> {
        Some(p.clone())
    }

    fn from_coordinates(&self, v: DVector<f64>) -> Option<DVector<f64>> {
        (v.len() == self.dim).then_some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wspace::interpolate;

    #[test]
    fn line_interpolation() {
        let e = Euclidean::new(1).unwrap();
        let x = Euclidean::scalar(0.0);
        let y = Euclidean::scalar(1.0);
        assert_eq!(interpolate(&e, &x, &y, 0.0).unwrap()[0], 0.0);
        assert_eq!(interpolate(&e, &x, &y, 0.25).unwrap()[0], 0.25);
        assert_eq!(interpolate(&e, &x, &y, 1.0).unwrap()[0], 1.0);
    }

    #[test]
    fn rejects_bad_points() {
        let e = Euclidean::new(2).unwrap();
        assert!(e.validate(&DVector::from_vec(vec![1.0])).is_err());
        assert!(e.validate(&DVector::from_vec(vec![1.0, f64::NAN])).is_err());
        assert!(Euclidean::new(0).is_err());
        let x = e.point(&[0.0, 0.0]).unwrap();
        assert!(interpolate(&e, &x, &x, 1.5).is_err());
    }

    #[test]
    fn parse_broadcasts_scalars() {
        let e = Euclidean::new(3).unwrap();
        assert_eq!(e.parse_point("2").unwrap(), e.point(&[2.0; 3]).unwrap());
        assert_eq!(
            e.parse_point("1,2,3").unwrap(),
            e.point(&[1.0, 2.0, 3.0]).unwrap()
        );
        assert!(e.parse_point("1,2").is_err());
    }
}
