//! Resolution of space, mapping and schedule names used on the command line.
//!
//! ```text
//! spaces     euclidean:<dim>  tripod  halfplane  broken-demo
//! mappings   halving  quadratic[:c]  affine:<matrix>[@<offset>]  affine-r2  affine-r3
//!            tripod-radial:<factor>  halfplane-contract:<factor>  constant:<point>
//! schedules  paper-example  sqrt  constant:<alpha>:<beta>
//! ```
//!
//! An affine matrix is written row by row, rows separated by `;` and entries
//! by `,`; a single number `s` stands for `s·I`. So `affine:0.9` on
//! `euclidean:2` is `x ↦ 0.9x` and `affine:0.5,0.2;-0.1,0.4@0.1,-0.2` is a
//! general plane map.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::experiments::corpus;
use crate::mappings::{constant_map, geodesic_contraction, halving, quadratic, AffineMap, ApproximateOperator, ContractiveLike};
use crate::schemes::Schedule;
use crate::wspace::{parse_f64, BrokenDemo, Euclidean, HalfPlane, HalfPlanePoint, Ray, Space, Tripod, TripodPoint};

pub const SPACE_NAMES: &str = "euclidean:<dim>, tripod, halfplane, broken-demo";

/// A space reachable by name, with its mappings and defaults.
pub trait Registered: Space + Clone + 'static {
    fn mapping(&self, name: &str) -> Result<ContractiveLike<Self>>;

    fn default_mapping(&self) -> &'static str;

    fn default_x0(&self) -> Self::Point;

    /// `S = T` shifted by `spec`; only linear spaces support this.
    fn perturb(&self, t: &ContractiveLike<Self>, spec: &str) -> Result<ApproximateOperator<Self>> {
        let _ = (t, spec);
        Err(Error::Unsupported(format!("perturbations are not available on {}", self.name())))
    }
}

/// A resolved space.
#[derive(Debug, Clone)]
pub enum SpaceChoice {
    Euclidean(Euclidean),
    Tripod(Tripod),
    HalfPlane(HalfPlane),
    Broken(BrokenDemo),
}

/// Runs `$body` with `$s` bound to the concrete space inside a [`SpaceChoice`].
#[macro_export]
macro_rules! with_space {
    ($choice:expr, $s:ident => $body:expr) => {
        match $choice {
            $crate::registry::SpaceChoice::Euclidean($s) => $body,
            $crate::registry::SpaceChoice::Tripod($s) => $body,
            $crate::registry::SpaceChoice::HalfPlane($s) => $body,
            $crate::registry::SpaceChoice::Broken($s) => $body,
        }
    };
}

pub fn resolve_space(name: &str) -> Result<SpaceChoice> {
    let unknown = || Error::UnknownName {
        kind: "space",
        name: name.into(),
    };
    match name.trim() {
        "tripod" => Ok(SpaceChoice::Tripod(Tripod)),
        "halfplane" => Ok(SpaceChoice::HalfPlane(HalfPlane)),
        "broken-demo" => Ok(SpaceChoice::Broken(BrokenDemo::default())),
        other => {
            let dim = other.strip_prefix("euclidean:").ok_or_else(unknown)?;
            let dim: usize = dim.parse().map_err(|_| unknown())?;
            Ok(SpaceChoice::Euclidean(Euclidean::new(dim)?))
        }
    }
}

fn unknown_mapping(name: &str) -> Error {
    Error::UnknownName {
        kind: "mapping",
        name: name.into(),
    }
}

fn factor_of(name: &str, prefix: &str) -> Option<Result<f64>> {
    name.strip_prefix(prefix).map(parse_f64)
}

fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_f64).collect()
}

/// Parses the matrix and offset of `affine:<matrix>[@<offset>]` for dimension `dim`.
pub fn parse_affine(spec: &str, dim: usize) -> Result<AffineMap> {
    let (m, b) = match spec.split_once('@') {
        Some((m, b)) => (m, Some(b)),
        None => (spec, None),
    };
    let rows: Vec<Vec<f64>> = m.split(';').map(parse_vector).collect::<Result<_>>()?;
    let matrix = if rows.len() == 1 && rows[0].len() == 1 {
        DMatrix::identity(dim, dim) * rows[0][0]
    } else {
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::parameter(format!("affine matrix must be {dim}x{dim}")));
        }
        DMatrix::from_fn(dim, dim, |i, j| rows[i][j])
    };
    let offset = match b {
        None => DVector::zeros(dim),
        Some(b) => {
            let v = parse_vector(b)?;
            match v.len() {
                1 => DVector::from_element(dim, v[0]),
                k if k == dim => DVector::from_vec(v),
                _ => return Err(Error::parameter(format!("affine offset must have {dim} entries"))),
            }
        }
    };
    AffineMap::new(matrix, offset)
}

impl Registered for Euclidean {
    fn mapping(&self, name: &str) -> Result<ContractiveLike<Self>> {
        let dim = self.dim();
        let need_dim = |d: usize| {
            if dim == d {
                Ok(())
            } else {
                Err(Error::parameter(format!("mapping `{name}` needs euclidean:{d}")))
            }
        };
        match name {
            "halving" => halving(dim),
            "quadratic" => {
                need_dim(1)?;
                quadratic(corpus::QUADRATIC_C)
            }
            "affine-r2" => {
                need_dim(2)?;
                corpus::affine_r2()
            }
            "affine-r3" => {
                need_dim(3)?;
                corpus::affine_r3()
            }
            _ => {
                if let Some(c) = factor_of(name, "quadratic:") {
                    need_dim(1)?;
                    return quadratic(c?);
                }
                if let Some(spec) = name.strip_prefix("affine:") {
                    return ContractiveLike::affine_map(name, parse_affine(spec, dim)?);
                }
                if let Some(v) = name.strip_prefix("constant:") {
                    return constant_map(self.parse_point(v)?);
                }
                Err(unknown_mapping(name))
            }
        }
    }

    fn default_mapping(&self) -> &'static str {
        "halving"
    }

    fn default_x0(&self) -> DVector<f64> {
        DVector::from_element(self.dim(), 1.0)
    }

    fn perturb(&self, t: &ContractiveLike<Self>, spec: &str) -> Result<ApproximateOperator<Self>> {
        ApproximateOperator::translate(t, self.parse_point(spec)?)
    }
}

impl Registered for Tripod {
    fn mapping(&self, name: &str) -> Result<ContractiveLike<Self>> {
        if let Some(f) = factor_of(name, "tripod-radial:") {
            return geodesic_contraction(*self, name, TripodPoint::HUB, f?);
        }
        if let Some(v) = name.strip_prefix("constant:") {
            return constant_map(self.parse_point(v)?);
        }
        Err(unknown_mapping(name))
    }

    fn default_mapping(&self) -> &'static str {
        "tripod-radial:0.5"
    }

    fn default_x0(&self) -> TripodPoint {
        TripodPoint::new(Ray::A, 1.0)
    }
}

impl Registered for HalfPlane {
    fn mapping(&self, name: &str) -> Result<ContractiveLike<Self>> {
        if let Some(f) = factor_of(name, "halfplane-contract:") {
            return geodesic_contraction(*self, name, HalfPlanePoint::new(0.0, 1.0), f?);
        }
        if let Some(v) = name.strip_prefix("constant:") {
            return constant_map(self.parse_point(v)?);
        }
        Err(unknown_mapping(name))
    }

    fn default_mapping(&self) -> &'static str {
        "halfplane-contract:0.5"
    }

    fn default_x0(&self) -> HalfPlanePoint {
        HalfPlanePoint::new(1.0, 2.0)
    }
}

impl Registered for BrokenDemo {
    fn mapping(&self, name: &str) -> Result<ContractiveLike<Self>> {
        if let Some(v) = name.strip_prefix("constant:") {
            return constant_map(self.parse_point(v)?);
        }
        Err(unknown_mapping(name))
    }

    fn default_mapping(&self) -> &'static str {
        "constant:0"
    }

    fn default_x0(&self) -> DVector<f64> {
        DVector::from_element(1, 1.0)
    }
}

/// A schedule preset, or inline expressions in `n` when either is given.
///
/// A missing `beta` expression copies `alpha` and vice versa.
pub fn resolve_schedule(preset: Option<&str>, alpha: Option<&str>, beta: Option<&str>) -> Result<Schedule> {
    match (alpha, beta) {
        (Some(a), Some(b)) => return Schedule::from_expressions(a, b),
        (Some(e), None) | (None, Some(e)) => return Schedule::from_expressions(e, e),
        (None, None) => {}
    }
    let name = preset.unwrap_or("paper-example");
    match name {
        "paper-example" => Ok(Schedule::paper_example()),
        "sqrt" => Ok(Schedule::sqrt_decay()),
        _ => {
            let parts: Vec<&str> = name.split(':').collect();
            match parts.as_slice() {
                ["constant", a, b] => Schedule::constant(parse_f64(a)?, parse_f64(b)?),
                _ => Err(Error::UnknownName {
                    kind: "schedule",
                    name: name.into(),
                }),
            }
        }
    }
}
