//! Self-maps with contraction certificates.
//!
//! A contractive-like map `T` comes with a factor `δ ∈ [0, 1)` and a gauge
//! `φ` (continuous, strictly increasing, `φ(0) = 0`) such that
//!
//! ```text
//! d(Tx, Ty) ≤ δ d(x, y) + φ(d(x, Tx))    for all x, y.
//! ```
//!
//! Zamfirescu maps and Osilike-Udomene maps are special cases; both reduce
//! to the form above with a linear gauge. Certificates are only ever checked
//! on samples.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{check_delta, Error, Result};
use crate::wspace::{Euclidean, Space};

/// Grid size used for the strict monotonicity check of a gauge.
pub const PHI_GRID: usize = 1000;

/// The gauge `φ` of a contractive-like certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum Phi {
    /// `φ ≡ 0`: a plain Banach contraction. Not strictly increasing, but
    /// admitted because the convergence arguments only evaluate `φ` at 0.
    Zero,
    /// `φ(t) = L·t`, `L > 0`.
    Linear(f64),
    /// `φ(t) = c·t^q` with `c > 0`, `q ≥ 1`.
    Power { coeff: f64, exponent: f64 },
    /// Piecewise-linear interpolation through `(0, 0)` and the given knots,
    /// extended linearly past the last knot.
    Tabulated(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiCheck {
    pub strictly_increasing: bool,
    /// Set for `φ ≡ 0`, which is admitted with this warning.
    pub degenerate_zero: bool,
}

impl Phi {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Phi::Zero => 0.0,
            Phi::Linear(l) => l * t,
            Phi::Power { coeff, exponent } => coeff * t.powf(*exponent),
            Phi::Tabulated(knots) => {
                let mut prev = (0.0, 0.0);
                for &(tk, vk) in knots {
                    if t <= tk {
                        return prev.1 + (vk - prev.1) * (t - prev.0) / (tk - prev.0);
                    }
                    prev = (tk, vk);
                }
                // extend with the last slope
                let n = knots.len();
                let before = if n >= 2 { knots[n - 2] } else { (0.0, 0.0) };
                let slope = (prev.1 - before.1) / (prev.0 - before.0);
                prev.1 + slope * (t - prev.0)
            }
        }
    }

    /// Checks parameters, `φ(0) = 0` and strict monotonicity on a grid of
    /// [`PHI_GRID`] points over `[0, t_max]`.
    pub fn check(&self, t_max: f64) -> Result<PhiCheck> {
        match self {
            Phi::Zero => {
                return Ok(PhiCheck {
                    strictly_increasing: false,
                    degenerate_zero: true,
                })
            }
            Phi::Linear(l) if !(*l > 0.0 && l.is_finite()) => {
                return Err(Error::certificate(format!("linear gauge needs L > 0, got {l}")))
            }
            Phi::Power { coeff, exponent } if !(*coeff > 0.0 && *exponent >= 1.0) => {
                return Err(Error::certificate(format!(
                    "power gauge needs c > 0 and q >= 1, got c={coeff}, q={exponent}"
                )))
            }
            Phi::Tabulated(knots) => {
                if knots.is_empty() {
                    return Err(Error::certificate("tabulated gauge needs at least one knot"));
                }
                let mut prev = (0.0, 0.0);
                for &k in knots {
                    if !(k.0 > prev.0 && k.1 > prev.1) {
                        return Err(Error::certificate(
                            "tabulated gauge knots must be strictly increasing in both coordinates",
                        ));
                    }
                    prev = k;
                }
            }
            _ => {}
        }
        if self.eval(0.0) != 0.0 {
            return Err(Error::certificate("gauge must vanish at 0"));
        }
        let strictly_increasing = (1..=PHI_GRID).all(|i| {
            let a = t_max * (i - 1) as f64 / PHI_GRID as f64;
            let b = t_max * i as f64 / PHI_GRID as f64;
            self.eval(b) > self.eval(a)
        });
        if !strictly_increasing {
            return Err(Error::certificate("gauge is not strictly increasing on the check grid"));
        }
        Ok(PhiCheck {
            strictly_increasing,
            degenerate_zero: false,
        })
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phi::Zero => write!(f, "0"),
            Phi::Linear(l) => write!(f, "{l}*t"),
            Phi::Power { coeff, exponent } => write!(f, "{coeff}*t^{exponent}"),
            Phi::Tabulated(k) => write!(f, "tabulated({} knots)", k.len()),
        }
    }
}

/// An affine map `x ↦ Ax + b` on `ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub matrix: DMatrix<f64>,
    pub offset: DVector<f64>,
}

impl AffineMap {
    pub fn new(matrix: DMatrix<f64>, offset: DVector<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() != offset.len() {
            return Err(Error::parameter("affine map needs a square matrix matching the offset length"));
        }
        Ok(AffineMap { matrix, offset })
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x + &self.offset
    }

    /// Spectral norm of the linear part, the best global Lipschitz constant.
    pub fn operator_norm(&self) -> f64 {
        self.matrix.clone().svd(false, false).singular_values.max()
    }

    /// Unique fixed point `(I − A)⁻¹ b`, if `I − A` is invertible.
    pub fn fixed_point(&self) -> Option<DVector<f64>> {
        let n = self.dim();
        (DMatrix::identity(n, n) - &self.matrix).lu().solve(&self.offset)
    }

    pub fn translated(&self, shift: &DVector<f64>) -> AffineMap {
        AffineMap {
            matrix: self.matrix.clone(),
            offset: &self.offset + shift,
        }
    }
}

pub type MapFn<P> = Arc<dyn Fn(&P) -> P + Send + Sync>;

/// A self-map `T` with a contractive-like certificate `(δ, φ)`.
pub struct ContractiveLike<S: Space> {
    name: String,
    map: MapFn<S::Point>,
    delta: f64,
    phi: Phi,
    fixed_point: Option<S::Point>,
    affine: Option<AffineMap>,
    lipschitz: Option<f64>,
}

impl<S: Space> Clone for ContractiveLike<S> {
    fn clone(&self) -> Self {
        ContractiveLike {
            name: self.name.clone(),
            map: Arc::clone(&self.map),
            delta: self.delta,
            phi: self.phi.clone(),
            fixed_point: self.fixed_point.clone(),
            affine: self.affine.clone(),
            lipschitz: self.lipschitz,
        }
    }
}

impl<S: Space> fmt::Debug for ContractiveLike<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContractiveLike")
            .field("name", &self.name)
            .field("delta", &self.delta)
            .field("phi", &self.phi)
            .field("fixed_point", &self.fixed_point)
            .finish_non_exhaustive()
    }
}

impl<S: Space> ContractiveLike<S> {
    pub fn new(
        name: impl Into<String>,
        delta: f64,
        phi: Phi,
        map: impl Fn(&S::Point) -> S::Point + Send + Sync + 'static,
    ) -> Result<Self> {
        check_delta(delta)?;
        phi.check(1.0)?;
        Ok(ContractiveLike {
            name: name.into(),
            map: Arc::new(map),
            delta,
            phi,
            fixed_point: None,
            affine: None,
            lipschitz: None,
        })
    }

    pub fn with_fixed_point(mut self, p: S::Point) -> Self {
        self.fixed_point = Some(p);
        self
    }

    /// Global Lipschitz constant of the map, when it differs from `δ`.
    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: &S::Point) -> S::Point {
        (self.map)(x)
    }

    pub fn map_fn(&self) -> MapFn<S::Point> {
        Arc::clone(&self.map)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn phi(&self) -> &Phi {
        &self.phi
    }

    pub fn fixed_point(&self) -> Option<&S::Point> {
        self.fixed_point.as_ref()
    }

    pub fn affine(&self) -> Option<&AffineMap> {
        self.affine.as_ref()
    }

    /// Lipschitz constant of `T` itself; defaults to `δ` when not given.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz.unwrap_or(self.delta)
    }

    /// Same map and certificate with a different `δ`.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        let mut t = self.clone();
        t.delta = delta;
        Ok(t)
    }

    pub fn with_phi(&self, phi: Phi) -> Result<Self> {
        phi.check(1.0)?;
        let mut t = self.clone();
        t.phi = phi;
        Ok(t)
    }
}

impl<S: Space<Point = DVector<f64>>> ContractiveLike<S> {
    /// `x ↦ Ax + b` with `δ = ‖A‖₂`, `φ ≡ 0` and the closed-form fixed point.
    pub fn affine_map(name: impl Into<String>, affine: AffineMap) -> Result<Self> {
        let delta = affine.operator_norm();
        if delta >= 1.0 {
            return Err(Error::certificate(format!(
                "affine map needs operator norm < 1, got {delta}"
            )));
        }
        let p = affine
            .fixed_point()
            .ok_or_else(|| Error::certificate("I - A is singular"))?;
        let a = affine.clone();
        let mut t = Self::new(name, delta, Phi::Zero, move |x| a.apply(x))?;
        t.fixed_point = Some(p);
        t.affine = Some(affine);
        Ok(t)
    }
}

/// `Tx = x/2` on `ℝⁿ` (fixed point 0, `δ = 1/2`).
pub fn halving(dim: usize) -> Result<ContractiveLike<Euclidean>> {
    let affine = AffineMap::new(DMatrix::identity(dim, dim) * 0.5, DVector::zeros(dim))?;
    ContractiveLike::affine_map("halving", affine)
}

/// `Tx = x/2 + c·x²` on `[0, 1]`, `0 ≤ c < 1/2`.
///
/// Maps `[0, 1]` into itself, satisfies `|Tx| ≤ (1/2 + c)|x|` and has
/// Lipschitz constant `1/2 + 2c` there, which exceeds 1 for `c > 1/4`; such
/// maps are contractive-like without being contractions.
pub fn quadratic(c: f64) -> Result<ContractiveLike<Euclidean>> {
    if !(0.0..0.5).contains(&c) {
        return Err(Error::parameter(format!("quadratic coefficient must lie in [0, 1/2), got {c}")));
    }
    let delta = 0.5 + c;
    // |Tx − Ty| = |x − y|(1/2 + c(x + y)) exceeds δ|x − y| by at most
    // c|x − y|(x + y − 1) ≤ c·x ≤ c/(1/2 − c)·d(x, Tx).
    let phi = if c == 0.0 { Phi::Zero } else { Phi::Linear(c / (0.5 - c)) };
    let t = ContractiveLike::new("quadratic", delta, phi, move |x: &DVector<f64>| {
        x.map(|v| 0.5 * v + c * v * v)
    })?;
    Ok(t.with_fixed_point(DVector::zeros(1)).with_lipschitz(0.5 + 2.0 * c))
}

/// The constant map `Tx = c` (`δ = 0`).
pub fn constant_map<S: Space>(value: S::Point) -> Result<ContractiveLike<S>> {
    let v = value.clone();
    Ok(ContractiveLike::new("constant", 0.0, Phi::Zero, move |_| v.clone())?.with_fixed_point(value))
}

/// `Tz = W(center, z, factor)`: geodesic contraction towards `center`.
///
/// By axioms (ii) and (iv), `d(Tz, Tw) ≤ factor·d(z, w)` and
/// `d(Tz, center) = factor·d(z, center)`. On the tripod with the hub as centre
/// this is the radial map `r ↦ factor·r`; on the half-plane with centre
/// `(0, 1)` it acts on the imaginary axis as `y ↦ y^factor`.
pub fn geodesic_contraction<S>(space: S, name: impl Into<String>, center: S::Point, factor: f64) -> Result<ContractiveLike<S>>
where
    S: Space + Clone + 'static,
{
    check_delta(factor)?;
    space.validate(&center)?;
    let c = center.clone();
    let t = ContractiveLike::new(name, factor, Phi::Zero, move |z| {
        space.convex_combination(&c, z, factor)
    })?;
    Ok(t.with_fixed_point(center))
}

/// Constants of a Zamfirescu map: `0 < a < 1`, `0 < b, c < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZamfirescuCertificate {
    a: f64,
    b: f64,
    c: f64,
}

impl ZamfirescuCertificate {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::certificate(format!("Zamfirescu constant a must lie in (0, 1), got {a}")));
        }
        for (name, v) in [("b", b), ("c", c)] {
            if !(v > 0.0 && v < 0.5) {
                return Err(Error::certificate(format!(
                    "Zamfirescu constant {name} must lie in (0, 1/2), got {v}"
                )));
            }
        }
        Ok(ZamfirescuCertificate { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn delta(&self) -> f64 {
        zamfirescu_delta(self)
    }

    /// The quasi-contractive gauge `φ(t) = 2δ·t`.
    pub fn phi(&self) -> Phi {
        Phi::Linear(2.0 * self.delta())
    }
}

/// `δ = max{a, b/(1 − b), c/(1 − c)}`.
pub fn zamfirescu_delta(cert: &ZamfirescuCertificate) -> f64 {
    cert.a
        .max(cert.b / (1.0 - cert.b))
        .max(cert.c / (1.0 - cert.c))
}

/// Constants of the Osilike-Udomene condition
/// `d(Tx, Ty) ≤ δ d(x, y) + L d(x, Tx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OsilikeUdomeneCertificate {
    pub delta: f64,
    pub l: f64,
}

impl OsilikeUdomeneCertificate {
    pub fn new(delta: f64, l: f64) -> Result<Self> {
        check_delta(delta)?;
        if !(l >= 0.0 && l.is_finite()) {
            return Err(Error::certificate(format!("L must be finite and >= 0, got {l}")));
        }
        Ok(OsilikeUdomeneCertificate { delta, l })
    }

    /// `φ(t) = L·t`, or `φ ≡ 0` when `L = 0`.
    pub fn phi(&self) -> Phi {
        if self.l == 0.0 {
            Phi::Zero
        } else {
            Phi::Linear(self.l)
        }
    }
}

/// Which Zamfirescu condition a sampled pair satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZamfirescuCase {
    Z1,
    Z2,
    Z3,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZamfirescuReport {
    pub pairs: usize,
    /// Pairs satisfying none of the three conditions.
    pub failures: usize,
    pub cases: Vec<Option<ZamfirescuCase>>,
}

impl ZamfirescuReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks that each pair satisfies at least one of
/// `d(Tx,Ty) ≤ a d(x,y)`, `≤ b(d(x,Tx) + d(y,Ty))`, `≤ c(d(x,Ty) + d(y,Tx))`.
pub fn check_zamfirescu<S: Space>(
    space: &S,
    map: &dyn Fn(&S::Point) -> S::Point,
    cert: &ZamfirescuCertificate,
    pairs: &[(S::Point, S::Point)],
    tol: f64,
) -> ZamfirescuReport {
    let d = |a: &S::Point, b: &S::Point| space.distance(a, b);
    let cases: Vec<_> = pairs
        .iter()
        .map(|(x, y)| {
            let (tx, ty) = (map(x), map(y));
            let lhs = d(&tx, &ty);
            if lhs <= cert.a * d(x, y) + tol {
                Some(ZamfirescuCase::Z1)
            } else if lhs <= cert.b * (d(x, &tx) + d(y, &ty)) + tol {
                Some(ZamfirescuCase::Z2)
            } else if lhs <= cert.c * (d(x, &ty) + d(y, &tx)) + tol {
                Some(ZamfirescuCase::Z3)
            } else {
                None
            }
        })
        .collect();
    ZamfirescuReport {
        pairs: pairs.len(),
        failures: cases.iter().filter(|c| c.is_none()).count(),
        cases,
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport<P> {
    pub samples: usize,
    /// Largest positive part of `d(Tx,Ty) − δ d(x,y) − φ(d(x,Tx))`.
    pub max_violation: f64,
    pub argmax: Option<(P, P)>,
    pub tolerance: f64,
    /// `φ ≡ 0` was used.
    pub degenerate_phi: bool,
}

impl<P> VerificationReport<P> {
    pub fn passed(&self) -> bool {
        self.max_violation <= self.tolerance
    }

    /// Combines reports from disjoint sample partitions.
    pub fn merge(self, other: Self) -> Self {
        let (mut keep, drop) = if other.max_violation > self.max_violation {
            (other, self)
        } else {
            (self, other)
        };
        keep.samples += drop.samples;
        keep.degenerate_phi |= drop.degenerate_phi;
        keep
    }
}

/// Samples pairs `(x, y)` and measures the worst violation of the
/// contractive-like inequality.
pub fn verify_contractive_like<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    mut sampler: impl FnMut() -> S::Point,
    n_samples: usize,
    tol: f64,
) -> Result<VerificationReport<S::Point>> {
    if n_samples == 0 {
        return Err(Error::parameter("n_samples must be at least 1"));
    }
    let mut report = VerificationReport {
        samples: n_samples,
        max_violation: 0.0,
        argmax: None,
        tolerance: tol,
        degenerate_phi: t.phi == Phi::Zero,
    };
    for _ in 0..n_samples {
        let x = sampler();
        let y = sampler();
        space.validate(&x)?;
        space.validate(&y)?;
        let tx = t.apply(&x);
        let ty = t.apply(&y);
        let slack = space.distance(&tx, &ty)
            - t.delta * space.distance(&x, &y)
            - t.phi.eval(space.distance(&x, &tx));
        if slack > report.max_violation {
            report.max_violation = slack;
            report.argmax = Some((x, y));
        }
    }
    Ok(report)
}

/// An approximate operator `S` of `T`: `d(Tx, Sx) ≤ ε` for all `x`.
pub struct ApproximateOperator<S: Space> {
    name: String,
    map: MapFn<S::Point>,
    epsilon: f64,
    affine: Option<AffineMap>,
}

impl<S: Space> Clone for ApproximateOperator<S> {
    fn clone(&self) -> Self {
        ApproximateOperator {
            name: self.name.clone(),
            map: Arc::clone(&self.map),
            epsilon: self.epsilon,
            affine: self.affine.clone(),
        }
    }
}

impl<S: Space> fmt::Debug for ApproximateOperator<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ApproximateOperator")
            .field("name", &self.name)
            .field("epsilon", &self.epsilon)
            .finish_non_exhaustive()
    }
}

impl<S: Space> ApproximateOperator<S> {
    pub fn new(
        name: impl Into<String>,
        epsilon: f64,
        map: impl Fn(&S::Point) -> S::Point + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::certificate(format!("epsilon must be finite and >= 0, got {epsilon}")));
        }
        Ok(ApproximateOperator {
            name: name.into(),
            map: Arc::new(map),
            epsilon,
            affine: None,
        })
    }

    /// `S = T` with the given certified `ε`.
    pub fn identical(t: &ContractiveLike<S>, epsilon: f64) -> Result<Self> {
        let f = t.map_fn();
        let mut s = Self::new(t.name(), epsilon, move |x| f(x))?;
        s.affine = t.affine.clone();
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: &S::Point) -> S::Point {
        (self.map)(x)
    }

    pub fn map_fn(&self) -> MapFn<S::Point> {
        Arc::clone(&self.map)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn affine(&self) -> Option<&AffineMap> {
        self.affine.as_ref()
    }
}

impl<S: Space<Point = DVector<f64>>> ApproximateOperator<S> {
    /// `Sx = Tx + shift`, certified with `ε = ‖shift‖₂`.
    pub fn translate(t: &ContractiveLike<S>, shift: DVector<f64>) -> Result<Self> {
        let f = t.map_fn();
        let epsilon = shift.norm();
        let c = shift.clone();
        let mut s = Self::new(format!("perturb:{}", t.name()), epsilon, move |x| f(x) + &c)?;
        s.affine = t.affine.as_ref().map(|a| a.translated(&shift));
        Ok(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproximationReport {
    pub samples: usize,
    pub max_distance: f64,
    pub epsilon: f64,
}

impl ApproximationReport {
    pub fn passed(&self) -> bool {
        self.max_distance <= self.epsilon
    }
}

/// Sampled `sup d(Tx, Sx)`, compared against the certified `ε`.
pub fn verify_approximate<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    s: &ApproximateOperator<S>,
    mut sampler: impl FnMut() -> S::Point,
    n_samples: usize,
) -> Result<ApproximationReport> {
    if n_samples == 0 {
        return Err(Error::parameter("n_samples must be at least 1"));
    }
    let mut max_distance = 0.0f64;
    for _ in 0..n_samples {
        let x = sampler();
        space.validate(&x)?;
        max_distance = max_distance.max(space.distance(&t.apply(&x), &s.apply(&x)));
    }
    Ok(ApproximationReport {
        samples: n_samples,
        max_distance,
        epsilon: s.epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wspace::{HalfPlane, HalfPlanePoint, Ray, Tripod, TripodPoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_sampler(seed: u64) -> impl FnMut() -> DVector<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        move || Euclidean::scalar(rng.gen_range(0.0..=1.0))
    }

    fn line() -> Euclidean {
        Euclidean::new(1).unwrap()
    }

    #[test]
    fn zamfirescu_delta_examples() {
        let c = ZamfirescuCertificate::new(0.5, 0.25, 0.25).unwrap();
        assert_eq!(zamfirescu_delta(&c), 0.5);
        let c = ZamfirescuCertificate::new(0.1, 0.4, 0.1).unwrap();
        assert!((zamfirescu_delta(&c) - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            ZamfirescuCertificate::new(1.0, 0.25, 0.25),
            Err(Error::Certificate(_))
        ));
        assert!(ZamfirescuCertificate::new(0.5, 0.5, 0.25).is_err());
        assert!(ZamfirescuCertificate::new(0.5, 0.25, 0.0).is_err());
    }

    #[test]
    fn halving_satisfies_its_certificate() {
        let t = halving(1).unwrap();
        let r = verify_contractive_like(&line(), &t, unit_sampler(1), 2000, 1e-12).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_violation, 0.0);
        assert!(r.degenerate_phi);
    }

    #[test]
    fn halving_with_understated_delta_fails() {
        let t = halving(1).unwrap().with_delta(0.4).unwrap();
        // brute force over a grid: max |x/2 − y/2| − 0.4|x − y| = 0.1 at |x − y| = 1
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let brute = grid
            .iter()
            .flat_map(|x| grid.iter().map(move |y| 0.5 * (x - y).abs() - 0.4 * (x - y).abs()))
            .fold(0.0, f64::max);
        assert!((brute - 0.1).abs() < 1e-12);

        let mut pts = grid.iter().cycle().step_by(37).copied();
        let mut corners = [0.0, 1.0].into_iter();
        let sampler = || Euclidean::scalar(corners.next().unwrap_or_else(|| pts.next().unwrap()));
        let r = verify_contractive_like(&line(), &t, sampler, 3000, 1e-12).unwrap();
        assert!(!r.passed());
        assert!(r.max_violation <= brute + 1e-12);
        assert!(r.max_violation > 0.09);
        let (x, y) = r.argmax.unwrap();
        assert!((x[0] - y[0]).abs() > 0.9);
    }

    #[test]
    fn identity_is_not_a_contraction() {
        let t = ContractiveLike::<Euclidean>::new("identity", 0.9, Phi::Zero, |x| x.clone()).unwrap();
        let r = verify_contractive_like(&line(), &t, unit_sampler(2), 500, 1e-12).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn quadratic_is_contractive_like_but_not_a_contraction() {
        let t = quadratic(0.3).unwrap();
        let r = verify_contractive_like(&line(), &t, unit_sampler(3), 20_000, 1e-12).unwrap();
        assert!(r.passed(), "violation {}", r.max_violation);
        // φ ≡ 0 is not enough: the map expands near x = 1
        let plain = t.with_phi(Phi::Zero).unwrap();
        let r = verify_contractive_like(&line(), &plain, unit_sampler(3), 20_000, 1e-12).unwrap();
        assert!(!r.passed());
        assert!(t.lipschitz() > 1.0);
    }

    #[test]
    fn monotone_in_delta() {
        let t = quadratic(0.3).unwrap();
        for delta in [0.8, 0.85, 0.95] {
            let t = t.with_delta(delta).unwrap();
            assert!(verify_contractive_like(&line(), &t, unit_sampler(4), 5000, 1e-12)
                .unwrap()
                .passed());
        }
    }

    #[test]
    fn geodesic_contractions_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = geodesic_contraction(Tripod, "tripod-radial", TripodPoint::HUB, 0.5).unwrap();
        let mut s = || Tripod.sample(&mut rng);
        let r = verify_contractive_like(&Tripod, &t, &mut s, 2000, 1e-12).unwrap();
        assert!(r.passed());
        assert_eq!(t.apply(&TripodPoint::new(Ray::C, 1.0)), TripodPoint::new(Ray::C, 0.5));

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let center = HalfPlanePoint::new(0.0, 1.0);
        let t = geodesic_contraction(HalfPlane, "halfplane-contract", center, 0.5).unwrap();
        let r = verify_contractive_like(&HalfPlane, &t, || HalfPlane.sample(&mut rng), 2000, 1e-9).unwrap();
        assert!(r.passed(), "{}", r.max_violation);
        let moved = t.apply(&HalfPlanePoint::new(0.0, 4.0));
        assert!((moved.y - 2.0).abs() < 1e-12 && moved.x.abs() < 1e-12);
    }

    #[test]
    fn zamfirescu_hierarchy_on_samples() {
        // a Kannan-type map on [0, 1]: discontinuous, satisfies (z2) with b = 0.25
        let kannan = |x: &DVector<f64>| {
            Euclidean::scalar(if x[0] < 0.5 { x[0] / 8.0 } else { x[0] / 8.0 - 0.05 })
        };
        let cert = ZamfirescuCertificate::new(0.2, 0.3, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pairs: Vec<_> = (0..5000)
            .map(|_| {
                (
                    Euclidean::scalar(rng.gen_range(0.0..=1.0)),
                    Euclidean::scalar(rng.gen_range(0.0..=1.0)),
                )
            })
            .collect();
        let zr = check_zamfirescu(&line(), &kannan, &cert, &pairs, 1e-12);
        assert!(zr.passed());
        assert!(zr.cases.iter().any(|c| *c != Some(ZamfirescuCase::Z1)));

        let t = ContractiveLike::<Euclidean>::new("kannan", cert.delta(), cert.phi(), kannan).unwrap();
        let mut it = pairs.iter().flat_map(|(x, y)| [x.clone(), y.clone()]);
        let r = verify_contractive_like(&line(), &t, || it.next().unwrap(), pairs.len(), 1e-12).unwrap();
        assert!(r.passed(), "{}", r.max_violation);
    }

    #[test]
    fn osilike_udomene_gauge() {
        assert_eq!(OsilikeUdomeneCertificate::new(0.5, 0.0).unwrap().phi(), Phi::Zero);
        assert_eq!(OsilikeUdomeneCertificate::new(0.5, 2.0).unwrap().phi(), Phi::Linear(2.0));
        assert!(OsilikeUdomeneCertificate::new(1.0, 2.0).is_err());
        assert!(OsilikeUdomeneCertificate::new(0.5, -1.0).is_err());
    }

    #[test]
    fn gauge_checks() {
        assert!(Phi::Zero.check(1.0).unwrap().degenerate_zero);
        assert!(Phi::Linear(2.0).check(1.0).unwrap().strictly_increasing);
        assert!(Phi::Linear(0.0).check(1.0).is_err());
        assert!(Phi::Power { coeff: 1.0, exponent: 2.0 }.check(1.0).is_ok());
        assert!(Phi::Power { coeff: 1.0, exponent: 0.5 }.check(1.0).is_err());
        let tab = Phi::Tabulated(vec![(0.5, 1.0), (1.0, 1.5)]);
        assert!(tab.check(2.0).is_ok());
        assert_eq!(tab.eval(0.25), 0.5);
        assert_eq!(tab.eval(2.0), 2.5);
        assert!(Phi::Tabulated(vec![(0.5, 1.0), (1.0, 1.0)]).check(1.0).is_err());
    }

    #[test]
    fn approximate_operator_examples() {
        let t = halving(1).unwrap();
        let s = ApproximateOperator::translate(&t, Euclidean::scalar(0.01)).unwrap();
        assert_eq!(s.epsilon(), 0.01);
        let r = verify_approximate(&line(), &t, &s, unit_sampler(9), 1000).unwrap();
        assert!((r.max_distance - 0.01).abs() < 1e-15);

        let loose = ApproximateOperator::<Euclidean>::new("offset", 0.01, |x| x.map(|v| v / 2.0 + 0.02)).unwrap();
        assert!(!verify_approximate(&line(), &t, &loose, unit_sampler(9), 100).unwrap().passed());

        let same = ApproximateOperator::identical(&t, 0.5).unwrap();
        let r = verify_approximate(&line(), &t, &same, unit_sampler(9), 100).unwrap();
        assert_eq!(r.max_distance, 0.0);
        assert!(r.passed());
    }

    #[test]
    fn affine_fixed_point_and_norm() {
        let a = AffineMap::new(
            DMatrix::from_row_slice(2, 2, &[0.5, 0.2, 0.1, 0.4]),
            DVector::from_vec(vec![1.0, -1.0]),
        )
        .unwrap();
        let t = ContractiveLike::<Euclidean>::affine_map("affine", a.clone()).unwrap();
        let p = t.fixed_point().unwrap();
        assert!((a.apply(p) - p).norm() < 1e-14);
        assert!(t.delta() < 1.0 && t.delta() > 0.5);
        let expanding = AffineMap::new(DMatrix::identity(2, 2) * 1.1, DVector::zeros(2)).unwrap();
        assert!(ContractiveLike::<Euclidean>::affine_map("x", expanding).is_err());
    }
}
