//! Solver for the implicit equation of a single step.
//!
//! Every scheme defines its new iterate through an equation of the form
//!
//! ```text
//! x = W(anchor, F(v(x)), 1 − α),    v(x) = W(x, G(x), 1 − β)
//! ```
//!
//! (with `v(x) = x` for the one-step Mann scheme). The right-hand side `Φ` is
//! Lipschitz with constant `(1 − α)·Lip(F)·[β + (1 − β)Lip(G)]`, which is
//! below 1 whenever both maps are contractions, so Picard iteration on `Φ`
//! converges.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mappings::AffineMap;
use crate::wspace::Space;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InnerMode {
    Picard,
    /// Closed-form linear solve; requires affine maps on a linear space.
    ExactAffine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolverConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub mode: InnerMode,
    /// Keep iterating past `tolerance` while the residual still decreases.
    ///
    /// Needed near the fixed point, where iterates are far smaller than the
    /// absolute tolerance and stopping early would freeze the outer run.
    pub polish: bool,
}

impl Default for InnerSolverConfig {
    fn default() -> Self {
        InnerSolverConfig {
            tolerance: 1e-14,
            max_iterations: 10_000,
            mode: InnerMode::Picard,
            polish: true,
        }
    }
}

impl InnerSolverConfig {
    pub fn exact_affine() -> Self {
        InnerSolverConfig {
            mode: InnerMode::ExactAffine,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::parameter("inner tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::parameter("inner max_iterations must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct InnerStats {
    pub iterations: usize,
    /// `d(x, Φ(x))` for the returned `x`.
    pub residual: f64,
}

/// One implicit equation: anchor point, outer map `F`, optional inner map `G`.
pub(crate) struct ImplicitEquation<'a, S: Space> {
    pub anchor: S::Point,
    pub outer: &'a dyn Fn(&S::Point) -> S::Point,
    pub inner: Option<&'a dyn Fn(&S::Point) -> S::Point>,
    pub alpha: f64,
    pub beta: f64,
}

impl<S: Space> ImplicitEquation<'_, S> {
    /// `v(x) = W(x, G(x), 1 − β)`, or `x` itself without an inner map.
    pub fn companion(&self, space: &S, x: &S::Point) -> S::Point {
        match self.inner {
            Some(g) => space.convex_combination(x, &g(x), 1.0 - self.beta),
            None => x.clone(),
        }
    }

    /// `Φ(x)`.
    pub fn rhs(&self, space: &S, x: &S::Point) -> S::Point {
        let v = self.companion(space, x);
        space.convex_combination(&self.anchor, &(self.outer)(&v), 1.0 - self.alpha)
    }

    pub fn residual(&self, space: &S, x: &S::Point) -> f64 {
        space.distance(x, &self.rhs(space, x))
    }

    /// Picard iteration from `start`.
    ///
    /// The tolerance is relative to `1 + ‖x‖∞` on spaces with coordinates.
    pub fn solve_picard(&self, space: &S, start: S::Point, cfg: &InnerSolverConfig) -> Result<(S::Point, InnerStats)> {
        let mut x = start;
        let mut next = self.rhs(space, &x);
        let mut residual = space.distance(&x, &next);
        let mut iterations = 0;
        while residual > cfg.tolerance * magnitude(space, &x) {
            if iterations >= cfg.max_iterations {
                return Err(Error::NonConvergence { iterations, residual });
            }
            x = next;
            next = self.rhs(space, &x);
            residual = space.distance(&x, &next);
            iterations += 1;
        }
        if cfg.polish {
            while residual > 0.0 && iterations < cfg.max_iterations {
                let after = self.rhs(space, &next);
                let r = space.distance(&next, &after);
                if !(r < residual) {
                    break;
                }
                x = next;
                next = after;
                residual = r;
                iterations += 1;
            }
        }
        Ok((x, InnerStats { iterations, residual }))
    }

    /// Closed-form solve when `F` and `G` are affine on a linear space.
    ///
    /// With `G(x) = M₂x + c₂`, `v = Bx + (1 − β)c₂` where `B = βI + (1 − β)M₂`,
    /// and `x` solves `(I − (1 − α)M₁B) x = α·anchor + (1 − α)((1 − β)M₁c₂ + c₁)`.
    pub fn solve_affine(
        &self,
        space: &S,
        outer: &AffineMap,
        inner: Option<&AffineMap>,
        cfg: &InnerSolverConfig,
    ) -> Result<(S::Point, InnerStats)> {
        let unsupported = || Error::Unsupported("exact-affine mode needs a linear space".into());
        let anchor = space.coordinates(&self.anchor).ok_or_else(unsupported)?;
        let n = anchor.len();
        if outer.dim() != n || inner.is_some_and(|g| g.dim() != n) {
            return Err(Error::parameter("affine map dimension does not match the space"));
        }
        let (alpha, beta) = (self.alpha, self.beta);
        let identity = DMatrix::<f64>::identity(n, n);
        let (b, shift) = match inner {
            Some(g) => (
                &identity * beta + &g.matrix * (1.0 - beta),
                &g.offset * (1.0 - beta),
            ),
            None => (identity.clone(), DVector::zeros(n)),
        };
        let system = &identity - (&outer.matrix * &b) * (1.0 - alpha);
        let rhs = &anchor * alpha + (&outer.matrix * &shift + &outer.offset) * (1.0 - alpha);
        let solution = system
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Unsupported("singular implicit system".into()))?;
        let x = space.from_coordinates(solution).ok_or_else(unsupported)?;
        space.validate(&x)?;
        let residual = self.residual(space, &x);
        if residual > cfg.tolerance * magnitude(space, &x) {
            return Err(Error::NonConvergence {
                iterations: 1,
                residual,
            });
        }
        Ok((x, InnerStats { iterations: 1, residual }))
    }
}

/// `1 + ‖x‖∞` where coordinates exist, `1` elsewhere.
fn magnitude<S: Space>(space: &S, x: &S::Point) -> f64 {
    space.coordinates(x).map_or(1.0, |v| 1.0 + v.amax())
}
