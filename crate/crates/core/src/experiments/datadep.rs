use serde::Serialize;

use crate::bounds::{check_lemma1, datadep_bound, Lemma1Report};
use crate::error::{Error, Result};
use crate::mappings::{ApproximateOperator, ContractiveLike};
use crate::schemes::{perturbed_step, step, InnerSolverConfig, PerturbedVariant, Schedule, Scheme};
use crate::wspace::Space;

/// After convergence the run continues while each move is at most this
/// fraction of the previous one.
const GEOMETRIC_RATIO: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataDepConfig {
    pub n_max: usize,
    /// The run has converged once `d(uₙ, uₙ₋₁) < cauchy_tolerance` for the
    /// last `cauchy_window` steps.
    pub cauchy_tolerance: f64,
    pub cauchy_window: usize,
    pub lemma_tolerance: f64,
    /// Slack allowed when comparing the observed distance with the bound.
    pub bound_tolerance: f64,
    pub variant: PerturbedVariant,
}

impl Default for DataDepConfig {
    fn default() -> Self {
        DataDepConfig {
            n_max: 2_000_000,
            cauchy_tolerance: 1e-12,
            cauchy_window: 10,
            lemma_tolerance: 1e-10,
            bound_tolerance: 1e-12,
            variant: PerturbedVariant::Displayed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DataDepReport<P> {
    pub epsilon: f64,
    pub delta: f64,
    pub p: P,
    /// `u` at the last step, the estimate of `S`'s fixed point.
    pub q: P,
    /// `S`'s fixed point from a linear solve, for affine `S`.
    pub q_closed_form: Option<P>,
    pub observed: f64,
    pub observed_closed_form: Option<f64>,
    pub bound: f64,
    /// `bound − observed`.
    pub margin: f64,
    pub iterations: usize,
    pub converged: bool,
    pub variant: PerturbedVariant,
    pub lemma1: Lemma1Report,
    pub bound_tolerance: f64,
}

impl<P> DataDepReport<P> {
    /// The run converged and every observed distance respects the bound.
    pub fn holds(&self) -> bool {
        self.converged
            && self.observed <= self.bound + self.bound_tolerance
            && self.observed_closed_form.is_none_or(|d| d <= self.bound + self.bound_tolerance)
    }
}

/// Runs the implicit S scheme for `T` and its perturbed counterpart for
/// `(S, T)` side by side, then compares `d(p, q)` with `2ε/(1 − δ)²`.
///
/// Also records, for the Lemma 1 check, `aₙ₊₁ = d(xₙ, uₙ)`,
/// `μₙ = (1 − αₙ)(1 − δ)` and
///
/// ```text
/// ηₙ = [αₙ/(1 − αₙ)·φ(d(xₙ₋₁, Txₙ₋₁)) + φ(d(yₙ, Tyₙ)) + δ(1 − βₙ)·φ(d(xₙ, Txₙ)) + 2ε] / (1 − δ)²
/// ```
#[allow(clippy::too_many_arguments)]
pub fn run_datadep<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    s: &ApproximateOperator<S>,
    schedule: &Schedule,
    x0: &S::Point,
    u0: &S::Point,
    cfg: &InnerSolverConfig,
    dd: &DataDepConfig,
) -> Result<DataDepReport<S::Point>> {
    if dd.n_max < 2 {
        return Err(Error::parameter("n_max must be at least 2"));
    }
    let p = t
        .fixed_point()
        .ok_or_else(|| Error::Unsupported(format!("map `{}` has no known fixed point", t.name())))?
        .clone();
    let (delta, epsilon, phi) = (t.delta(), s.epsilon(), t.phi());
    let bound = datadep_bound(epsilon, delta)?;
    let gap = (1.0 - delta) * (1.0 - delta);
    let phi_at = |z: &S::Point| phi.eval(space.distance(z, &t.apply(z)));

    let mut x = x0.clone();
    let mut u = u0.clone();
    let mut a = vec![space.distance(&x, &u)];
    let mut mu = Vec::new();
    let mut eta = Vec::new();
    let mut quiet = 0;
    let mut converged = false;
    let mut last_move = f64::INFINITY;
    let mut n = 1;
    while n < dd.n_max {
        n += 1;
        let (alpha, beta) = (schedule.alpha(n)?, schedule.beta(n)?);
        if alpha >= 1.0 {
            return Err(Error::parameter(format!("alpha_{n} = 1; the perturbed run needs alpha_n < 1")));
        }
        let xs = step(space, t, Scheme::ImplicitS, &x, alpha, beta, cfg)?;
        let us = perturbed_step(space, t, s, dd.variant, &u, alpha, beta, cfg)?;
        let y = xs.y.as_ref().expect("implicit S has a companion point");
        eta.push(
            (alpha / (1.0 - alpha) * phi_at(&x) + phi_at(y) + delta * (1.0 - beta) * phi_at(&xs.x) + 2.0 * epsilon) / gap,
        );
        mu.push((1.0 - alpha) * (1.0 - delta));
        a.push(space.distance(&xs.x, &us.x));
        let moved = space.distance(&us.x, &u);
        x = xs.x;
        u = us.x;
        if converged {
            // geometric tails are followed until they stop shrinking
            if moved == 0.0 || moved > GEOMETRIC_RATIO * last_move {
                break;
            }
        } else if moved < dd.cauchy_tolerance {
            quiet += 1;
            converged = quiet >= dd.cauchy_window;
        } else {
            quiet = 0;
        }
        last_move = moved;
    }

    let lemma1 = check_lemma1(&a, &mu, &eta, a.len(), dd.lemma_tolerance)?;
    let q_closed_form = s
        .affine()
        .and_then(|m| m.fixed_point())
        .and_then(|v| space.from_coordinates(v));
    let observed = space.distance(&p, &u);
    let observed_closed_form = q_closed_form.as_ref().map(|q| space.distance(&p, q));
    Ok(DataDepReport {
        epsilon,
        delta,
        margin: bound - observed,
        p,
        q: u,
        q_closed_form,
        observed,
        observed_closed_form,
        bound,
        iterations: n,
        converged,
        variant: dd.variant,
        lemma1,
        bound_tolerance: dd.bound_tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{halving, AffineMap};
    use crate::schemes::InnerSolverConfig;
    use crate::wspace::Euclidean;
    use nalgebra::{dmatrix, dvector, DVector};

    fn line() -> Euclidean {
        Euclidean::new(1).unwrap()
    }

    #[test]
    fn halving_plus_constant() {
        let t = halving(1).unwrap();
        let s = ApproximateOperator::translate(&t, Euclidean::scalar(0.01)).unwrap();
        let one = Euclidean::scalar(1.0);
        let r = run_datadep(
            &line(),
            &t,
            &s,
            &Schedule::paper_example(),
            &one,
            &one,
            &InnerSolverConfig::exact_affine(),
            &DataDepConfig::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert!(r.holds());
        assert!((r.bound - 0.08).abs() < 1e-15);
        assert!((r.observed_closed_form.unwrap() - 0.02).abs() < 1e-15);
        assert!((r.observed - 0.02).abs() < 1e-6);
        assert!(r.lemma1.hypothesis_holds(), "{:?}", r.lemma1.first_violation());
        assert!(r.lemma1.conclusion_holds());
    }

    #[test]
    fn proof_variant_converges_quickly() {
        let t = halving(1).unwrap();
        let s = ApproximateOperator::translate(&t, Euclidean::scalar(0.01)).unwrap();
        let one = Euclidean::scalar(1.0);
        let dd = DataDepConfig {
            variant: PerturbedVariant::Proof,
            ..DataDepConfig::default()
        };
        let r = run_datadep(&line(), &t, &s, &Schedule::paper_example(), &one, &one, &InnerSolverConfig::default(), &dd).unwrap();
        assert!(r.converged && r.iterations < 100);
        assert!((r.observed - 0.02).abs() < 1e-12);
        assert!(r.holds());
    }

    #[test]
    fn identical_operator() {
        let t = halving(1).unwrap();
        let s = ApproximateOperator::identical(&t, 0.0).unwrap();
        let one = Euclidean::scalar(1.0);
        let r = run_datadep(&line(), &t, &s, &Schedule::paper_example(), &one, &one, &InnerSolverConfig::default(), &DataDepConfig::default()).unwrap();
        assert!(r.observed < 1e-100, "{} after {} steps", r.observed, r.iterations);
        assert_eq!(r.bound, 0.0);
        assert!(r.holds());
    }

    #[test]
    fn affine_plane() {
        let space = Euclidean::new(2).unwrap();
        let m = AffineMap::new(dmatrix![0.5, 0.2; -0.1, 0.4], dvector![0.1, -0.2]).unwrap();
        let t = ContractiveLike::affine_map("affine", m).unwrap();
        let shift = dvector![0.003, 0.004];
        let s = ApproximateOperator::translate(&t, shift.clone()).unwrap();
        let x0 = DVector::from_element(2, 1.0);
        let r = run_datadep(&space, &t, &s, &Schedule::paper_example(), &x0, &x0, &InnerSolverConfig::exact_affine(), &DataDepConfig::default()).unwrap();
        let a = t.affine().unwrap();
        let expected = (nalgebra::DMatrix::identity(2, 2) - &a.matrix).lu().solve(&shift).unwrap().norm();
        assert!((r.observed_closed_form.unwrap() - expected).abs() < 1e-15);
        assert!((r.observed - expected).abs() < 1e-6);
        assert!(r.holds());
        assert!(r.lemma1.hypothesis_holds());
    }

    #[test]
    fn inconclusive_when_budget_is_short() {
        let t = halving(1).unwrap();
        let s = ApproximateOperator::translate(&t, Euclidean::scalar(0.01)).unwrap();
        let one = Euclidean::scalar(1.0);
        let dd = DataDepConfig {
            n_max: 100,
            ..DataDepConfig::default()
        };
        let r = run_datadep(&line(), &t, &s, &Schedule::paper_example(), &one, &one, &InnerSolverConfig::default(), &dd).unwrap();
        assert!(!r.converged);
        assert!(!r.holds());
    }
}
