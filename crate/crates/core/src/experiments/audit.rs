use serde::Serialize;

use crate::bounds::{contraction_factor, step_factor};
use crate::error::{Error, Result};
use crate::mappings::ContractiveLike;
use crate::schemes::{run, InnerSolverConfig, Schedule, Scheme};
use crate::wspace::Space;

/// How closely an implicit S trace follows its error bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeAudit {
    /// `min (Δₙ·d(xₙ₋₁, p) − d(xₙ, p))` over the run.
    pub step_slack: f64,
    /// `min (∏ₖ₌₂ⁿ (1 − (1 − αₖ)(1 − δ))·d₀ − d(xₙ, p))` over the run.
    pub product_slack: f64,
    pub final_distance: f64,
    pub max_residual: f64,
}

/// Runs the implicit S scheme and measures the slack in the one-step bound
/// `d(xₙ, p) ≤ Δₙ·d(xₙ₋₁, p)` and in the product bound.
pub fn envelope_audit<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    schedule: &Schedule,
    x0: &S::Point,
    n_max: usize,
    cfg: &InnerSolverConfig,
) -> Result<EnvelopeAudit> {
    let p = t
        .fixed_point()
        .ok_or_else(|| Error::Unsupported(format!("map `{}` has no known fixed point", t.name())))?;
    let trace = run(space, t, Scheme::ImplicitS, schedule, x0, n_max, cfg, Some(p)).map_err(|f| f.error)?;
    let d = trace.distances().expect("fixed point supplied");
    let delta = t.delta();
    let mut audit = EnvelopeAudit {
        step_slack: f64::INFINITY,
        product_slack: f64::INFINITY,
        final_distance: *d.last().expect("at least one record"),
        max_residual: trace.max_residual(),
    };
    let mut product = d[0];
    for n in 2..=d.len() {
        let (alpha, beta) = (schedule.alpha(n)?, schedule.beta(n)?);
        let one_step = step_factor(Scheme::ImplicitS, alpha, beta, delta) * d[n - 2];
        product *= contraction_factor(alpha, delta);
        audit.step_slack = audit.step_slack.min(one_step - d[n - 1]);
        audit.product_slack = audit.product_slack.min(product - d[n - 1]);
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{halving, quadratic};
    use crate::wspace::Euclidean;

    #[test]
    fn halving_meets_the_one_step_bound_with_equality() {
        let line = Euclidean::new(1).unwrap();
        let a = envelope_audit(&line, &halving(1).unwrap(), &Schedule::paper_example(), &Euclidean::scalar(1.0), 100, &InnerSolverConfig::default()).unwrap();
        assert!(a.step_slack.abs() < 1e-15);
        assert!(a.product_slack >= 0.0);
        assert!(a.final_distance < 1e-20);
    }

    #[test]
    fn quadratic_stays_under_the_bounds() {
        let line = Euclidean::new(1).unwrap();
        let t = quadratic(0.3).unwrap();
        let a = envelope_audit(&line, &t, &Schedule::sqrt_decay(), &Euclidean::scalar(1.0), 500, &InnerSolverConfig::default()).unwrap();
        assert!(a.step_slack >= -1e-10 && a.product_slack >= -1e-10);
        assert!(a.final_distance < 1e-8);
    }
}
