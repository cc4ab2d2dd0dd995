//! Implicit S-, Ishikawa- and Mann-type iterations.
//!
//! With weight `αₙ` on the first argument, the three schemes read
//!
//! ```text
//! implicit S:         xₙ = αₙ·Txₙ₋₁ ⊕ (1 − αₙ)·Tyₙ,   yₙ = βₙ·xₙ ⊕ (1 − βₙ)·Txₙ
//! implicit Ishikawa:  xₙ = αₙ·xₙ₋₁  ⊕ (1 − αₙ)·Tyₙ,   yₙ = βₙ·xₙ ⊕ (1 − βₙ)·Txₙ
//! implicit Mann:      xₙ = αₙ·xₙ₋₁  ⊕ (1 − αₙ)·Txₙ
//! ```
//!
//! The space's convexity mapping puts weight `1 − λ` on its first argument,
//! so `αₙ·a ⊕ (1 − αₙ)·b` is evaluated as `W(a, b, 1 − αₙ)`.
//!
//! Each `xₙ` appears on both sides of its equation and is found with the
//! inner solver in [`InnerSolverConfig`].

mod inner;
mod schedule;

pub use inner::{InnerMode, InnerSolverConfig, InnerStats};
pub use schedule::{Divergence, Schedule};

pub(crate) use inner::ImplicitEquation;

use std::fmt;
use std::io;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mappings::{ApproximateOperator, ContractiveLike};
use crate::wspace::{check_unit, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Scheme {
    ImplicitS,
    ImplicitIshikawa,
    ImplicitMann,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::ImplicitS, Scheme::ImplicitIshikawa, Scheme::ImplicitMann];

    pub fn id(self) -> &'static str {
        match self {
            Scheme::ImplicitS => "implicit-s",
            Scheme::ImplicitIshikawa => "implicit-ishikawa",
            Scheme::ImplicitMann => "implicit-mann",
        }
    }

    /// Short column label (`ISI`, `III`, `IMI`).
    pub fn label(self) -> &'static str {
        match self {
            Scheme::ImplicitS => "ISI",
            Scheme::ImplicitIshikawa => "III",
            Scheme::ImplicitMann => "IMI",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.id() == s || sc.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName {
                kind: "scheme",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput<P> {
    pub x: P,
    /// The companion point `yₙ`; absent for the Mann scheme.
    pub y: Option<P>,
    pub stats: InnerStats,
}

/// One step of `scheme` from `x_prev` with parameters `alpha`, `beta`.
pub fn step<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    scheme: Scheme,
    x_prev: &S::Point,
    alpha: f64,
    beta: f64,
    cfg: &InnerSolverConfig,
) -> Result<StepOutput<S::Point>> {
    space.validate(x_prev)?;
    check_unit(alpha)?;
    check_unit(beta)?;
    cfg.validate()?;

    let map = |x: &S::Point| t.apply(x);
    let anchor = match scheme {
        Scheme::ImplicitS => t.apply(x_prev),
        Scheme::ImplicitIshikawa | Scheme::ImplicitMann => x_prev.clone(),
    };
    let has_inner = scheme != Scheme::ImplicitMann;
    let eq = ImplicitEquation::<S> {
        anchor,
        outer: &map,
        inner: if has_inner { Some(&map) } else { None },
        alpha,
        beta,
    };

    let (x, stats) = match cfg.mode {
        InnerMode::Picard => eq.solve_picard(space, x_prev.clone(), cfg)?,
        InnerMode::ExactAffine => {
            let affine = t
                .affine()
                .ok_or_else(|| Error::Unsupported(format!("map `{}` is not affine", t.name())))?;
            eq.solve_affine(space, affine, has_inner.then_some(affine), cfg)?
        }
    };
    space.validate(&x)?;
    let y = has_inner.then(|| eq.companion(space, &x));
    Ok(StepOutput { x, y, stats })
}

/// `xₙ = W(Txₙ₋₁, Tyₙ, 1 − αₙ)`, `yₙ = W(xₙ, Txₙ, 1 − βₙ)`.
pub fn implicit_s_step<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    x_prev: &S::Point,
    alpha: f64,
    beta: f64,
    cfg: &InnerSolverConfig,
) -> Result<StepOutput<S::Point>> {
    step(space, t, Scheme::ImplicitS, x_prev, alpha, beta, cfg)
}

/// `xₙ = W(xₙ₋₁, Tyₙ, 1 − αₙ)`, `yₙ = W(xₙ, Txₙ, 1 − βₙ)`.
pub fn implicit_ishikawa_step<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    x_prev: &S::Point,
    alpha: f64,
    beta: f64,
    cfg: &InnerSolverConfig,
) -> Result<StepOutput<S::Point>> {
    step(space, t, Scheme::ImplicitIshikawa, x_prev, alpha, beta, cfg)
}

/// `xₙ = W(xₙ₋₁, Txₙ, 1 − αₙ)`.
pub fn implicit_mann_step<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    x_prev: &S::Point,
    alpha: f64,
    cfg: &InnerSolverConfig,
) -> Result<StepOutput<S::Point>> {
    step(space, t, Scheme::ImplicitMann, x_prev, alpha, 0.0, cfg)
}

/// The map applied to `vₙ` in [`perturbed_step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum PerturbedVariant {
    /// `uₙ = αₙ·Suₙ₋₁ ⊕ (1 − αₙ)·Tvₙ`
    #[default]
    Displayed,
    /// `uₙ = αₙ·Suₙ₋₁ ⊕ (1 − αₙ)·Svₙ`, the implicit S scheme for `S` alone.
    Proof,
}

/// One step of the implicit S scheme driven by an approximate operator `S`
/// of `T`, with `vₙ = βₙ·uₙ ⊕ (1 − βₙ)·Suₙ`.
#[allow(clippy::too_many_arguments)]
pub fn perturbed_step<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    s: &ApproximateOperator<S>,
    variant: PerturbedVariant,
    u_prev: &S::Point,
    alpha: f64,
    beta: f64,
    cfg: &InnerSolverConfig,
) -> Result<StepOutput<S::Point>> {
    space.validate(u_prev)?;
    check_unit(alpha)?;
    check_unit(beta)?;
    cfg.validate()?;

    let tmap = |x: &S::Point| t.apply(x);
    let smap = |x: &S::Point| s.apply(x);
    let outer: &dyn Fn(&S::Point) -> S::Point = match variant {
        PerturbedVariant::Displayed => &tmap,
        PerturbedVariant::Proof => &smap,
    };
    let eq = ImplicitEquation::<S> {
        anchor: s.apply(u_prev),
        outer,
        inner: Some(&smap),
        alpha,
        beta,
    };
    let (u, stats) = match cfg.mode {
        InnerMode::Picard => eq.solve_picard(space, u_prev.clone(), cfg)?,
        InnerMode::ExactAffine => {
            let not_affine = |name: &str| Error::Unsupported(format!("map `{name}` is not affine"));
            let sa = s.affine().ok_or_else(|| not_affine(s.name()))?;
            let fa = match variant {
                PerturbedVariant::Displayed => t.affine().ok_or_else(|| not_affine(t.name()))?,
                PerturbedVariant::Proof => sa,
            };
            eq.solve_affine(space, fa, Some(sa), cfg)?
        }
    };
    space.validate(&u)?;
    let v = eq.companion(space, &u);
    Ok(StepOutput { x: u, y: Some(v), stats })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord<P> {
    pub n: usize,
    pub x: P,
    pub y: Option<P>,
    pub inner_iterations: usize,
    pub inner_residual: f64,
    pub dist_to_p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<P> {
    pub scheme: Scheme,
    pub records: Vec<StepRecord<P>>,
}

impl<P> IterationTrace<P> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&StepRecord<P>> {
        self.records.last()
    }

    pub fn get(&self, n: usize) -> Option<&StepRecord<P>> {
        let first = self.records.first()?.n;
        self.records.get(n.checked_sub(first)?)
    }

    /// `d(xₙ, p)` for every record, if the fixed point was supplied.
    pub fn distances(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.dist_to_p).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.records.iter().map(|r| r.inner_residual).fold(0.0, f64::max)
    }
}

/// A run that stopped early, with everything computed before the failure.
#[derive(Debug, Clone)]
pub struct RunFailure<P> {
    pub trace: IterationTrace<P>,
    pub error: Error,
}

impl<P> fmt::Display for RunFailure<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} failed after {} records: {}",
            self.trace.scheme,
            self.trace.len(),
            self.error
        )
    }
}

impl<P: fmt::Debug> std::error::Error for RunFailure<P> {}

/// Runs `scheme` for `n_max` records: the initial point at `n = 1`, then
/// steps `n = 2, …, n_max`.
#[allow(clippy::too_many_arguments)]
pub fn run<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    scheme: Scheme,
    schedule: &Schedule,
    x0: &S::Point,
    n_max: usize,
    cfg: &InnerSolverConfig,
    p: Option<&S::Point>,
) -> std::result::Result<IterationTrace<S::Point>, RunFailure<S::Point>> {
    let mut trace = IterationTrace {
        scheme,
        records: Vec::with_capacity(n_max),
    };
    let fail = |trace, error| Err(RunFailure { trace, error });
    if n_max == 0 {
        return fail(trace, Error::parameter("n_max must be at least 1"));
    }
    if let Err(e) = space.validate(x0).and_then(|_| cfg.validate()) {
        return fail(trace, e);
    }
    let dist = |x: &S::Point| p.map(|p| space.distance(x, p));

    trace.records.push(StepRecord {
        n: 1,
        x: x0.clone(),
        y: None,
        inner_iterations: 0,
        inner_residual: 0.0,
        dist_to_p: dist(x0),
    });
    for n in 2..=n_max {
        let outcome = schedule.alpha(n).and_then(|a| {
            let b = schedule.beta(n)?;
            step(space, t, scheme, &trace.records[n - 2].x, a, b, cfg)
        });
        match outcome {
            Ok(out) => trace.records.push(StepRecord {
                n,
                dist_to_p: dist(&out.x),
                x: out.x,
                y: out.y,
                inner_iterations: out.stats.iterations,
                inner_residual: out.stats.residual,
            }),
            Err(e) => return fail(trace, e),
        }
    }
    Ok(trace)
}

/// Writes `n,x,inner_iters,residual,dist_to_p`.
pub fn write_trace_csv<S: Space, W: io::Write>(
    space: &S,
    trace: &IterationTrace<S::Point>,
    digits: usize,
    out: W,
) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["n", "x", "inner_iters", "residual", "dist_to_p"])?;
    for r in &trace.records {
        w.write_record([
            r.n.to_string(),
            space.format_point(&r.x, digits),
            r.inner_iterations.to_string(),
            format!("{:e}", r.inner_residual),
            r.dist_to_p
                .map(|d| crate::format::fixed(d, digits))
                .unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{halving, quadratic};
    use crate::wspace::Euclidean;

    fn line() -> Euclidean {
        Euclidean::new(1).unwrap()
    }

    fn one() -> nalgebra::DVector<f64> {
        Euclidean::scalar(1.0)
    }

    #[test]
    fn first_step_matches_table_row_two() {
        let t = halving(1).unwrap();
        let cfg = InnerSolverConfig::default();
        let s = implicit_s_step(&line(), &t, &one(), 0.5, 0.5, &cfg).unwrap();
        assert!((s.x[0] - 4.0 / 13.0).abs() < 1e-15);
        let i = implicit_ishikawa_step(&line(), &t, &one(), 0.5, 0.5, &cfg).unwrap();
        assert!((i.x[0] - 8.0 / 13.0).abs() < 1e-15);
        let m = implicit_mann_step(&line(), &t, &one(), 0.5, &cfg).unwrap();
        assert!((m.x[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!(m.y.is_none());
        for out in [s, i, m] {
            assert!(out.stats.residual <= cfg.tolerance);
        }
    }

    #[test]
    fn fixed_point_is_stationary() {
        let t = halving(1).unwrap();
        let p = Euclidean::scalar(0.0);
        for scheme in Scheme::ALL {
            let out = step(&line(), &t, scheme, &p, 0.3, 0.7, &InnerSolverConfig::default()).unwrap();
            assert_eq!(out.x, p);
            if let Some(y) = out.y {
                assert_eq!(y, p);
            }
        }
    }

    #[test]
    fn alpha_one_keeps_mann_iterate() {
        let t = halving(1).unwrap();
        let x = Euclidean::scalar(0.37);
        let out = implicit_mann_step(&line(), &t, &x, 1.0, &InnerSolverConfig::default()).unwrap();
        assert_eq!(out.x, x);
    }

    #[test]
    fn exact_affine_agrees_with_picard() {
        let t = halving(1).unwrap();
        let x = Euclidean::scalar(0.8);
        for scheme in Scheme::ALL {
            let a = step(&line(), &t, scheme, &x, 0.6, 0.3, &InnerSolverConfig::default()).unwrap();
            let b = step(&line(), &t, scheme, &x, 0.6, 0.3, &InnerSolverConfig::exact_affine()).unwrap();
            assert!((a.x[0] - b.x[0]).abs() < 1e-15, "{scheme}");
        }
    }

    #[test]
    fn exact_affine_rejects_nonlinear_maps() {
        let t = quadratic(0.3).unwrap();
        let err = step(&line(), &t, Scheme::ImplicitS, &one(), 0.5, 0.5, &InnerSolverConfig::exact_affine())
            .unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn nonconvergence_is_reported() {
        let t = halving(1).unwrap();
        let cfg = InnerSolverConfig {
            max_iterations: 2,
            ..Default::default()
        };
        let err = implicit_s_step(&line(), &t, &one(), 0.5, 0.5, &cfg).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 2, .. }));
    }

    #[test]
    fn invalid_inputs() {
        let t = halving(1).unwrap();
        let cfg = InnerSolverConfig::default();
        assert!(implicit_s_step(&line(), &t, &one(), 1.5, 0.5, &cfg).is_err());
        let bad = nalgebra::DVector::from_vec(vec![1.0, 2.0]);
        assert!(matches!(
            implicit_s_step(&line(), &t, &bad, 0.5, 0.5, &cfg),
            Err(Error::InvalidPoint(_))
        ));
        let zero_tol = InnerSolverConfig {
            tolerance: 0.0,
            ..cfg
        };
        assert!(implicit_s_step(&line(), &t, &one(), 0.5, 0.5, &zero_tol).is_err());
    }

    #[test]
    fn run_failure_keeps_partial_trace() {
        let t = halving(1).unwrap();
        let sched = Schedule::from_expressions("if(n < 4, 0.5, 2.0)", "0.5").unwrap();
        let err = run(&line(), &t, Scheme::ImplicitS, &sched, &one(), 10, &InnerSolverConfig::default(), None)
            .unwrap_err();
        assert_eq!(err.trace.len(), 3);
        assert!(matches!(err.error, Error::InvalidParameter(_)));
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.id().parse::<Scheme>().unwrap(), s);
            assert_eq!(s.label().parse::<Scheme>().unwrap(), s);
        }
        assert!("explicit-mann".parse::<Scheme>().is_err());
    }

    #[test]
    fn csv_layout() {
        let t = halving(1).unwrap();
        let p = Euclidean::scalar(0.0);
        let trace = run(
            &line(),
            &t,
            Scheme::ImplicitMann,
            &Schedule::paper_example(),
            &one(),
            2,
            &InnerSolverConfig::default(),
            Some(&p),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&line(), &trace, 15, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "n,x,inner_iters,residual,dist_to_p");
        assert!(lines[1].starts_with("1,1.000000000000000,0,"));
        assert!(lines[2].starts_with("2,0.666666666666667,"));
        assert!(lines[2].ends_with(",0.666666666666667"));
        assert!(!text.contains('\r'));
    }
}
