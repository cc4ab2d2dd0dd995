use serde::Serialize;

use crate::bounds::{berinde_compare, BoundSequences, EnvelopeForm, RateVerdict, Verdict};
use crate::error::{Error, Result};
use crate::mappings::ContractiveLike;
use crate::schemes::{run, InnerSolverConfig, IterationTrace, Schedule, Scheme};
use crate::wspace::Space;

#[derive(Debug, Clone)]
pub struct SchemeRun<P> {
    pub scheme: Scheme,
    pub trace: IterationTrace<P>,
    /// `d(xₙ, p)` for `n = 1, …, n_max`.
    pub distances: Vec<f64>,
    /// First `n` with `xₙ = p` exactly.
    pub converged_exactly_at: Option<usize>,
    /// `max (d(xₙ, p) − envelope)`; nonpositive when the envelope dominates.
    pub envelope_excess: f64,
}

/// Outcome of one Berinde comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub candidate: Scheme,
    pub reference: Scheme,
    /// `None` when the reference sequence vanishes at its first entry.
    pub verdict: Option<RateVerdict>,
    /// Set when the reference hit zero and the verdict used the prefix before it.
    pub truncated_at: Option<usize>,
}

impl Comparison {
    pub fn faster(&self) -> bool {
        self.verdict.as_ref().is_some_and(|v| v.verdict == Verdict::Faster)
    }
}

#[derive(Debug, Clone)]
pub struct RaceReport<P> {
    pub runs: Vec<SchemeRun<P>>,
    pub envelopes: BoundSequences,
    /// Candidate (first scheme) against each other scheme, on actual distances.
    pub actual: Vec<Comparison>,
    /// The same pairs on the envelope sequences.
    pub envelope: Vec<Comparison>,
}

impl<P> RaceReport<P> {
    /// Every comparison, actual and envelope, says `faster`.
    pub fn all_faster(&self) -> bool {
        !self.actual.is_empty() && self.actual.iter().chain(&self.envelope).all(Comparison::faster)
    }
}

fn compare(candidate: Scheme, reference: Scheme, a: &[f64], b: &[f64], horizon: usize, threshold: f64) -> Result<Comparison> {
    let horizon = horizon.min(a.len()).min(b.len());
    let zero = b[..horizon].iter().position(|v| *v == 0.0);
    let usable = zero.unwrap_or(horizon);
    let verdict = if usable == 0 {
        None
    } else {
        Some(berinde_compare(a, b, usable, threshold)?)
    };
    Ok(Comparison {
        candidate,
        reference,
        verdict,
        truncated_at: zero.map(|i| i + 1),
    })
}

/// Runs each scheme from `x0`, compares the first against the rest.
#[allow(clippy::too_many_arguments)]
pub fn rate_race<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    schemes: &[Scheme],
    schedule: &Schedule,
    x0: &S::Point,
    n_max: usize,
    cfg: &InnerSolverConfig,
    horizon: usize,
    threshold: f64,
) -> Result<RaceReport<S::Point>> {
    if schemes.len() < 2 {
        return Err(Error::parameter("a race needs at least two schemes"));
    }
    let p = t
        .fixed_point()
        .ok_or_else(|| Error::Unsupported(format!("map `{}` has no known fixed point", t.name())))?;
    let d0 = space.distance(x0, p);
    let envelopes = BoundSequences::compute(schedule, t.delta(), d0, n_max, EnvelopeForm::CumulativeProduct)?;

    let mut runs = Vec::with_capacity(schemes.len());
    for &scheme in schemes {
        let trace = run(space, t, scheme, schedule, x0, n_max, cfg, Some(p)).map_err(|f| f.error)?;
        let distances = trace.distances().expect("fixed point supplied");
        let converged_exactly_at = distances.iter().position(|d| *d == 0.0).map(|i| i + 1);
        let envelope_excess = distances
            .iter()
            .zip(envelopes.for_scheme(scheme))
            .map(|(d, e)| d - e)
            .fold(f64::NEG_INFINITY, f64::max);
        runs.push(SchemeRun {
            scheme,
            trace,
            distances,
            converged_exactly_at,
            envelope_excess,
        });
    }

    let lead = &runs[0];
    let mut actual = Vec::new();
    let mut envelope = Vec::new();
    for other in &runs[1..] {
        actual.push(compare(lead.scheme, other.scheme, &lead.distances, &other.distances, horizon, threshold)?);
        envelope.push(compare(
            lead.scheme,
            other.scheme,
            envelopes.for_scheme(lead.scheme),
            envelopes.for_scheme(other.scheme),
            horizon,
            threshold,
        )?);
    }
    Ok(RaceReport {
        runs,
        envelopes,
        actual,
        envelope,
    })
}
