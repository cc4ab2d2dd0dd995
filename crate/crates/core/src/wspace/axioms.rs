use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::Space;
use crate::error::{Error, Result};

pub const DEFAULT_AXIOM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// `d(x, x) = 0`
    Identity,
    Symmetry,
    Triangle,
    /// (i) convexity with respect to a third point
    I,
    /// (ii) the parametrisation is by arc length
    II,
    /// (iii) `W(x, y, λ) = W(y, x, 1 − λ)`
    III,
    /// (iv) joint convexity of the distance
    IV,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::Identity,
        Axiom::Symmetry,
        Axiom::Triangle,
        Axiom::I,
        Axiom::II,
        Axiom::III,
        Axiom::IV,
    ];

    fn index(self) -> usize {
        Axiom::ALL.iter().position(|a| *a == self).unwrap()
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Identity => "metric-identity",
            Axiom::Symmetry => "metric-symmetry",
            Axiom::Triangle => "metric-triangle",
            Axiom::I => "(i)",
            Axiom::II => "(ii)",
            Axiom::III => "(iii)",
            Axiom::IV => "(iv)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    /// Positive part of `lhs − rhs` for inequalities, `|lhs − rhs|` for
    /// equalities.
    pub max_violation: f64,
    /// Index of the sampled tuple attaining `max_violation`.
    pub worst_sample: Option<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub space: String,
    pub samples: usize,
    pub tolerance: f64,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, axiom: Axiom) -> &AxiomResult {
        &self.results[axiom.index()]
    }

    pub fn max_violation(&self) -> f64 {
        self.results
            .iter()
            .map(|r| r.max_violation)
            .fold(0.0, f64::max)
    }

    pub fn failed(&self) -> impl Iterator<Item = &AxiomResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "space={} samples={} tolerance={:e}",
            self.space, self.samples, self.tolerance
        )?;
        for r in &self.results {
            writeln!(
                f,
                "{:<16} max_violation={:e} {}",
                r.axiom.to_string(),
                r.max_violation,
                if r.passed { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

fn sample_lambda<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => 1.0,
        2 => 0.5,
        _ => rng.gen::<f64>(),
    }
}

/// Samples tuples `(x, y, z, w, u, λ, μ)` and records the worst violation of
/// each axiom.
///
/// Every sampled point is validated first; a sampler that leaves the space
/// yields [`Error::InvalidPoint`].
pub fn check_axioms<S, R, F>(
    space: &S,
    rng: &mut R,
    mut sampler: F,
    n_samples: usize,
    tol: f64,
) -> Result<AxiomReport>
where
    S: Space,
    R: Rng,
    F: FnMut(&mut R) -> S::Point,
{
    if n_samples == 0 {
        return Err(Error::parameter("n_samples must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::parameter("tolerance must be positive"));
    }

    let mut worst = [(0.0f64, None::<usize>); 7];
    let mut record = |axiom: Axiom, violation: f64, i: usize| {
        let slot = &mut worst[axiom.index()];
        // NaN counts as the worst possible outcome
        if violation.is_nan() || violation > slot.0 {
            slot.0 = if violation.is_nan() { f64::INFINITY } else { violation };
            slot.1 = Some(i);
        }
    };

    for i in 0..n_samples {
        let mut draw = |rng: &mut R| -> Result<S::Point> {
            let p = sampler(rng);
            space.validate(&p)?;
            Ok(p)
        };
        let x = draw(rng)?;
        let y = draw(rng)?;
        let z = draw(rng)?;
        let w = draw(rng)?;
        let u = draw(rng)?;
        let lambda = sample_lambda(rng);
        let mu = sample_lambda(rng);
        let d = |a: &S::Point, b: &S::Point| space.distance(a, b);
        let cc = |a: &S::Point, b: &S::Point, t: f64| space.convex_combination(a, b, t);

        record(Axiom::Identity, d(&x, &x).abs(), i);
        record(Axiom::Symmetry, (d(&x, &y) - d(&y, &x)).abs(), i);
        record(Axiom::Triangle, d(&x, &z) - d(&x, &y) - d(&y, &z), i);

        let wl = cc(&x, &y, lambda);
        record(
            Axiom::I,
            d(&u, &wl) - (1.0 - lambda) * d(&u, &x) - lambda * d(&u, &y),
            i,
        );

        let wm = cc(&x, &y, mu);
        record(
            Axiom::II,
            (d(&wl, &wm) - (lambda - mu).abs() * d(&x, &y)).abs(),
            i,
        );

        let swapped = cc(&y, &x, 1.0 - lambda);
        record(Axiom::III, d(&wl, &swapped), i);

        let left = cc(&x, &z, lambda);
        let right = cc(&y, &w, lambda);
        record(
            Axiom::IV,
            d(&left, &right) - (1.0 - lambda) * d(&x, &y) - lambda * d(&z, &w),
            i,
        );
    }

    let results = Axiom::ALL
        .iter()
        .zip(worst)
        .map(|(&axiom, (max_violation, worst_sample))| AxiomResult {
            axiom,
            max_violation,
            worst_sample,
            passed: max_violation <= tol,
        })
        .collect();

    Ok(AxiomReport {
        space: space.name(),
        samples: n_samples,
        tolerance: tol,
        results,
    })
}
