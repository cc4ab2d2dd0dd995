//! Error envelopes and rate comparison.
//!
//! For a contractive-like `T` with factor `δ` and fixed point `p`, each scheme
//! obeys a one-step bound `d(xₙ, p) ≤ Δₙ·d(xₙ₋₁, p)` with
//!
//! ```text
//! implicit S:         Δₙ = αₙδ / (1 − (1 − αₙ)δ[βₙ + (1 − βₙ)δ])
//! implicit Ishikawa:  Δₙ = αₙ  / (1 − (1 − αₙ)δ[βₙ + (1 − βₙ)δ])
//! implicit Mann:      Δₙ = αₙ  / (1 − (1 − αₙ)δ)
//! ```
//!
//! Chaining the bound gives the envelope `∏ₖ₌₂ⁿ Δₖ·d₀`. The "literal" form
//! `(Δₙ)ⁿ·d₀` is kept for comparison; it is not a valid bound when `Δₖ`
//! varies with `k`.

use std::fmt;

use serde::Serialize;

use crate::error::{check_delta, Error, Result};
use crate::schemes::{Schedule, Scheme};

/// Default horizon and threshold for [`berinde_compare`].
pub const DEFAULT_HORIZON: usize = 200;
pub const DEFAULT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum EnvelopeForm {
    /// `∏ₖ₌₂ⁿ Δₖ·d₀`
    #[default]
    CumulativeProduct,
    /// `(Δₙ)ⁿ·d₀`
    Literal,
}

fn bracket(beta: f64, delta: f64) -> f64 {
    beta + (1.0 - beta) * delta
}

/// One-step factor `Δ` of `scheme`.
pub fn step_factor(scheme: Scheme, alpha: f64, beta: f64, delta: f64) -> f64 {
    match scheme {
        Scheme::ImplicitS => alpha * delta / (1.0 - (1.0 - alpha) * delta * bracket(beta, delta)),
        Scheme::ImplicitIshikawa => alpha / (1.0 - (1.0 - alpha) * delta * bracket(beta, delta)),
        Scheme::ImplicitMann => alpha / (1.0 - (1.0 - alpha) * delta),
    }
}

/// The coarser factor `1 − (1 − αₙ)(1 − δ) ≥ Δₙ` of the implicit S scheme.
pub fn contraction_factor(alpha: f64, delta: f64) -> f64 {
    1.0 - (1.0 - alpha) * (1.0 - delta)
}

fn envelope(scheme: Scheme, schedule: &Schedule, delta: f64, d0: f64, n: usize, form: EnvelopeForm) -> Result<f64> {
    check_delta(delta)?;
    if n < 2 {
        return Ok(d0);
    }
    match form {
        EnvelopeForm::CumulativeProduct => {
            let mut acc = d0;
            for k in 2..=n {
                acc *= step_factor(scheme, schedule.alpha(k)?, schedule.beta(k)?, delta);
            }
            Ok(acc)
        }
        EnvelopeForm::Literal => {
            let f = step_factor(scheme, schedule.alpha(n)?, schedule.beta(n)?, delta);
            Ok(f.powi(n as i32) * d0)
        }
    }
}

/// Implicit S envelope `aₙ = ∏ₖ₌₂ⁿ αₖδ / (1 − (1 − αₖ)δ[βₖ + (1 − βₖ)δ]) · d₀`.
pub fn envelope_s(schedule: &Schedule, delta: f64, d0: f64, n: usize) -> Result<f64> {
    envelope(Scheme::ImplicitS, schedule, delta, d0, n, EnvelopeForm::CumulativeProduct)
}

/// Implicit Mann envelope `bₙ = ∏ₖ₌₂ⁿ αₖ / (1 − (1 − αₖ)δ) · d₀`.
pub fn envelope_mann(schedule: &Schedule, delta: f64, d0: f64, n: usize) -> Result<f64> {
    envelope(Scheme::ImplicitMann, schedule, delta, d0, n, EnvelopeForm::CumulativeProduct)
}

/// Implicit Ishikawa envelope `cₙ = ∏ₖ₌₂ⁿ αₖ / (1 − (1 − αₖ)δ[βₖ + (1 − βₖ)δ]) · d₀`.
pub fn envelope_ishikawa(schedule: &Schedule, delta: f64, d0: f64, n: usize) -> Result<f64> {
    envelope(Scheme::ImplicitIshikawa, schedule, delta, d0, n, EnvelopeForm::CumulativeProduct)
}

/// `exp(−Σᵢ₌₂ⁿ (1 − αᵢ)(1 − δ))·d₀`, which dominates `∏ᵢ (1 − (1 − αᵢ)(1 − δ))·d₀`
/// because `1 − a ≤ e^{−a}`.
pub fn exp_envelope(schedule: &Schedule, delta: f64, d0: f64, n: usize) -> Result<f64> {
    check_delta(delta)?;
    let mut sum = 0.0;
    for i in 2..=n {
        sum += (1.0 - schedule.alpha(i)?) * (1.0 - delta);
    }
    Ok((-sum).exp() * d0)
}

/// The data-dependence estimate `2ε / (1 − δ)²`.
pub fn datadep_bound(epsilon: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::parameter(format!("epsilon must be finite and >= 0, got {epsilon}")));
    }
    Ok(2.0 * epsilon / ((1.0 - delta) * (1.0 - delta)))
}

/// All envelopes for `n = 1, …, n_max`; entry `i` belongs to `n = i + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundSequences {
    pub delta: f64,
    pub d0: f64,
    pub form: EnvelopeForm,
    /// implicit S
    pub a: Vec<f64>,
    /// implicit Mann
    pub b: Vec<f64>,
    /// implicit Ishikawa
    pub c: Vec<f64>,
    /// `∏ (1 − (1 − αᵢ)(1 − δ))·d₀`
    pub contraction: Vec<f64>,
    pub exp: Vec<f64>,
}

impl BoundSequences {
    pub fn compute(schedule: &Schedule, delta: f64, d0: f64, n_max: usize, form: EnvelopeForm) -> Result<Self> {
        check_delta(delta)?;
        let mut seqs = BoundSequences {
            delta,
            d0,
            form,
            a: vec![d0],
            b: vec![d0],
            c: vec![d0],
            contraction: vec![d0],
            exp: vec![d0],
        };
        let (mut pa, mut pb, mut pc, mut pt, mut sum) = (d0, d0, d0, d0, 0.0);
        for n in 2..=n_max {
            let (alpha, beta) = (schedule.alpha(n)?, schedule.beta(n)?);
            let fs = step_factor(Scheme::ImplicitS, alpha, beta, delta);
            let fm = step_factor(Scheme::ImplicitMann, alpha, beta, delta);
            let fi = step_factor(Scheme::ImplicitIshikawa, alpha, beta, delta);
            pa *= fs;
            pb *= fm;
            pc *= fi;
            pt *= contraction_factor(alpha, delta);
            sum += (1.0 - alpha) * (1.0 - delta);
            let lit = |f: f64| f.powi(n as i32) * d0;
            match form {
                EnvelopeForm::CumulativeProduct => {
                    seqs.a.push(pa);
                    seqs.b.push(pb);
                    seqs.c.push(pc);
                }
                EnvelopeForm::Literal => {
                    seqs.a.push(lit(fs));
                    seqs.b.push(lit(fm));
                    seqs.c.push(lit(fi));
                }
            }
            seqs.contraction.push(pt);
            seqs.exp.push((-sum).exp() * d0);
        }
        Ok(seqs)
    }

    pub fn for_scheme(&self, scheme: Scheme) -> &[f64] {
        match scheme {
            Scheme::ImplicitS => &self.a,
            Scheme::ImplicitMann => &self.b,
            Scheme::ImplicitIshikawa => &self.c,
        }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Faster,
    NotEstablished,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Faster => "faster",
            Verdict::NotEstablished => "not-established",
        })
    }
}

/// Finite-horizon reading of "`aₙ/bₙ → 0`".
#[derive(Debug, Clone, Serialize)]
pub struct RateVerdict {
    pub ratios: Vec<f64>,
    pub horizon: usize,
    pub threshold: f64,
    pub final_ratio: f64,
    /// The ratio never increased over the last quarter of the horizon.
    pub tail_monotone: bool,
    pub verdict: Verdict,
}

/// Compares two error sequences over their first `horizon` entries.
///
/// `faster` requires `a_h / b_h < threshold` at the horizon and a ratio that
/// is nonincreasing over the final quarter.
pub fn berinde_compare(a: &[f64], b: &[f64], horizon: usize, threshold: f64) -> Result<RateVerdict> {
    if horizon == 0 || horizon > a.len() || horizon > b.len() {
        return Err(Error::parameter(format!(
            "horizon {horizon} must lie in 1..={}",
            a.len().min(b.len())
        )));
    }
    let ratios = a[..horizon]
        .iter()
        .zip(&b[..horizon])
        .enumerate()
        .map(|(i, (x, y))| {
            if *y > 0.0 {
                Ok(x / y)
            } else {
                Err(Error::DegenerateComparison { index: i })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let final_ratio = ratios[horizon - 1];
    let tail_start = horizon - (horizon / 4).max(1);
    let tail_monotone = ratios[tail_start..].windows(2).all(|w| w[1] <= w[0]);
    let verdict = if final_ratio < threshold && tail_monotone {
        Verdict::Faster
    } else {
        Verdict::NotEstablished
    };
    Ok(RateVerdict {
        ratios,
        horizon,
        threshold,
        final_ratio,
        tail_monotone,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    /// Indices `i` with `a[i+1] > (1 − μ[i])a[i] + μ[i]η[i] + tol`.
    pub violations: Vec<usize>,
    pub max_excess: f64,
    /// Largest `a` over the last tenth of the horizon.
    pub tail_a: f64,
    pub tail_eta: f64,
    pub tolerance: f64,
}

impl Lemma1Report {
    pub fn hypothesis_holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.violations.first().copied()
    }

    pub fn conclusion_holds(&self) -> bool {
        self.tail_a <= self.tail_eta + self.tolerance
    }
}

/// Checks `a[i+1] ≤ (1 − μ[i])·a[i] + μ[i]·η[i]` for `i < horizon − 1` and
/// compares the tails of `a` and `η`.
///
/// `mu` and `eta` need only `horizon − 1` entries.
pub fn check_lemma1(a: &[f64], mu: &[f64], eta: &[f64], horizon: usize, tol: f64) -> Result<Lemma1Report> {
    if horizon < 2 || horizon > a.len() || horizon - 1 > mu.len() || horizon - 1 > eta.len() {
        return Err(Error::parameter("horizon must be at least 2 and within all sequences"));
    }
    let steps = horizon - 1;
    if let Some(i) = mu[..steps].iter().position(|m| !(*m > 0.0 && *m < 1.0)) {
        return Err(Error::parameter(format!("mu[{i}] = {} is outside (0, 1)", mu[i])));
    }
    if let Some(i) = eta[..steps].iter().position(|e| !(*e >= 0.0)) {
        return Err(Error::parameter(format!("eta[{i}] = {} is negative", eta[i])));
    }
    if let Some(i) = a[..horizon].iter().position(|x| !(*x >= 0.0)) {
        return Err(Error::parameter(format!("a[{i}] = {} is negative", a[i])));
    }
    let mut violations = Vec::new();
    let mut max_excess = f64::NEG_INFINITY;
    for i in 0..steps {
        let excess = a[i + 1] - ((1.0 - mu[i]) * a[i] + mu[i] * eta[i]);
        max_excess = max_excess.max(excess);
        if excess > tol {
            violations.push(i);
        }
    }
    let tail = steps - (steps / 10).max(1);
    let max_of = |s: &[f64]| s.iter().copied().fold(0.0, f64::max);
    Ok(Lemma1Report {
        violations,
        max_excess,
        tail_a: max_of(&a[tail + 1..horizon]),
        tail_eta: max_of(&eta[tail..steps]),
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn paper() -> Schedule {
        Schedule::paper_example()
    }

    #[test]
    fn envelope_s_first_step() {
        // (1/2·1/2) / (1 − 1/2·1/2·3/4) = 4/13
        let v = envelope_s(&paper(), 0.5, 1.0, 2).unwrap();
        assert!((v - 4.0 / 13.0).abs() < 1e-16);
        let exact = Ratio::new(1i64, 4) / (Ratio::from(1) - Ratio::new(1, 2) * Ratio::new(1, 2) * Ratio::new(3, 4));
        assert_eq!(exact, Ratio::new(4, 13));
    }

    #[test]
    fn envelope_degenerate_cases() {
        assert_eq!(envelope_s(&paper(), 0.0, 1.0, 5).unwrap(), 0.0);
        let ones = Schedule::constant(1.0, 0.3).unwrap();
        let v = envelope_s(&ones, 0.5, 2.0, 6).unwrap();
        assert!((v - 0.5f64.powi(5) * 2.0).abs() < 1e-15);
        assert_eq!(envelope_mann(&ones, 0.7, 3.0, 10).unwrap(), 3.0);
        // δ = 0: ∏ αₖ
        let prod: f64 = (2..=6).map(|k| 1.0 - 1.0 / k as f64).product();
        assert!((envelope_mann(&paper(), 0.0, 1.0, 6).unwrap() - prod).abs() < 1e-15);
        assert!((envelope_ishikawa(&paper(), 0.0, 1.0, 6).unwrap() - prod).abs() < 1e-15);
    }

    #[test]
    fn mann_and_ishikawa_first_step() {
        assert!((envelope_mann(&paper(), 0.5, 1.0, 2).unwrap() - 2.0 / 3.0).abs() < 1e-16);
        assert!((envelope_ishikawa(&paper(), 0.5, 1.0, 2).unwrap() - 8.0 / 13.0).abs() < 1e-16);
    }

    #[test]
    fn ishikawa_reduces_to_mann_at_beta_one() {
        let s = Schedule::new("beta-one", |n| 1.0 - 1.0 / (n as f64 + 1.0), |_| 1.0, crate::schemes::Divergence::Proven);
        for n in 2..30 {
            let i = envelope_ishikawa(&s, 0.6, 1.0, n).unwrap();
            let m = envelope_mann(&s, 0.6, 1.0, n).unwrap();
            assert!((i - m).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_one_is_rejected() {
        assert!(matches!(envelope_s(&paper(), 1.0, 1.0, 3), Err(Error::Certificate(_))));
        assert!(envelope_mann(&paper(), 1.2, 1.0, 3).is_err());
        assert!(envelope_ishikawa(&paper(), 1.0, 1.0, 3).is_err());
        assert!(exp_envelope(&paper(), 1.0, 1.0, 3).is_err());
        assert!(datadep_bound(0.1, 1.0).is_err());
    }

    #[test]
    fn exp_envelope_values() {
        let v = exp_envelope(&paper(), 0.5, 1.0, 2).unwrap();
        assert!((v - (-0.25f64).exp()).abs() < 1e-16);
        let ones = Schedule::constant(1.0, 0.0).unwrap();
        assert_eq!(exp_envelope(&ones, 0.5, 4.0, 50).unwrap(), 4.0);
        // Σₖ₌₂ⁿ 1/k ≈ ln n + γ − 1
        let n = 100_000;
        let v = exp_envelope(&paper(), 0.5, 1.0, n).unwrap();
        let harmonic: f64 = (2..=n).map(|k| 1.0 / k as f64).sum();
        assert!((v - (-0.5 * harmonic).exp()).abs() < 1e-12);
        assert!(v < 2.0 * (n as f64).powf(-0.5));
    }

    #[test]
    fn datadep_values() {
        assert!((datadep_bound(0.01, 0.5).unwrap() - 0.08).abs() < 1e-16);
        assert_eq!(datadep_bound(0.3, 0.0).unwrap(), 0.6);
        assert_eq!(datadep_bound(0.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn literal_form_differs_from_product() {
        let p = BoundSequences::compute(&paper(), 0.5, 1.0, 20, EnvelopeForm::CumulativeProduct).unwrap();
        let l = BoundSequences::compute(&paper(), 0.5, 1.0, 20, EnvelopeForm::Literal).unwrap();
        assert_eq!(p.a[1], 4.0 / 13.0);
        assert!((l.a[1] - (4.0f64 / 13.0).powi(2)).abs() < 1e-16);
        assert!((p.b[19] - envelope_mann(&paper(), 0.5, 1.0, 20).unwrap()).abs() < 1e-16);
        assert!((l.c[10] - envelope(Scheme::ImplicitIshikawa, &paper(), 0.5, 1.0, 11, EnvelopeForm::Literal).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn berinde_examples() {
        let seqs = BoundSequences::compute(&paper(), 0.5, 1.0, 50, EnvelopeForm::CumulativeProduct).unwrap();
        let v = berinde_compare(&seqs.a, &seqs.b, 50, 1e-6).unwrap();
        assert_eq!(v.verdict, Verdict::Faster);
        assert!(v.final_ratio < 2f64.powi(-48));
        let v = berinde_compare(&seqs.a, &seqs.c, 50, 1e-6).unwrap();
        assert_eq!(v.verdict, Verdict::Faster);
        // aₙ/cₙ = δ^{n−1}
        assert!((v.final_ratio - 0.5f64.powi(49)).abs() < 1e-28);
        let same = berinde_compare(&seqs.a, &seqs.a, 50, 1e-6).unwrap();
        assert_eq!(same.verdict, Verdict::NotEstablished);
    }

    #[test]
    fn berinde_degenerate() {
        let err = berinde_compare(&[1.0, 0.5, 0.2], &[1.0, 0.0, 1.0], 3, 1e-6).unwrap_err();
        assert_eq!(err, Error::DegenerateComparison { index: 1 });
        assert!(berinde_compare(&[1.0], &[1.0], 2, 1e-6).is_err());
    }

    #[test]
    fn berinde_requires_monotone_tail() {
        let a: Vec<f64> = (0..40).map(|i| if i == 38 { 1e-9 } else { 1e-8 }).collect();
        let b = vec![1.0; 40];
        let v = berinde_compare(&a, &b, 40, 1e-6).unwrap();
        assert!(!v.tail_monotone);
        assert_eq!(v.verdict, Verdict::NotEstablished);
    }

    #[test]
    fn lemma1_boundary() {
        // aₙ = 1/n, μ = 1/2, η = 0: 1/2 ≤ 1/2 at the first index, then fails
        let a: Vec<f64> = (1..=20).map(|n| 1.0 / n as f64).collect();
        let r = check_lemma1(&a, &[0.5; 20], &[0.0; 20], 20, 0.0).unwrap();
        assert_eq!(r.first_violation(), Some(1));
        assert_eq!(r.violations.len(), 18);
    }

    #[test]
    fn lemma1_stationary() {
        let r = check_lemma1(&[0.3; 50], &[0.2; 50], &[0.3; 50], 50, 0.0).unwrap();
        assert!(r.hypothesis_holds());
        assert!(r.conclusion_holds());
        assert!(r.max_excess.abs() < 1e-16);
    }

    #[test]
    fn lemma1_rejects_bad_inputs() {
        assert!(check_lemma1(&[1.0; 5], &[1.0; 5], &[0.0; 5], 5, 0.0).is_err());
        assert!(check_lemma1(&[1.0; 5], &[0.5; 5], &[-1.0; 5], 5, 0.0).is_err());
        assert!(check_lemma1(&[1.0; 5], &[0.5; 5], &[0.0; 5], 6, 0.0).is_err());
        assert!(check_lemma1(&[1.0; 5], &[0.5; 3], &[0.0; 4], 5, 0.0).is_err());
        assert!(check_lemma1(&[1.0; 5], &[0.5; 4], &[1.0; 4], 5, 0.0).is_ok());
    }
}
