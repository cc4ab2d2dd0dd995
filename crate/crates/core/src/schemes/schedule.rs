use std::fmt;
use std::sync::Arc;

use evalexpr::{ContextWithMutableVariables, HashMapContext, Node, Value};

use crate::error::{Error, Result};

/// How the divergence `Σ(1 − αₙ) = ∞` required for convergence is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Divergence {
    /// Established for the preset by a closed-form argument.
    Proven,
    /// Custom schedule; the caller vouches for it.
    Asserted,
}

type Seq = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// Parameter sequences `{αₙ}`, `{βₙ}` in `[0, 1]`.
///
/// Indices start at 1. The initial point of a run carries index 1, so the
/// first step uses `α₂, β₂`.
#[derive(Clone)]
pub struct Schedule {
    name: String,
    alpha: Seq,
    beta: Seq,
    divergence: Divergence,
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Schedule")
            .field("name", &self.name)
            .field("divergence", &self.divergence)
            .finish()
    }
}

impl Schedule {
    pub fn new(
        name: impl Into<String>,
        alpha: impl Fn(usize) -> f64 + Send + Sync + 'static,
        beta: impl Fn(usize) -> f64 + Send + Sync + 'static,
        divergence: Divergence,
    ) -> Self {
        Schedule {
            name: name.into(),
            alpha: Arc::new(alpha),
            beta: Arc::new(beta),
            divergence,
        }
    }

    /// `αₙ = βₙ = 1 − 1/n` for `n ≥ 2` and `α₁ = β₁ = 0`.
    pub fn paper_example() -> Self {
        let seq = |n: usize| if n < 2 { 0.0 } else { 1.0 - 1.0 / n as f64 };
        Schedule::new("paper-example", seq, seq, Divergence::Proven)
    }

    /// Constant `αₙ = alpha`, `βₙ = beta`; divergent iff `alpha < 1`.
    pub fn constant(alpha: f64, beta: f64) -> Result<Self> {
        for v in [alpha, beta] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::parameter(format!("schedule values must lie in [0, 1], got {v}")));
            }
        }
        let divergence = if alpha < 1.0 {
            Divergence::Proven
        } else {
            Divergence::Asserted
        };
        Ok(Schedule::new(
            format!("constant:{alpha}:{beta}"),
            move |_| alpha,
            move |_| beta,
            divergence,
        ))
    }

    /// `αₙ = βₙ = 1 − 1/√n` for `n ≥ 2`; `Σ 1/√n` diverges.
    pub fn sqrt_decay() -> Self {
        let seq = |n: usize| {
            if n < 2 {
                0.0
            } else {
                1.0 - 1.0 / (n as f64).sqrt()
            }
        };
        Schedule::new("sqrt", seq, seq, Divergence::Proven)
    }

    /// Schedules given as expressions in `n`, e.g. `1 - 1/n`.
    ///
    /// Divergence cannot be decided for arbitrary expressions and is marked
    /// as asserted by the caller.
    pub fn from_expressions(alpha: &str, beta: &str) -> Result<Self> {
        let a = compile(alpha)?;
        let b = compile(beta)?;
        // surface evaluation errors at construction
        eval_at(&a, 2)?;
        eval_at(&b, 2)?;
        let name = format!("expr:{alpha}:{beta}");
        Ok(Schedule::new(
            name,
            move |n| eval_at(&a, n).unwrap_or(f64::NAN),
            move |n| eval_at(&b, n).unwrap_or(f64::NAN),
            Divergence::Asserted,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn divergence(&self) -> Divergence {
        self.divergence
    }

    /// `αₙ`, checked to lie in `[0, 1]`.
    pub fn alpha(&self, n: usize) -> Result<f64> {
        checked("alpha", n, (self.alpha)(n))
    }

    pub fn beta(&self, n: usize) -> Result<f64> {
        checked("beta", n, (self.beta)(n))
    }
}

fn checked(which: &str, n: usize, v: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::parameter(format!("{which}_{n} = {v} is outside [0, 1]")))
    }
}

fn compile(expr: &str) -> Result<Node> {
    evalexpr::build_operator_tree(expr).map_err(|e| Error::Parse(format!("`{expr}`: {e}")))
}

fn eval_at(node: &Node, n: usize) -> Result<f64> {
    let mut ctx = HashMapContext::new();
    ctx.set_value("n".into(), Value::Float(n as f64))
        .map_err(|e| Error::Parse(e.to_string()))?;
    node.eval_number_with_context(&ctx)
        .map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_example_values() {
        let s = Schedule::paper_example();
        assert_eq!(s.alpha(1).unwrap(), 0.0);
        assert_eq!(s.beta(1).unwrap(), 0.0);
        assert_eq!(s.alpha(2).unwrap(), 0.5);
        assert_eq!(s.beta(4).unwrap(), 0.75);
        assert_eq!(s.divergence(), Divergence::Proven);
    }

    #[test]
    fn expressions() {
        let s = Schedule::from_expressions("1 - 1/n", "0.5").unwrap();
        assert_eq!(s.alpha(4).unwrap(), 0.75);
        assert_eq!(s.beta(9).unwrap(), 0.5);
        assert_eq!(s.divergence(), Divergence::Asserted);
        assert!(Schedule::from_expressions("1 - ", "0.5").is_err());
        let bad = Schedule::from_expressions("n", "0").unwrap();
        assert!(bad.alpha(3).is_err());
    }

    #[test]
    fn constant_bounds() {
        assert!(Schedule::constant(1.5, 0.5).is_err());
        assert_eq!(Schedule::constant(1.0, 0.5).unwrap().divergence(), Divergence::Asserted);
        assert_eq!(Schedule::constant(0.5, 0.5).unwrap().alpha(10).unwrap(), 0.5);
    }
}
