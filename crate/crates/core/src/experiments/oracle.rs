use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::schemes::Scheme;

/// Exact values of the three schemes for `Tx = x/2` on `[0, 1]` with
/// `αₙ = βₙ = 1 − 1/n`.
///
/// Solving each implicit linear equation by hand gives `xₙ = rₙ·xₙ₋₁` with
///
/// ```text
/// implicit Mann:      rₙ = 2(n − 1) / (2n − 1)
/// implicit Ishikawa:  rₙ = 4n(n − 1) / (4n² − 2n + 1)
/// implicit S:         rₙ = 2n(n − 1) / (4n² − 2n + 1)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct RationalOracle {
    scheme: Scheme,
    n: usize,
    x: BigRational,
}

impl RationalOracle {
    /// Starts at `x₁ = x1`.
    pub fn new(scheme: Scheme, x1: BigRational) -> Self {
        RationalOracle { scheme, n: 1, x: x1 }
    }

    /// `rₙ` for `n ≥ 2`.
    pub fn ratio(scheme: Scheme, n: usize) -> BigRational {
        assert!(n >= 2, "the recursion starts at n = 2");
        let n = BigInt::from(n);
        let one = BigInt::one();
        let (num, den) = match scheme {
            Scheme::ImplicitMann => (BigInt::from(2) * (&n - &one), BigInt::from(2) * &n - &one),
            Scheme::ImplicitIshikawa => (
                BigInt::from(4) * &n * (&n - &one),
                BigInt::from(4) * &n * &n - BigInt::from(2) * &n + &one,
            ),
            Scheme::ImplicitS => (
                BigInt::from(2) * &n * (&n - &one),
                BigInt::from(4) * &n * &n - BigInt::from(2) * &n + &one,
            ),
        };
        BigRational::new(num, den)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> &BigRational {
        &self.x
    }

    pub fn to_f64(&self) -> f64 {
        self.x.to_f64().unwrap_or(f64::NAN)
    }

    pub fn advance(&mut self) {
        self.n += 1;
        self.x = &self.x * Self::ratio(self.scheme, self.n);
    }

    /// `x₁, …, x_{n_max}` starting from `x₁ = 1`.
    pub fn sequence(scheme: Scheme, n_max: usize) -> Vec<BigRational> {
        let mut oracle = RationalOracle::new(scheme, BigRational::one());
        let mut out = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            out.push(oracle.value().clone());
            oracle.advance();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::fixed_rational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn first_ratios() {
        assert_eq!(RationalOracle::ratio(Scheme::ImplicitMann, 2), q(2, 3));
        assert_eq!(RationalOracle::ratio(Scheme::ImplicitIshikawa, 2), q(8, 13));
        assert_eq!(RationalOracle::ratio(Scheme::ImplicitS, 2), q(4, 13));
    }

    #[test]
    fn row_five() {
        let isi = RationalOracle::sequence(Scheme::ImplicitS, 5);
        assert_eq!(isi[4], q(15360, 696787));
        assert_eq!(fixed_rational(&isi[4], 15), "0.022044039283167");
    }

    #[test]
    fn advance_tracks_index() {
        let mut o = RationalOracle::new(Scheme::ImplicitMann, BigRational::one());
        o.advance();
        o.advance();
        assert_eq!(o.n(), 3);
        // 2/3 · 4/5
        assert_eq!(o.value(), &q(8, 15));
        assert!((o.to_f64() - 8.0 / 15.0).abs() < 1e-16);
    }
}
