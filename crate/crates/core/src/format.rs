//! Fixed-point decimal output with round-half-even.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `q` rounded half-to-even to `digits` decimals.
pub fn fixed_rational(q: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = q.abs() * BigRational::from_integer(scale.clone());
    let (mut units, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem * 2u32;
    let denom = scaled.denom();
    if twice > *denom || (twice == *denom && units.is_odd()) {
        units += 1u32;
    }
    let negative = q.is_negative() && !units.is_zero();
    let (int, frac) = units.div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!("{:0>digits$}", frac.to_string()));
    }
    out
}

/// The exact binary value of `x`, rounded half-to-even to `digits` decimals.
pub fn fixed(x: f64, digits: usize) -> String {
    match BigRational::from_float(x) {
        Some(q) => fixed_rational(&q, digits),
        None if x.is_nan() => "NaN".into(),
        None if x > 0.0 => "inf".into(),
        None => "-inf".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn r(n: i64, d: i64) -> BigRational {
        Ratio::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn ties_go_to_even() {
        assert_eq!(fixed_rational(&r(5, 2), 0), "2");
        assert_eq!(fixed_rational(&r(7, 2), 0), "4");
        assert_eq!(fixed_rational(&r(1, 8), 2), "0.12");
        assert_eq!(fixed_rational(&r(3, 8), 2), "0.38");
        assert_eq!(fixed_rational(&r(-5, 2), 0), "-2");
    }

    #[test]
    fn padding_and_sign() {
        assert_eq!(fixed_rational(&r(1, 1000), 5), "0.00100");
        assert_eq!(fixed_rational(&r(-1, 10_000), 2), "0.00");
        assert_eq!(fixed_rational(&r(-123, 10), 1), "-12.3");
        assert_eq!(fixed_rational(&r(2, 3), 15), "0.666666666666667");
    }

    #[test]
    fn table_cells() {
        assert_eq!(fixed_rational(&r(15360, 696787), 15), "0.022044039283167");
        assert_eq!(fixed_rational(&r(8, 13), 15), "0.615384615384615");
        assert_eq!(fixed(4.0 / 13.0, 15), "0.307692307692308");
    }

    #[test]
    fn uses_exact_binary_value() {
        // 0.125 is exact and a tie; 0.1 is slightly above 1/10
        assert_eq!(fixed(0.125, 2), "0.12");
        assert_eq!(fixed(2.675, 2), "2.67");
        assert_eq!(fixed(1e-20, 15), "0.000000000000000");
        assert_eq!(fixed(f64::NAN, 3), "NaN");
        assert_eq!(fixed(f64::NEG_INFINITY, 3), "-inf");
    }
}
