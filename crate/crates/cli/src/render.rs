//! Number formatting for machine-readable output.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Fractional digits kept when a rational is not an integer.
pub const FRACTION_DIGITS: usize = 12;

/// Decimal rendering of an exact rational: integers print exactly, other
/// values are rounded half-up to [`FRACTION_DIGITS`] places with trailing
/// zeros removed.
pub fn decimal(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let negative = r.is_negative();
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(FRACTION_DIGITS as u32);
    let scaled = abs.numer() * &scale;
    let (mut q, rem) = scaled.div_rem(abs.denom());
    if rem * 2u32 >= *abs.denom() {
        q += 1u32;
    }
    let (int_part, frac_part) = q.div_rem(&scale);
    let mut frac = format!("{:0>width$}", frac_part.to_string(), width = FRACTION_DIGITS);
    while frac.ends_with('0') {
        frac.pop();
    }
    let sign = if negative && !(int_part.is_zero() && frac.is_empty()) { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Seconds as a float, for timing fields.
pub fn seconds(d: std::time::Duration) -> f64 {
    d.as_secs_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integers_are_exact() {
        assert_eq!(decimal(&q(1, 1)), "1");
        assert_eq!(decimal(&q(0, 5)), "0");
        assert_eq!(decimal(&q(10, 2)), "5");
    }

    #[test]
    fn fractions_round() {
        assert_eq!(decimal(&q(1, 4)), "0.25");
        assert_eq!(decimal(&q(2, 3)), "0.666666666667");
        assert_eq!(decimal(&q(-7, 2)), "-3.5");
        assert_eq!(decimal(&q(1, 3_000_000_000_000_000)), "0");
    }
}
