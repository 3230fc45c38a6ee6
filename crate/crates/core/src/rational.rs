//! Exact rationals for epsilons and bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Rational = BigRational;

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q` or a plain integer.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("{text:?} is not a fraction `p/q`"))
    };
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (int(p)?, int(q)?),
        None => (int(text)?, BigInt::from(1)),
    };
    if den.is_zero() {
        return Err(format!("{text:?} has a zero denominator"));
    }
    let value = Rational::new(num, den);
    if value.is_negative() {
        return Err(format!("{text:?} is negative"));
    }
    Ok(value)
}

/// `p/q` in lowest terms.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}
