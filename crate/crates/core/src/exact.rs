//! Exact rational arithmetic for the integer-vs-real comparisons in the
//! expansion window and the strict expansion inequality.
//!
//! A decimal input such as `1.2` is stored as the nearest double, which is
//! slightly below 6/5. Multiplying that double by 5 and flooring gives 5, not
//! 6, and flips the verdict of `|Γ(S)| > β|S|`. Values are therefore lifted to
//! the rational spelled by their shortest round-trip decimal form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Rational with the same shortest decimal expansion as `x`.
///
/// Panics on non-finite input; callers validate first.
pub fn from_f64(x: f64) -> Rational {
    assert!(x.is_finite(), "non-finite value {x}");
    // `Display` for f64 prints the shortest round-trip digits without an
    // exponent, e.g. 1e-7 -> "0.0000001".
    let text = format!("{x}");
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let mantissa: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .expect("decimal digits");
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(mantissa, denom);
    if negative {
        -value
    } else {
        value
    }
}

pub fn fraction(numer: u64, denom: u64) -> Rational {
    assert!(denom != 0, "zero denominator");
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: usize) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `⌈r⌉` clamped to `usize` (negative values map to 0).
pub fn ceil_usize(r: &Rational) -> usize {
    to_usize(&r.ceil())
}

/// `⌊r⌋` clamped to `usize` (negative values map to 0).
pub fn floor_usize(r: &Rational) -> usize {
    to_usize(&r.floor())
}

fn to_usize(r: &Rational) -> usize {
    if r.is_negative() {
        return 0;
    }
    r.to_integer().to_usize().unwrap_or(usize::MAX)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}
