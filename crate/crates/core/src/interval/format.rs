//! Decimal rendering of certified values for reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::complex::ComplexBox;
use super::dyadic::Dyadic;
use super::real::Interval;

/// A real enclosure as decimal strings: the true value lies within
/// `radius` of `value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decimal {
    pub value: String,
    #[serde(rename = "±")]
    pub radius: String,
}

/// A complex enclosure as a pair of real decimal enclosures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecimalComplex {
    pub re: Decimal,
    pub im: Decimal,
}

/// Digits after the decimal point in reported midpoints.
pub const REPORT_DIGITS: usize = 30;

impl Interval {
    /// Midpoint with `digits` fractional digits and a rounded-up radius that
    /// also covers the midpoint's own rounding.
    pub fn to_decimal(&self, digits: usize) -> Decimal {
        let mid = self.mid();
        let shown = decimal(&mid, digits);
        let scale = BigRational::from_integer(BigInt::from(10u32).pow(digits as u32));
        let shown_r = BigRational::from_integer(scaled_round(&mid, digits)) / scale;
        let dev = (shown_r - mid.to_rational()).abs();
        let rad = self.width().mul_pow2(-1).to_rational() + dev;
        Decimal {
            value: shown,
            radius: decimal_up_rational(&rad, 3),
        }
    }
}

impl ComplexBox {
    pub fn to_decimal(&self, digits: usize) -> DecimalComplex {
        DecimalComplex {
            re: self.re.to_decimal(digits),
            im: self.im.to_decimal(digits),
        }
    }
}

/// Midpoint rendered with `digits` fractional digits (round half away from zero).
pub fn decimal(d: &Dyadic, digits: usize) -> String {
    let rounded = scaled_round(d, digits);
    let neg = rounded.is_negative();
    let mut s = rounded.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = "0".repeat(digits + 1 - s.len()) + &s;
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

fn scaled_round(d: &Dyadic, digits: usize) -> BigInt {
    let scale = BigInt::from(10u32).pow(digits as u32);
    (d.to_rational() * BigRational::from_integer(scale))
        .round()
        .to_integer()
}

/// Upper bound rendered in scientific notation with `sig` significant digits.
pub fn decimal_up(d: &Dyadic, sig: usize) -> String {
    decimal_up_rational(&d.to_rational(), sig)
}

fn decimal_up_rational(r: &BigRational, sig: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let r = r.abs();
    let ten = BigRational::from_integer(10.into());
    // r = m * 10^e with 1 <= m < 10
    let mut e: i64 = 0;
    let mut m = r;
    while m >= ten {
        m /= &ten;
        e += 1;
    }
    while m < BigRational::from_integer(1.into()) {
        m *= &ten;
        e -= 1;
    }
    let scale = BigRational::from_integer(BigInt::from(10u32).pow(sig as u32 - 1));
    let mut q = (m * &scale).ceil().to_integer();
    if q >= BigInt::from(10u32).pow(sig as u32) {
        q /= 10;
        e += 1;
    }
    let digits = q.to_string();
    let (head, tail) = digits.split_at(1);
    if tail.is_empty() {
        format!("{head}e{e}")
    } else {
        format!("{head}.{tail}e{e}")
    }
}
