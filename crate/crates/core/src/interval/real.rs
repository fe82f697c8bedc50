use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};

/// A closed real interval `[lo, hi]` with dyadic endpoints.
///
/// Ring operations (`add`, `sub`, `mul`) are exact; callers bound the growth
/// of the endpoints with [`Interval::round`]. Division and everything
/// transcendental take a precision argument and round outward.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Interval {
            lo: d.clone(),
            hi: d,
        }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Interval::point(Dyadic::one())
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Interval::point(Dyadic::from_int(v))
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
        }
    }

    /// `[-r, r]`.
    pub fn symmetric(r: Dyadic) -> Self {
        let r = r.abs();
        Interval { lo: r.neg(), hi: r }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Dyadic {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Lower bound on `|x|` over the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else if self.lo.signum() > 0 {
            self.lo.clone()
        } else {
            self.hi.abs()
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    /// True when `self` lies strictly inside `other`.
    pub fn strictly_inside(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        !self.disjoint(other)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo > other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi < other.hi {
            &self.hi
        } else {
            &other.hi
        };
        if lo <= hi {
            Some(Interval::new(lo.clone(), hi.clone()))
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo < other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi > other.hi {
            &self.hi
        } else {
            &other.hi
        };
        Interval::new(lo.clone(), hi.clone())
    }

    /// Outward rounding of both endpoints to `prec` significant bits.
    pub fn round(&self, prec: u32) -> Interval {
        Interval {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.add(&other.lo),
            hi: self.hi.add(&other.hi),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.sub(&other.hi),
            hi: self.hi.sub(&other.lo),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let ps = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = &ps[0];
        let mut hi = &ps[0];
        for p in &ps[1..] {
            if p < lo {
                lo = p;
            }
            if p > hi {
                hi = p;
            }
        }
        Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        }
    }

    pub fn square(&self) -> Interval {
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        let (small, big) = if a < b { (a, b) } else { (b, a) };
        if self.contains_zero() {
            Interval {
                lo: Dyadic::zero(),
                hi: big,
            }
        } else {
            Interval { lo: small, hi: big }
        }
    }

    pub fn mul_pow2(&self, e: i64) -> Interval {
        Interval {
            lo: self.lo.mul_pow2(e),
            hi: self.hi.mul_pow2(e),
        }
    }

    pub fn scale_int(&self, k: i64) -> Interval {
        self.mul(&Interval::from_int(k))
    }

    /// `1 / self`, or `None` when the interval contains zero.
    pub fn recip(&self, prec: u32) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let one = Dyadic::one();
        Some(Interval {
            lo: one.div(&self.hi, prec, Round::Down),
            hi: one.div(&self.lo, prec, Round::Up),
        })
    }

    pub fn div(&self, other: &Interval, prec: u32) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (a, b) in cands {
            let d = a.div(b, prec, Round::Down);
            let u = a.div(b, prec, Round::Up);
            if lo.as_ref().map_or(true, |l| &d < l) {
                lo = Some(d);
            }
            if hi.as_ref().map_or(true, |h| &u > h) {
                hi = Some(u);
            }
        }
        Some(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    /// Square root; `None` if the interval reaches below zero.
    pub fn sqrt(&self, prec: u32) -> Option<Interval> {
        if self.lo.signum() < 0 {
            return None;
        }
        Some(Interval {
            lo: self.lo.sqrt(prec, Round::Down),
            hi: self.hi.sqrt(prec, Round::Up),
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(Dyadic::from_f64(a.min(b)), Dyadic::from_f64(a.max(b)))
    }

    proptest! {
        #[test]
        fn arithmetic_contains_pointwise_results(
            a in -50.0f64..50.0, b in -50.0f64..50.0,
            c in -50.0f64..50.0, d in -50.0f64..50.0,
            ta in 0.0f64..1.0, tb in 0.0f64..1.0,
        ) {
            let x = iv(a, b);
            let y = iv(c, d);
            let px = Dyadic::from_f64(a.min(b) + ta * (a - b).abs());
            let py = Dyadic::from_f64(c.min(d) + tb * (c - d).abs());
            prop_assert!(x.add(&y).contains(&px.add(&py)));
            prop_assert!(x.sub(&y).contains(&px.sub(&py)));
            prop_assert!(x.mul(&y).round(20).contains(&px.mul(&py)));
            prop_assert!(x.square().contains(&px.mul(&px)));
            if let Some(q) = x.div(&y, 40) {
                let exact = px.to_rational() / py.to_rational();
                prop_assert!(q.contains_rational(&exact));
            }
        }
    }

    #[test]
    fn recip_of_straddling_interval_is_none() {
        assert!(iv(-1.0, 1.0).recip(64).is_none());
        assert!(iv(2.0, 4.0)
            .recip(64)
            .unwrap()
            .contains(&Dyadic::from_f64(0.25)));
    }
}
