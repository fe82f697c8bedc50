use std::fmt;

use num_rational::BigRational;

use super::dyadic::Dyadic;
use super::real::Interval;

/// A rectangle `re x im` in the complex plane.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl ComplexBox {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexBox { re, im }
    }

    pub fn real(re: Interval) -> Self {
        ComplexBox {
            re,
            im: Interval::zero(),
        }
    }

    pub fn zero() -> Self {
        ComplexBox::real(Interval::zero())
    }

    pub fn one() -> Self {
        ComplexBox::real(Interval::one())
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        ComplexBox::real(Interval::from_rational(r, prec))
    }

    pub fn point(re: Dyadic, im: Dyadic) -> Self {
        ComplexBox {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    pub fn mid(&self) -> ComplexBox {
        ComplexBox::point(self.re.mid(), self.im.mid())
    }

    /// Larger of the two side lengths.
    pub fn width(&self) -> Dyadic {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn strictly_inside(&self, other: &ComplexBox) -> bool {
        self.re.strictly_inside(&other.re) && self.im.strictly_inside(&other.im)
    }

    pub fn disjoint(&self, other: &ComplexBox) -> bool {
        self.re.disjoint(&other.re) || self.im.disjoint(&other.im)
    }

    pub fn intersect(&self, other: &ComplexBox) -> Option<ComplexBox> {
        Some(ComplexBox {
            re: self.re.intersect(&other.re)?,
            im: self.im.intersect(&other.im)?,
        })
    }

    pub fn round(&self, prec: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.round(prec),
            im: self.im.round(prec),
        }
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_real(&self, r: &Interval) -> ComplexBox {
        ComplexBox {
            re: self.re.mul(r),
            im: self.im.mul(r),
        }
    }

    /// Enclosure of `|z|^2`.
    pub fn abs_sq(&self) -> Interval {
        self.re.square().add(&self.im.square())
    }

    pub fn abs(&self, prec: u32) -> Interval {
        self.abs_sq()
            .round(prec)
            .sqrt(prec)
            .expect("squares are nonnegative")
    }

    pub fn recip(&self, prec: u32) -> Option<ComplexBox> {
        let n = self.abs_sq().round(prec);
        let inv = n.recip(prec)?;
        Some(self.conj().mul_real(&inv).round(prec))
    }

    pub fn div(&self, o: &ComplexBox, prec: u32) -> Option<ComplexBox> {
        Some(self.mul(&o.recip(prec)?).round(prec))
    }

    /// Integer power by repeated squaring, rounding at `prec` throughout.
    pub fn powi(&self, mut k: u64, prec: u32) -> ComplexBox {
        let mut base = self.clone();
        let mut acc = ComplexBox::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).round(prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).round(prec);
            }
        }
        acc
    }
}
