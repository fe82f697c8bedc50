//! Coefficients of invariant forms: polynomials in the structure-constant
//! atoms `b_ki`, `c_ki` with Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactnum::Rational;
use crate::interval::Interval;

/// `re + i im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussQ {
    pub re: Rational,
    pub im: Rational,
}

impl GaussQ {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussQ { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussQ {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        GaussQ::real(Rational::zero())
    }

    pub fn one() -> Self {
        GaussQ::real(Rational::one())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussQ {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &GaussQ) -> GaussQ {
        GaussQ {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &GaussQ) -> GaussQ {
        GaussQ {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn neg(&self) -> GaussQ {
        GaussQ {
            re: -&self.re,
            im: -&self.im,
        }
    }

    pub fn mul(&self, o: &GaussQ) -> GaussQ {
        GaussQ {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn conj(&self) -> GaussQ {
        GaussQ {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn inv(&self) -> Option<GaussQ> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(GaussQ {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> GaussQ {
        match k.rem_euclid(4) {
            0 => GaussQ::one(),
            1 => GaussQ::i(),
            2 => GaussQ::one().neg(),
            _ => GaussQ::i().neg(),
        }
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |q: &Rational| {
            if q.is_integer() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", r(&self.re)),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) if (-&self.im).is_one() => write!(f, "-i"),
            (true, false) => write!(f, "{}i", r(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}i", r(&self.re), sign, r(&self.im.abs()))
            }
        }
    }
}

/// A structure-constant symbol. Atoms are real.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `b_{k i}` with 0-based `k < s`, `i < t`.
    B(u16, u16),
    /// `c_{k i}`.
    C(u16, u16),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::B(k, i) => write!(f, "b{}{}", k + 1, i + 1),
            Atom::C(k, i) => write!(f, "c{}{}", k + 1, i + 1),
        }
    }
}

/// Sorted list of `(atom, exponent)` with positive exponents.
pub type Monomial = Vec<(Atom, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: BTreeMap<Atom, u32> = a.iter().copied().collect();
    for &(x, e) in b {
        *out.entry(x).or_default() += e;
    }
    out.into_iter().collect()
}

/// A polynomial in the atoms over the Gaussian rationals, in normal form
/// (no zero coefficients), so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coeff {
    terms: BTreeMap<Monomial, GaussQ>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn constant(c: GaussQ) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Coeff { terms }
    }

    pub fn rational(r: Rational) -> Self {
        Coeff::constant(GaussQ::real(r))
    }

    pub fn one() -> Self {
        Coeff::constant(GaussQ::one())
    }

    pub fn i() -> Self {
        Coeff::constant(GaussQ::i())
    }

    pub fn atom(a: Atom) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(a, 1)], GaussQ::one());
        Coeff { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the polynomial has no atoms.
    pub fn as_constant(&self) -> Option<GaussQ> {
        match self.terms.len() {
            0 => Some(GaussQ::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussQ)> {
        self.terms.iter()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.terms.keys().flat_map(|m| m.iter().map(|&(a, _)| a))
    }

    fn insert_add(&mut self, m: Monomial, c: GaussQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, o: &Coeff) {
        for (m, c) in &o.terms {
            self.insert_add(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Coeff {
        Coeff {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.insert_add(mono_mul(ma, mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussQ) -> Coeff {
        if c.is_zero() {
            return Coeff::zero();
        }
        Coeff {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .collect(),
        }
    }

    /// Complex conjugate (atoms are real).
    pub fn conj(&self) -> Coeff {
        Coeff {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.conj()))
                .collect(),
        }
    }

    /// Substitutes each atom by a polynomial.
    pub fn substitute(&self, f: &dyn Fn(Atom) -> Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (m, c) in &self.terms {
            let mut term = Coeff::constant(c.clone());
            for &(a, e) in m {
                let v = f(a);
                for _ in 0..e {
                    term = term.mul(&v);
                }
            }
            out.add_assign(&term);
        }
        out
    }

    /// Enclosures of the real and imaginary parts for interval-valued atoms.
    pub fn eval_interval(&self, f: &dyn Fn(Atom) -> Interval, prec: u32) -> (Interval, Interval) {
        let mut re = Interval::zero();
        let mut im = Interval::zero();
        for (m, c) in &self.terms {
            let mut v = Interval::one();
            for &(a, e) in m {
                let x = f(a);
                for _ in 0..e {
                    v = v.mul(&x).round(prec);
                }
            }
            re = re
                .add(&v.mul(&Interval::from_rational(&c.re, prec)))
                .round(prec);
            im = im
                .add(&v.mul(&Interval::from_rational(&c.im, prec)))
                .round(prec);
        }
        (re, im)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_empty() {
                    return format!("({c})");
                }
                let mono: Vec<String> = m
                    .iter()
                    .map(|(a, e)| {
                        if *e == 1 {
                            a.to_string()
                        } else {
                            format!("{a}^{e}")
                        }
                    })
                    .collect();
                if *c == GaussQ::one() {
                    mono.join("*")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussQ::i();
        assert_eq!(i.mul(&i), GaussQ::one().neg());
        assert_eq!(GaussQ::i_pow(-1), i.neg());
        assert_eq!(
            GaussQ::new(rat(1, 1), rat(1, 1)).inv().unwrap(),
            GaussQ::new(rat(1, 2), rat(-1, 2))
        );
        assert_eq!(format!("{}", GaussQ::new(rat(0, 1), rat(1, 2))), "1/2i");
    }

    #[test]
    fn polynomial_normal_form() {
        let b = Coeff::atom(Atom::B(0, 0));
        let one = Coeff::one();
        // b(b + 1) - b^2 - b = 0
        let p = b.mul(&b.add(&one)).sub(&b.mul(&b)).sub(&b);
        assert!(p.is_zero());
        let q = b.scale(&GaussQ::i()).conj();
        assert_eq!(q, b.scale(&GaussQ::i().neg()));
        let sub = b.mul(&b).substitute(&|_| Coeff::rational(rat(-1, 2)));
        assert_eq!(sub.as_constant().unwrap(), GaussQ::real(rat(1, 4)));
    }
}
