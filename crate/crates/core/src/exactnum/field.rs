use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::irreducible::{irreducibility_certificate, Irreducibility, IrreducibilityProof};
use super::poly::{Poly, Rational};
use crate::error::{Error, Result};

/// How the irreducibility of the defining polynomial is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityStatus {
    Certified(IrreducibilityProof),
    Asserted,
}

/// `K = Q[x]/(f)` for a monic irreducible integer polynomial `f`.
#[derive(Debug)]
pub struct NumberField {
    poly: Poly,
    status: IrreducibilityStatus,
}

impl NumberField {
    /// Builds the field, certifying irreducibility. With `assert_irreducible`
    /// an uncertifiable polynomial is accepted (and recorded as asserted);
    /// a polynomial with a found factor is always rejected.
    pub fn new(poly: Poly, assert_irreducible: bool) -> Result<Arc<NumberField>> {
        let status = match irreducibility_certificate(&poly)? {
            Irreducibility::Certified(p) => IrreducibilityStatus::Certified(p),
            Irreducibility::Reducible(factor) => {
                return Err(Error::Reducible {
                    poly: poly.to_string(),
                    factor: factor.to_string(),
                })
            }
            Irreducibility::Unknown if assert_irreducible => IrreducibilityStatus::Asserted,
            Irreducibility::Unknown => return Err(Error::IrreducibilityUnknown(poly.to_string())),
        };
        Ok(Arc::new(NumberField { poly, status }))
    }

    pub fn from_ints(cs: &[i64]) -> Result<Arc<NumberField>> {
        NumberField::new(Poly::from_ints(cs), false)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn status(&self) -> &IrreducibilityStatus {
        &self.status
    }

    pub fn same(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
        Arc::ptr_eq(a, b) || a.poly == b.poly
    }

    pub fn elem(self: &Arc<Self>, rep: Poly) -> FieldElem {
        let rep = if rep.degree().unwrap_or(0) >= self.degree() {
            rep.rem(&self.poly)
        } else {
            rep
        };
        FieldElem {
            field: Arc::clone(self),
            rep,
        }
    }

    pub fn elem_from_ints(self: &Arc<Self>, cs: &[i64]) -> FieldElem {
        self.elem(Poly::from_ints(cs))
    }

    /// The class of `x`, i.e. the root `alpha` defining the field.
    pub fn generator(self: &Arc<Self>) -> FieldElem {
        self.elem(Poly::x())
    }

    pub fn from_rational(self: &Arc<Self>, r: Rational) -> FieldElem {
        self.elem(Poly::constant(r))
    }

    pub fn one(self: &Arc<Self>) -> FieldElem {
        self.elem(Poly::one())
    }
}

/// An element of a number field, stored as its canonical representative of
/// degree below `[K:Q]`.
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<NumberField>,
    rep: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
}

/// Dispatching form of the field operations; `b` is ignored for `Inv`.
pub fn elem_arith(a: &FieldElem, b: &FieldElem, op: FieldOp) -> Result<FieldElem> {
    match op {
        FieldOp::Add => a.add(b),
        FieldOp::Sub => a.sub(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Inv => a.inv(),
    }
}

impl FieldElem {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep == Poly::one()
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if NumberField::same(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, rep: Poly) -> FieldElem {
        self.field.elem(rep)
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.wrap(&self.rep + &other.rep))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.wrap(&self.rep - &other.rep))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.wrap((&self.rep * &other.rep).rem(self.field.poly())))
    }

    pub fn neg(&self) -> FieldElem {
        self.wrap(-&self.rep)
    }

    /// Inverse via the extended Euclidean algorithm on `rep` and `f`.
    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.rep.ext_gcd(self.field.poly());
        if g != Poly::one() {
            // Only possible when f is reducible (asserted irreducibility was wrong).
            return Err(Error::Reducible {
                poly: self.field.poly().to_string(),
                factor: g.to_string(),
            });
        }
        Ok(self.wrap(s.rem(self.field.poly())))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.field.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `N(a) = prod sigma_i(a) = Res(f, rep) / lc(f)^deg(rep)`.
    pub fn norm(&self) -> Rational {
        let f = self.field.poly();
        let r = f.resultant(&self.rep);
        let d = self.rep.degree().unwrap_or(0);
        r / super::poly::pow_rat(&f.leading(), d)
    }

    /// Matrix of multiplication by `self` on the power basis (column `j` is `self * x^j`).
    pub fn multiplication_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.field.degree();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for j in 0..n {
            let col = (&self.rep * &Poly::monomial(Rational::one(), j)).rem(self.field.poly());
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
        }
        m
    }

    /// Characteristic polynomial of multiplication by `self` (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> Poly {
        let a = self.multiplication_matrix();
        let n = a.len();
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for k in 1..=n {
            // M_k = A * M_{k-1} + c_{n-k+1} I
            let mut next = mat_mul(&a, &m);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &c[n - k + 1];
            }
            let am = mat_mul(&a, &next);
            let tr: Rational = (0..n)
                .map(|i| am[i][i].clone())
                .fold(Rational::zero(), |x, y| x + y);
            c[n - k] = -tr / Rational::from_integer((k as i64).into());
            m = next;
        }
        Poly::new(c)
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.rep.has_integer_coeffs() || self.charpoly().has_integer_coeffs()
    }

    /// `|N(a)| = 1`.
    pub fn is_unit_norm(&self) -> bool {
        !self.is_zero() && self.norm().abs().is_one()
    }
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        NumberField::same(&self.field, &other.field) && self.rep == other.rep
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rep.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep.to_string().replace('x', "a"))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
