//! Exact arithmetic: rationals, univariate polynomials over Q and the
//! quotient field `K = Q[x]/(f)`.

mod field;
mod irreducible;
mod poly;

pub use field::{elem_arith, FieldElem, FieldOp, IrreducibilityStatus, NumberField};
pub use irreducible::{irreducibility_certificate, Irreducibility, IrreducibilityProof};
pub use poly::{int, parse_rational, pow_rat, rat, CoeffRepr, Poly, Rational};

/// Exact Horner evaluation `f(x)`.
pub fn poly_eval_exact(f: &Poly, x: &Rational) -> Rational {
    f.eval(x)
}

/// `N_{K/Q}(a)`.
pub fn norm(a: &FieldElem) -> Rational {
    a.norm()
}
