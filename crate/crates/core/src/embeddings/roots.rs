//! Root isolation: Sturm bisection for the real roots, companion-matrix
//! estimates polished by Newton and certified by the Krawczyk test for the
//! non-real ones.

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{Poly, Rational};
use crate::interval::{ComplexBox, Dyadic, Interval};

/// Sturm sequence `f, f', -rem(...), ...`.
pub(crate) fn sturm_sequence(f: &Poly) -> Vec<Poly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_variations(seq: &[Poly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i32;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots (exact).
#[cfg(test)]
pub(crate) fn count_real_roots(f: &Poly) -> usize {
    let seq = sturm_sequence(f);
    let r = f.cauchy_bound();
    sign_variations(&seq, &-r.clone()) - sign_variations(&seq, &r)
}

fn dyadic_of(r: &Rational) -> Dyadic {
    let d = r.denom();
    debug_assert!((d & (d - BigInt::one())).is_zero(), "non-dyadic endpoint");
    let k = d.bits() as i64 - 1;
    Dyadic::new(r.numer().clone(), -k)
}

/// Disjoint isolating intervals `(lo, hi)` with dyadic endpoints, ascending,
/// each containing exactly one real root of the squarefree `f` in its interior.
pub(crate) fn isolate_real_roots(f: &Poly) -> Vec<(Dyadic, Dyadic)> {
    let seq = sturm_sequence(f);
    let bound = f.cauchy_bound().ceil().to_integer();
    let r = Rational::from_integer(BigInt::one() << bound.bits() as usize);
    let mut out = Vec::new();
    let mut stack = vec![(-r.clone(), r)];
    while let Some((a, b)) = stack.pop() {
        let n = sign_variations(&seq, &a) - sign_variations(&seq, &b);
        match n {
            0 => {}
            1 if !f.eval(&b).is_zero() => out.push((a, b)),
            _ => {
                let two = Rational::from_integer(2.into());
                let mut m = (&a + &b) / &two;
                // Never split on a root; move the split point off it.
                while f.eval(&m).is_zero() {
                    m = (&m + &b) / &two;
                }
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out.iter()
        .map(|(a, b)| (dyadic_of(a), dyadic_of(b)))
        .collect()
}

fn sign_at(f: &Poly, x: &Dyadic) -> i32 {
    let v = f.eval(&x.to_rational());
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Shrinks an isolating interval until its width is at most `2^-target`.
/// Bisection until the interval is narrow, then interval Newton with a
/// bisection fallback whenever Newton stalls.
pub(crate) fn refine_real_root(f: &Poly, enclosure: &Interval, target: u32) -> Interval {
    let df = f.derivative();
    let goal = Dyadic::pow2(-(target as i64));
    let mut x = enclosure.clone();
    let wp = target + 32;
    let mut lo_sign = sign_at(f, x.lo());
    while x.width() > goal {
        let old_width = x.width();
        let dfx = df.eval_interval(&x, wp);
        if !dfx.contains_zero() && x.width() < Dyadic::pow2(-20) {
            let m = x.mid();
            let fm = f.eval_interval(&Interval::point(m.clone()), wp);
            let step = fm.div(&dfx, wp).expect("derivative bounded away from zero");
            let newton = Interval::point(m).sub(&step).round(wp);
            if let Some(next) = x.intersect(&newton) {
                if next.width().mul_pow2(1) <= old_width {
                    x = next;
                    continue;
                }
            }
        }
        // bisection step (exact sign evaluation)
        let m = x.mid();
        let sm = sign_at(f, &m);
        if sm == 0 {
            return Interval::point(m);
        }
        if sm == lo_sign {
            x = Interval::new(m, x.hi().clone());
        } else {
            x = Interval::new(x.lo().clone(), m);
        }
        if lo_sign == 0 {
            lo_sign = sign_at(f, x.lo());
        }
    }
    x
}

/// Floating-point estimates of all roots: eigenvalues of the companion
/// matrix, each polished by a few Newton steps.
pub(crate) fn complex_root_estimates(f: &Poly) -> Vec<Complex<f64>> {
    let monic = f.monic();
    let c = monic.to_f64_coeffs();
    let n = c.len() - 1;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i];
    }
    let eig = m.complex_eigenvalues();
    eig.iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let (mut p, mut dp) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
                for &a in c.iter().rev() {
                    dp = dp * z + p;
                    p = p * z + Complex::new(a, 0.0);
                }
                if dp.norm() == 0.0 {
                    break;
                }
                let next = z - p / dp;
                if !next.re.is_finite() || !next.im.is_finite() {
                    break;
                }
                z = next;
            }
            z
        })
        .collect()
}

fn to_box_point(re: Dyadic, im: Dyadic) -> ComplexBox {
    ComplexBox::point(re, im)
}

/// Newton iteration on a single point at growing precision.
fn polish_point(f: &Poly, df: &Poly, z0: &ComplexBox, target: u32) -> ComplexBox {
    let mut z = z0.mid();
    let mut p = 64u32;
    loop {
        p = (p * 2).min(target);
        for _ in 0..3 {
            let fz = f.eval_complex(&z, p);
            let dfz = df.eval_complex(&z, p);
            let Some(step) = fz.div(&dfz, p) else {
                return z;
            };
            z = z.sub(&step).round(p).mid();
        }
        if p >= target {
            return z;
        }
    }
}

/// Krawczyk certification of a simple complex root near `z0`. Returns a box
/// of width at most `2^-target` containing exactly one root of `f`.
pub(crate) fn certify_complex_root(f: &Poly, z0: &ComplexBox, target: u32) -> Option<ComplexBox> {
    let df = f.derivative();
    let wp = target + 40;
    let z = polish_point(f, &df, z0, wp);
    let fz = f.eval_complex(&z, wp);
    let dfz = df.eval_complex(&z, wp);
    let y = dfz.recip(wp)?.mid();
    let step = y.mul(&fz).round(wp);
    let step_mag = step.re.mag().add(&step.im.mag());
    let mut r = step_mag
        .mul_pow2(2)
        .add(&Dyadic::pow2(-(target as i64) - 8));
    let goal = Dyadic::pow2(-(target as i64));
    for _ in 0..12 {
        let rad = Interval::symmetric(r.clone());
        let dx = ComplexBox::new(rad.clone(), rad);
        let x = z.add(&dx);
        let dfx = df.eval_complex(&x, wp);
        let one_minus = ComplexBox::one().sub(&y.mul(&dfx)).round(wp);
        let k = z.sub(&step).add(&one_minus.mul(&dx)).round(wp);
        if k.strictly_inside(&x) {
            let enc = k.intersect(&x)?;
            if enc.width() <= goal {
                return Some(enc);
            }
            return None;
        }
        r = r.mul_pow2(1);
    }
    None
}

pub(crate) fn is_upper(z: &Complex<f64>) -> bool {
    z.im > 0.0
}

pub(crate) fn estimate_to_box(z: &Complex<f64>) -> ComplexBox {
    to_box_point(Dyadic::from_f64(z.re), Dyadic::from_f64(z.im))
}

/// Precision-free consistency guard on a polynomial used as a field modulus.
pub(crate) fn ensure_squarefree(f: &Poly) -> Result<()> {
    let g = f.gcd(&f.derivative());
    if g.degree().unwrap_or(0) > 0 {
        return Err(Error::RepeatedRoots(f.to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_counts() {
        assert_eq!(
            count_real_roots(&Poly::from_ints(&[1, -2, -1, 2, 0, 0, 1])),
            2
        );
        assert_eq!(count_real_roots(&Poly::from_ints(&[-1, -1, 0, 1])), 1);
        assert_eq!(count_real_roots(&Poly::from_ints(&[-2, 0, 1])), 2);
        assert_eq!(count_real_roots(&Poly::from_ints(&[1, 0, 1])), 0);
    }

    #[test]
    fn isolation_and_refinement() {
        let f = Poly::from_ints(&[-2, 0, 1]);
        let iso = isolate_real_roots(&f);
        assert_eq!(iso.len(), 2);
        let pos = Interval::new(iso[1].0.clone(), iso[1].1.clone());
        let r = refine_real_root(&f, &pos, 300);
        assert!(r.width() <= Dyadic::pow2(-300));
        let sq = r.square();
        assert!(sq.contains(&Dyadic::from_int(2)));
    }

    #[test]
    fn krawczyk_certifies_complex_root() {
        // x^3 - x - 1 has one complex-conjugate pair.
        let f = Poly::from_ints(&[-1, -1, 0, 1]);
        let est = complex_root_estimates(&f);
        let upper: Vec<_> = est.iter().filter(|z| z.im > 1e-6).collect();
        assert_eq!(upper.len(), 1);
        let b = certify_complex_root(&f, &estimate_to_box(upper[0]), 256).unwrap();
        assert!(b.width() <= Dyadic::pow2(-256));
        assert!(b.im.is_positive());
        let val = f.eval_complex(&b, 300);
        assert!(val.contains_zero());
    }
}
