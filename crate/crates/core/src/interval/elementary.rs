//! Certified enclosures of `ln`, `exp`, `atan`, `arg`, `sin`/`cos` and the
//! constants `ln 2`, `pi`.
//!
//! Every series is summed in interval arithmetic and closed with an explicit
//! bound on the truncated tail, so results are enclosures, not estimates.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::complex::ComplexBox;
use super::dyadic::Dyadic;
use super::real::Interval;

const GUARD: u32 = 24;

/// Sum of `z^(2k+1)/(2k+1)`, alternating when `alternate` is set.
/// Requires `|z| <= 1/sqrt(2)` so the tail is bounded by twice its first term.
fn odd_power_series(z: &Interval, alternate: bool, wp: u32) -> Interval {
    debug_assert!(z.mag() <= Dyadic::from_f64(0.7072));
    let z2 = z.square().round(wp);
    let cutoff = Dyadic::pow2(-(wp as i64) - 4);
    let mut pow = z.clone();
    let mut sum = Interval::zero();
    let mut k: i64 = 0;
    loop {
        if pow.mag() < cutoff {
            break;
        }
        let term = pow
            .div(&Interval::from_int(2 * k + 1), wp)
            .expect("odd denominator");
        sum = if alternate && k % 2 == 1 {
            sum.sub(&term)
        } else {
            sum.add(&term)
        }
        .round(wp);
        pow = pow.mul(&z2).round(wp);
        k += 1;
    }
    sum.add(&Interval::symmetric(pow.mag().mul_pow2(1)))
}

struct ConstCache(Mutex<Option<(u32, Interval)>>);

impl ConstCache {
    const fn new() -> Self {
        ConstCache(Mutex::new(None))
    }

    fn get(&self, prec: u32, compute: impl FnOnce(u32) -> Interval) -> Interval {
        let mut slot = self.0.lock().expect("constant cache poisoned");
        if let Some((p, v)) = slot.as_ref() {
            if *p >= prec {
                return v.round(prec);
            }
        }
        let v = compute(prec);
        *slot = Some((prec, v.clone()));
        v
    }
}

static LN2: ConstCache = ConstCache::new();
static PI: ConstCache = ConstCache::new();

pub fn ln2(prec: u32) -> Interval {
    LN2.get(prec, |p| {
        let wp = p + GUARD;
        let third = Interval::one().div(&Interval::from_int(3), wp).unwrap();
        odd_power_series(&third, false, wp).mul_pow2(1).round(p)
    })
}

pub fn pi(prec: u32) -> Interval {
    PI.get(prec, |p| {
        let wp = p + GUARD;
        let a = Interval::one().div(&Interval::from_int(5), wp).unwrap();
        let b = Interval::one().div(&Interval::from_int(239), wp).unwrap();
        let s = odd_power_series(&a, true, wp).scale_int(16);
        let t = odd_power_series(&b, true, wp).scale_int(4);
        s.sub(&t).round(p)
    })
}

fn ln_point(d: &Dyadic, wp: u32) -> Interval {
    debug_assert!(d.signum() > 0);
    let v = d.magnitude();
    let m0 = d.mul_pow2(-(v - 1));
    let (e, m) = if m0 >= Dyadic::from_f64(1.5) {
        (v, m0.mul_pow2(-1))
    } else {
        (v - 1, m0)
    };
    let m = Interval::point(m);
    let z = m
        .sub(&Interval::one())
        .div(&m.add(&Interval::one()), wp)
        .unwrap();
    let series = odd_power_series(&z, false, wp).mul_pow2(1);
    let ebits = 64 - (e.unsigned_abs()).leading_zeros();
    let scaled = ln2(wp + ebits).scale_int(e);
    scaled.add(&series).round(wp)
}

/// Natural logarithm; `None` unless the interval is strictly positive.
pub fn ln(x: &Interval, prec: u32) -> Option<Interval> {
    if !x.is_positive() {
        return None;
    }
    let wp = prec + GUARD;
    let lo = ln_point(x.lo(), wp);
    let hi = ln_point(x.hi(), wp);
    Some(Interval::new(lo.lo().clone(), hi.hi().clone()).round(prec))
}

fn exp_point(d: &Dyadic, wp: u32) -> Interval {
    let r = if d.is_zero() {
        0
    } else {
        (d.magnitude() + 8).max(0)
    };
    let y = Interval::point(d.mul_pow2(-r));
    let w2 = wp + r as u32 + 10;
    let cutoff = Dyadic::pow2(-(w2 as i64) - 2);
    let mut term = Interval::one();
    let mut sum = Interval::zero();
    let mut k: i64 = 0;
    while term.mag() >= cutoff {
        sum = sum.add(&term).round(w2);
        k += 1;
        term = term.mul(&y).div(&Interval::from_int(k), w2).unwrap();
    }
    let mut acc = sum.add(&Interval::symmetric(term.mag().mul_pow2(1)));
    for _ in 0..r {
        acc = acc.square().round(w2);
    }
    acc.round(wp)
}

pub fn exp(x: &Interval, prec: u32) -> Interval {
    let wp = prec + GUARD;
    let lo = exp_point(x.lo(), wp);
    let hi = exp_point(x.hi(), wp);
    Interval::new(lo.lo().clone(), hi.hi().clone()).round(prec)
}

/// `atan` on an interval of moderate size via three half-angle reductions.
fn atan_reduced(z: &Interval, wp: u32) -> Interval {
    let one = Interval::one();
    let mut z = z.clone();
    for _ in 0..3 {
        let root = one.add(&z.square()).round(wp).sqrt(wp).unwrap();
        z = z.div(&one.add(&root), wp).unwrap();
    }
    odd_power_series(&z, true, wp).mul_pow2(3).round(wp)
}

fn atan_point(d: &Dyadic, wp: u32) -> Interval {
    let one = Dyadic::one();
    if d.abs() <= one {
        return atan_reduced(&Interval::point(d.clone()), wp);
    }
    let inv = Interval::point(d.clone()).recip(wp).unwrap();
    let half_pi = pi(wp).mul_pow2(-1);
    let a = atan_reduced(&inv, wp);
    if d.signum() > 0 {
        half_pi.sub(&a)
    } else {
        half_pi.neg().sub(&a)
    }
}

pub fn atan(x: &Interval, prec: u32) -> Interval {
    let wp = prec + GUARD;
    let lo = atan_point(x.lo(), wp);
    let hi = atan_point(x.hi(), wp);
    Interval::new(lo.lo().clone(), hi.hi().clone()).round(prec)
}

fn arg_point(x: &Dyadic, y: &Dyadic, wp: u32) -> Interval {
    let xs = x.signum();
    let ys = y.signum();
    if xs > 0 {
        let q = Interval::point(y.clone())
            .div(&Interval::point(x.clone()), wp)
            .unwrap();
        return atan(&q, wp);
    }
    if ys == 0 {
        return pi(wp);
    }
    let q = Interval::point(x.clone())
        .div(&Interval::point(y.clone()), wp)
        .unwrap();
    let half_pi = pi(wp).mul_pow2(-1);
    let a = atan(&q, wp);
    if ys > 0 {
        half_pi.sub(&a)
    } else {
        half_pi.neg().sub(&a)
    }
}

/// Principal argument in `(-pi, pi]`. `None` when the box contains zero or
/// meets the branch cut along the negative real axis from both sides.
pub fn arg(z: &ComplexBox, prec: u32) -> Option<Interval> {
    if z.contains_zero() {
        return None;
    }
    if z.re.lo().signum() < 0 && z.im.lo().signum() < 0 && z.im.hi().signum() >= 0 {
        return None;
    }
    let wp = prec + GUARD;
    let corners = [
        (z.re.lo(), z.im.lo()),
        (z.re.lo(), z.im.hi()),
        (z.re.hi(), z.im.lo()),
        (z.re.hi(), z.im.hi()),
    ];
    let mut acc: Option<Interval> = None;
    for (x, y) in corners {
        let a = arg_point(x, y, wp);
        acc = Some(match acc {
            None => a,
            Some(h) => h.hull(&a),
        });
    }
    acc.map(|a| a.round(prec))
}

/// Simultaneous enclosures of `sin x` and `cos x`.
pub fn sin_cos(x: &Interval, prec: u32) -> (Interval, Interval) {
    const HALVINGS: i64 = 12;
    let wp = prec + GUARD;
    let mag = x.mag().magnitude().max(0) as u32;
    let two_pi = pi(wp + mag + 4).mul_pow2(1);
    let turns = (x.mid().to_f64() / std::f64::consts::TAU).round();
    let k = BigInt::from(turns.to_i64().expect("angle too large for reduction"));
    let reduced = x.sub(&two_pi.mul(&Interval::from_int(k))).round(wp + mag);
    let y = reduced.mul_pow2(-HALVINGS);
    let w2 = wp + 3 * HALVINGS as u32;
    let cutoff = Dyadic::pow2(-(w2 as i64) - 2);
    let mut term = Interval::one();
    let mut sin = Interval::zero();
    let mut cos = Interval::zero();
    let mut n: i64 = 0;
    while term.mag() >= cutoff {
        match n % 4 {
            0 => cos = cos.add(&term),
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            _ => sin = sin.sub(&term),
        }
        cos = cos.round(w2);
        sin = sin.round(w2);
        n += 1;
        term = term.mul(&y).div(&Interval::from_int(n), w2).unwrap();
    }
    let tail = Interval::symmetric(term.mag().mul_pow2(1));
    sin = sin.add(&tail);
    cos = cos.add(&tail);
    let one = Interval::one();
    for _ in 0..HALVINGS {
        let s2 = sin.mul(&cos).mul_pow2(1).round(w2);
        let c2 = one.sub(&sin.square().mul_pow2(1)).round(w2);
        sin = s2;
        cos = c2;
    }
    let unit = Interval::new(Dyadic::from_int(-1), Dyadic::one());
    let clamp = |v: Interval| v.intersect(&unit).unwrap_or(v).round(prec);
    (clamp(sin), clamp(cos))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(iv: &Interval, v: f64) -> bool {
        (iv.to_f64() - v).abs() < 1e-14 * v.abs().max(1.0)
    }

    #[test]
    fn constants_match_f64() {
        assert!(close(&pi(200), std::f64::consts::PI));
        assert!(close(&ln2(200), std::f64::consts::LN_2));
        assert!(pi(300).width() < Dyadic::pow2(-290));
        // Cached higher-precision value is reused when lower precision is requested.
        assert!(pi(100).width() < Dyadic::pow2(-95));
    }

    #[test]
    fn elementary_functions_match_f64() {
        let x = Interval::point(Dyadic::from_f64(0.7767063540459771));
        assert!(close(&ln(&x, 128).unwrap(), 0.7767063540459771f64.ln()));
        assert!(close(&exp(&x, 128), 0.7767063540459771f64.exp()));
        for v in [-7.5, -1.0, -0.3, 0.0, 0.3, 1.0, 2.5, 40.0] {
            let p = Interval::point(Dyadic::from_f64(v));
            assert!(close(&atan(&p, 128), f64::atan(v)), "atan {v}");
            assert!(close(&exp(&p, 128), f64::exp(v)), "exp {v}");
            let (s, c) = sin_cos(&p, 128);
            assert!(close(&s, v.sin()) && close(&c, v.cos()), "sincos {v}");
        }
    }

    #[test]
    fn log_and_exp_are_inverse_at_high_precision() {
        let x = Interval::point(Dyadic::from_f64(3.25));
        let l = ln(&x, 600).unwrap();
        let back = exp(&l, 600);
        assert!(back.contains(x.lo()));
        assert!(back.width() < Dyadic::pow2(-580));
    }

    #[test]
    fn arg_quadrants_and_branch_cut() {
        let pt = |a: f64, b: f64| ComplexBox::point(Dyadic::from_f64(a), Dyadic::from_f64(b));
        for (a, b) in [
            (1.0, 1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
            (0.5, -2.0),
            (-3.0, 0.0),
            (0.0, 2.0),
        ] {
            let got = arg(&pt(a, b), 100).unwrap();
            assert!(close(&got, f64::atan2(b, a)), "arg({a},{b})");
        }
        let straddle = ComplexBox::new(
            Interval::new(Dyadic::from_f64(-2.0), Dyadic::from_f64(-1.0)),
            Interval::new(Dyadic::from_f64(-0.1), Dyadic::from_f64(0.1)),
        );
        assert!(arg(&straddle, 64).is_none());
    }
}
