//! Irreducibility certificates for monic integer polynomials.
//!
//! Two sufficient tests over small primes `p` not dividing the discriminant:
//! `f mod p` irreducible, or the factor-degree patterns of `f mod p` leave no
//! proper subset sum common to every prime (a rational factor of degree `d`
//! would show up as a subset sum `d` modulo every good prime). Degree-one
//! factors are found exactly via the rational root test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::{int, Poly};
use crate::error::{Error, Result};

const PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Largest constant term for which the rational root test enumerates divisors.
const DIVISOR_SEARCH_LIMIT: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IrreducibilityProof {
    LowDegreeNoRationalRoot,
    IrreducibleModPrime { prime: u64 },
    DegreePatterns { patterns: Vec<(u64, Vec<usize>)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Certified(IrreducibilityProof),
    Reducible(Poly),
    Unknown,
}

pub fn irreducibility_certificate(f: &Poly) -> Result<Irreducibility> {
    let coeffs = match f.integer_coeffs() {
        Some(c) if f.is_monic() => c,
        _ => return Err(Error::NotMonicInteger(f.to_string())),
    };
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Err(Error::NotMonicInteger(f.to_string()));
    }
    if n == 1 {
        return Ok(Irreducibility::Certified(
            IrreducibilityProof::LowDegreeNoRationalRoot,
        ));
    }
    match integer_root(&coeffs) {
        RootSearch::Found(r) => {
            return Ok(Irreducibility::Reducible(Poly::from_bigints(&[
                -r,
                BigInt::one(),
            ])))
        }
        RootSearch::None if n <= 3 => {
            return Ok(Irreducibility::Certified(
                IrreducibilityProof::LowDegreeNoRationalRoot,
            ))
        }
        _ => {}
    }
    let mut possible: Vec<bool> = (0..=n).map(|d| d > 0 && d < n).collect();
    let mut patterns = Vec::new();
    for &p in &PRIMES {
        let fp = reduce(&coeffs, p);
        if !is_squarefree(&fp, p) {
            continue;
        }
        let pattern = degree_pattern(&fp, p);
        if pattern.len() == 1 {
            return Ok(Irreducibility::Certified(
                IrreducibilityProof::IrreducibleModPrime { prime: p },
            ));
        }
        let sums = subset_sums(&pattern, n);
        for d in 1..n {
            possible[d] &= sums[d];
        }
        patterns.push((p, pattern));
        if !possible.iter().any(|&b| b) {
            return Ok(Irreducibility::Certified(
                IrreducibilityProof::DegreePatterns { patterns },
            ));
        }
    }
    Ok(Irreducibility::Unknown)
}

enum RootSearch {
    Found(BigInt),
    None,
    Skipped,
}

/// Integer root of a monic integer polynomial (the only possible rational roots).
fn integer_root(coeffs: &[BigInt]) -> RootSearch {
    let f = Poly::from_bigints(coeffs);
    let a0 = coeffs[0].abs();
    if a0.is_zero() {
        return RootSearch::Found(BigInt::zero());
    }
    let Some(a0) = a0.to_u64().filter(|&v| v <= DIVISOR_SEARCH_LIMIT) else {
        return RootSearch::Skipped;
    };
    let mut d = 1u64;
    while d * d <= a0 {
        if a0 % d == 0 {
            for cand in [d, a0 / d] {
                for sign in [1i64, -1] {
                    let r = BigInt::from(cand) * sign;
                    if f.eval(&num_rational::BigRational::from_integer(r.clone())) == int(0) {
                        return RootSearch::Found(r);
                    }
                }
            }
        }
        d += 1;
    }
    RootSearch::None
}

fn subset_sums(pattern: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in pattern {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

// Arithmetic in F_p[x], constant term first, trimmed.

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn reduce(coeffs: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(
        coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|k| (a.get(k).copied().unwrap_or(0) + p - b.get(k).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    trim(v)
}

fn fp_divrem(a: &Fp, d: &Fp, p: u64) -> (Fp, Fp) {
    let dd = d.len() - 1;
    let inv = inv_mod(*d.last().unwrap(), p);
    let mut r = a.clone();
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - dd];
    for k in (dd..r.len()).rev() {
        let c = r[k] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &dc) in d.iter().enumerate() {
            r[k - dd + j] = (r[k - dd + j] + p - c * dc % p) % p;
        }
        q[k - dd] = c;
    }
    r.truncate(dd);
    (trim(q), trim(r))
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        a.iter_mut().for_each(|c| *c = *c * inv % p);
    }
    a
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| (k as u64 % p) * c % p)
            .collect(),
    )
}

fn is_squarefree(f: &Fp, p: u64) -> bool {
    let d = fp_derivative(f, p);
    !d.is_empty() && fp_gcd(f, &d, p).len() == 1
}

fn fp_powmod(base: &Fp, mut e: u64, m: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let mut b = fp_divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            result = fp_divrem(&fp_mul(&result, &b, p), m, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    result
}

/// Degrees of the irreducible factors of a squarefree `f` over F_p
/// (distinct-degree factorization).
fn degree_pattern(f: &Fp, p: u64) -> Vec<usize> {
    let x: Fp = vec![0, 1];
    let mut g = f.clone();
    let mut h = x.clone();
    let mut degs = Vec::new();
    let mut d = 1;
    while 2 * d <= g.len() - 1 {
        h = fp_powmod(&h, p, &g, p);
        let c = fp_gcd(&g, &fp_sub(&h, &x, p), p);
        let cd = c.len() - 1;
        if cd > 0 {
            degs.extend(std::iter::repeat(d).take(cd / d));
            g = fp_divrem(&g, &c, p).0;
            h = fp_divrem(&h, &g, p).1;
        }
        d += 1;
    }
    if g.len() > 1 {
        degs.push(g.len() - 1);
    }
    degs.sort_unstable();
    degs
}
