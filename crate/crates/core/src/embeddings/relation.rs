//! Exact certification of multiplicative relations `prod sigma_i(u)^{e_i} = 1`.
//!
//! `beta = P(u) - 1` is an algebraic number. If it is nonzero then
//! `|beta| >= exp(-d h(beta))` where `d` bounds its degree and `h` is the
//! absolute logarithmic Weil height. Conjugates of `P(u)` permute the
//! embedding slots, so `d` is at most the number of distinct rearrangements
//! of the exponent vector, and `h(beta) <= sum|e_i| h(u) + log 2`. An
//! enclosure of `beta` strictly inside that bound therefore proves `beta = 0`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EmbeddingSystem;
use crate::error::{Error, Result};
use crate::exactnum::{FieldElem, Rational};
use crate::interval::{ComplexBox, Dyadic};

/// Exponents indexed by canonical embedding order (entry `k` is embedding `k + 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// `+1` at each of the given 1-based indices.
    pub fn indicator(n: usize, support: &[usize]) -> Self {
        let mut v = vec![0; n];
        for &i in support {
            v[i - 1] += 1;
        }
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// 1-based indices with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn l1(&self) -> u64 {
        self.0.iter().map(|e| e.unsigned_abs()).sum()
    }

    pub fn scaled(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|e| e * k).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationStatus {
    Verified,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationVerdict {
    pub relation: ExponentVector,
    pub status: RelationStatus,
    pub precision_used: u32,
    /// `|P(u) - 1| <= 2^residual_log2` for every generator; `None` when the
    /// residual is exactly zero.
    pub residual_log2: Option<i64>,
    /// Verification threshold: a nonzero `P(u) - 1` has modulus at least
    /// `2^-separation_bits`.
    pub separation_bits: u64,
}

fn bits_of(x: &BigInt) -> u64 {
    x.abs().bits().max(1)
}

/// `ceil(log2 H)` style bound on `h(u) / log 2`, from the denominator of the
/// representative and a bound on the moduli of all conjugates.
fn height_bits(u: &FieldElem) -> u64 {
    let rep = u.rep();
    let den = rep.denominator();
    let r = u.field().poly().cauchy_bound();
    let mut s = Rational::zero();
    let mut rp = Rational::one();
    for c in rep.coeffs() {
        s += c.abs() * &rp;
        rp *= &r;
    }
    let m = s.ceil().to_integer().max(BigInt::one());
    bits_of(&den) + bits_of(&m)
}

/// Number of distinct rearrangements of `e`: `n! / prod (multiplicity)!`.
fn arrangement_count(e: &ExponentVector) -> BigUint {
    let mut mult: BTreeMap<i64, u64> = BTreeMap::new();
    for &x in &e.0 {
        *mult.entry(x).or_default() += 1;
    }
    let fact = |k: u64| (1..=k).fold(BigUint::one(), |acc, j| acc * j);
    let mut denom = BigUint::one();
    for &m in mult.values() {
        denom *= fact(m);
    }
    fact(e.len() as u64).div_floor(&denom)
}

/// Bits of the separation bound for `e` over the given generators.
pub fn separation_bits(units: &[FieldElem], e: &ExponentVector) -> u64 {
    let d = arrangement_count(e).to_u64().unwrap_or(u64::MAX);
    let h = units.iter().map(height_bits).max().unwrap_or(1);
    d.saturating_mul(e.l1().saturating_mul(h).saturating_add(1))
}

fn product_box(
    sys: &EmbeddingSystem,
    u: &FieldElem,
    u_inv: &FieldElem,
    e: &ExponentVector,
    prec: u32,
) -> Result<ComplexBox> {
    let wp = prec + 32 + 2 * e.l1().min(1 << 16) as u32;
    let mut acc = ComplexBox::one();
    for (k, &ek) in e.0.iter().enumerate() {
        if ek == 0 {
            continue;
        }
        let base = if ek > 0 { u } else { u_inv };
        let z = sys.embed(base, k + 1, wp)?;
        acc = acc.mul(&z.powi(ek.unsigned_abs(), wp)).round(wp);
    }
    Ok(acc)
}

/// Decides `prod sigma_i(u)^{e_i} = 1` for every generator `u`, doubling the
/// working precision from the system's precision up to its cap.
pub fn certify_relation(
    sys: &EmbeddingSystem,
    units: &[FieldElem],
    e: &ExponentVector,
) -> Result<RelationVerdict> {
    if e.len() != sys.n() {
        return Err(Error::LengthMismatch {
            expected: sys.n(),
            got: e.len(),
        });
    }
    for u in units {
        if !u.is_unit_norm() {
            return Err(Error::NotAUnit(u.to_string()));
        }
    }
    let sep = separation_bits(units, e);
    let start = sys.precision();
    if e.is_zero() || units.is_empty() {
        return Ok(RelationVerdict {
            relation: e.clone(),
            status: RelationStatus::Verified,
            precision_used: start,
            residual_log2: None,
            separation_bits: sep,
        });
    }
    let inverses: Vec<FieldElem> = units.iter().map(|u| u.inv()).collect::<Result<_>>()?;
    // |beta|^2 < 2^(-2 sep) proves beta = 0.
    let threshold = Dyadic::pow2(-2 * sep.min(i64::MAX as u64 / 4) as i64);
    let mut prec = start;
    loop {
        let mut all_small = true;
        let mut worst: Option<i64> = None;
        for (u, ui) in units.iter().zip(&inverses) {
            let beta = product_box(sys, u, ui, e, prec)?.sub(&ComplexBox::one());
            let mag = beta.re.mag().add(&beta.im.mag());
            if !mag.is_zero() {
                let m = mag.magnitude();
                worst = Some(worst.map_or(m, |w| w.max(m)));
            }
            if !beta.contains_zero() {
                return Ok(RelationVerdict {
                    relation: e.clone(),
                    status: RelationStatus::Refuted,
                    precision_used: prec,
                    residual_log2: worst,
                    separation_bits: sep,
                });
            }
            if beta.abs_sq().hi() >= &threshold {
                all_small = false;
            }
        }
        if all_small {
            return Ok(RelationVerdict {
                relation: e.clone(),
                status: RelationStatus::Verified,
                precision_used: prec,
                residual_log2: worst,
                separation_bits: sep,
            });
        }
        if prec >= sys.cap() {
            return Ok(RelationVerdict {
                relation: e.clone(),
                status: RelationStatus::Inconclusive,
                precision_used: prec,
                residual_log2: worst,
                separation_bits: sep,
            });
        }
        let needed = (sep + 16).min(u32::MAX as u64) as u32;
        prec = (prec * 2).max(needed.min(sys.cap())).min(sys.cap());
    }
}

/// Verified relations with entries in `{0, 1..=exponent_bound}` and support
/// size at most `max_support`, sorted. An inconclusive certification is an error.
pub fn detect_relations(
    sys: &EmbeddingSystem,
    units: &[FieldElem],
    max_support: usize,
    exponent_bound: i64,
) -> Result<Vec<ExponentVector>> {
    let n = sys.n();
    if max_support > n {
        return Err(Error::Precondition(format!(
            "max_support {max_support} exceeds {n} embeddings"
        )));
    }
    let mut candidates = Vec::new();
    for size in 1..=max_support {
        for support in combinations(n, size) {
            for exps in exponent_tuples(size, exponent_bound.max(1)) {
                let mut v = vec![0; n];
                for (&i, &x) in support.iter().zip(&exps) {
                    v[i - 1] = x;
                }
                candidates.push(ExponentVector(v));
            }
        }
    }
    let mut out: Vec<ExponentVector> = certify_many(sys, units, &candidates)?
        .into_iter()
        .filter(|v| v.status == RelationStatus::Verified)
        .map(|v| v.relation)
        .collect();
    out.sort();
    Ok(out)
}

/// Certifies each vector (in parallel), keeping the input order. An
/// inconclusive certification is an error.
pub fn certify_many(
    sys: &EmbeddingSystem,
    units: &[FieldElem],
    vectors: &[ExponentVector],
) -> Result<Vec<RelationVerdict>> {
    let verdicts: Vec<RelationVerdict> = vectors
        .par_iter()
        .map(|e| certify_relation(sys, units, e))
        .collect::<Result<_>>()?;
    if let Some(v) = verdicts
        .iter()
        .find(|v| v.status == RelationStatus::Inconclusive)
    {
        return Err(Error::PrecisionCap {
            what: format!("relation {:?}", v.relation.0),
            cap: v.precision_used,
        });
    }
    Ok(verdicts)
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn exponent_tuples(k: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=bound).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::isolate_roots;
    use super::*;
    use crate::exactnum::NumberField;

    #[test]
    fn arrangement_counts() {
        assert_eq!(
            arrangement_count(&ExponentVector::indicator(6, &[1, 3, 5])),
            BigUint::from(20u32)
        );
        assert_eq!(
            arrangement_count(&ExponentVector(vec![1; 6])),
            BigUint::one()
        );
        assert_eq!(
            arrangement_count(&ExponentVector(vec![1, -1, 0])),
            BigUint::from(6u32)
        );
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(6, 3).len(), 20);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn norm_relation_matches_sign_of_norm() {
        let k = NumberField::from_ints(&[-1, -1, 0, 1]).unwrap();
        let sys = isolate_roots(&k, 128).unwrap();
        let all = ExponentVector(vec![1; 3]);
        let rho = k.generator();
        assert_eq!(
            certify_relation(&sys, &[rho.clone()], &all).unwrap().status,
            RelationStatus::Verified
        );
        // -rho has norm -1.
        let neg = rho.neg();
        assert_eq!(
            certify_relation(&sys, &[neg], &all).unwrap().status,
            RelationStatus::Refuted
        );
    }

    #[test]
    fn length_mismatch() {
        let k = NumberField::from_ints(&[-1, -1, 0, 1]).unwrap();
        let sys = isolate_roots(&k, 128).unwrap();
        assert!(matches!(
            certify_relation(&sys, &[k.generator()], &ExponentVector(vec![1, 1])),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 2
            })
        ));
    }
}
