//! Relation counts `rho_2`, `rho_3`, the third Betti number
//! `b_3 = C(s,3) + s rho_2 + rho_3`, and the Dolbeault dimensions
//!
//! ```text
//! h^{p,q} = sum_{i+j=q} C(s,i) #{ I in {1..s+t}, J in {1..t} : |I| = p, |J| = j,
//!                                 sigma_I(u) sigma_Jbar(u) = 1 for all u }
//! ```
//!
//! where `sigma_Jbar` uses the conjugate indices `s+t+j`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embeddings::{certify_many, combinations, ExponentVector, RelationStatus};
use crate::error::{Error, Result};
use crate::otstruct::OTData;

/// Subsets are unordered: each `k`-element index set is counted once.
pub fn count_rho(data: &OTData, k: usize) -> Result<u64> {
    if !(2..=3).contains(&k) {
        return Err(Error::Precondition(format!(
            "rho_k is defined for k in {{2, 3}}, got {k}"
        )));
    }
    let n = data.n();
    let vectors: Vec<ExponentVector> = combinations(n, k)
        .iter()
        .map(|set| ExponentVector::indicator(n, set))
        .collect();
    count_verified(data, &vectors)
}

fn count_verified(data: &OTData, vectors: &[ExponentVector]) -> Result<u64> {
    let verdicts = certify_many(data.system(), data.generators(), vectors)?;
    Ok(verdicts
        .iter()
        .filter(|v| v.status == RelationStatus::Verified)
        .count() as u64)
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

pub fn betti3(data: &OTData) -> Result<u64> {
    let s = data.s();
    Ok(binomial(s, 3) + s as u64 * count_rho(data, 2)? + count_rho(data, 3)?)
}

pub fn dolbeault_dim(data: &OTData, p: usize, q: usize) -> Result<u64> {
    let (s, t) = (data.s(), data.t());
    if p > s + t || q > s + t {
        return Err(Error::Precondition(format!(
            "(p, q) = ({p}, {q}) outside 0..={}",
            s + t
        )));
    }
    let n = data.n();
    let mut vectors = Vec::new();
    let mut weights = Vec::new();
    for j in 0..=q.min(t) {
        let weight = binomial(s, q - j);
        if weight == 0 {
            continue;
        }
        for big_i in combinations(s + t, p) {
            for big_j in combinations(t, j) {
                let mut support = big_i.clone();
                support.extend(big_j.iter().map(|&x| s + t + x));
                vectors.push(ExponentVector::indicator(n, &support));
                weights.push(weight);
            }
        }
    }
    // The empty product: `combinations(_, 0)` yields one empty set.
    let verdicts = certify_many(data.system(), data.generators(), &vectors)?;
    Ok(verdicts
        .iter()
        .zip(&weights)
        .filter(|(v, _)| v.status == RelationStatus::Verified)
        .map(|(_, w)| *w)
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub b3: u64,
    pub rho2: u64,
    pub rho3: u64,
    /// Keys `"h{p},{q}"`.
    pub hodge: BTreeMap<String, u64>,
}

/// All `(p, q)` with `p + q <= 3` inside the admissible range.
pub fn default_hodge_pairs(data: &OTData) -> Vec<(usize, usize)> {
    let n = data.complex_dim();
    let mut out = Vec::new();
    for p in 0..=3.min(n) {
        for q in 0..=(3 - p).min(n) {
            out.push((p, q));
        }
    }
    out
}

pub fn cohomology_table(data: &OTData, pairs: &[(usize, usize)]) -> Result<CohomologyTable> {
    let s = data.s();
    let rho2 = count_rho(data, 2)?;
    let rho3 = count_rho(data, 3)?;
    let b3 = binomial(s, 3) + s as u64 * rho2 + rho3;
    let mut hodge = BTreeMap::new();
    for &(p, q) in pairs {
        hodge.insert(format!("h{p},{q}"), dolbeault_dim(data, p, q)?);
    }
    Ok(CohomologyTable {
        b3,
        rho2,
        rho3,
        hodge,
    })
}
