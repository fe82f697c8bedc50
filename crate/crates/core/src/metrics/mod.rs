//! Existence of lcK, pluriclosed, balanced and lcb metrics, each decided
//! arithmetically and cross-checked against the symbolic calculus.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cohomology::{betti3, dolbeault_dim};
use crate::dga::{
    balanced_obstruction, lee_form, pluriclosed_obstruction, verify_lcb, Atom, Coeff,
    StructureConstants,
};
use crate::embeddings::{certify_many, ExponentVector, RelationStatus, RelationVerdict};
use crate::error::{Error, Result};
use crate::exactnum::rat;
use crate::interval::{Decimal, Dyadic, Interval, REPORT_DIGITS};
use crate::otstruct::OTData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MetricKind {
    #[serde(rename = "lcK")]
    Lck,
    #[serde(rename = "pluriclosed")]
    Pluriclosed,
    #[serde(rename = "balanced")]
    Balanced,
    #[serde(rename = "lcb")]
    Lcb,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// `permutation[i-1] = k_i`: `sigma_{k_i}(u) |sigma_{s+i}(u)|^2 = 1` for all `u`.
    Permutation { permutation: Vec<usize> },
    /// Coefficients of `m_k` (`k <= s`) in `d Omega_0` for `Omega_0 = i^(n-1) sum m_{k kbar}`;
    /// nonzero for every positive `Omega_0`.
    BalancedObstruction {
        m_coefficients: Vec<String>,
        residual_basis: String,
    },
    Lcb {
        /// Generator name to coefficient of the Lee form.
        lee_form: BTreeMap<String, String>,
        /// `exponents[k-1][i-1] = -b_ki`: the `dz_i ^ dzbar_i` coefficient of the
        /// metric is `prod_k (Im w_k)^(exponents[k-1][i-1])`.
        exponents: Vec<Vec<Decimal>>,
        residual: String,
        d_theta: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricVerdict {
    pub kind: MetricKind,
    pub exists: bool,
    pub witness: Option<Witness>,
    pub certificates: Vec<RelationVerdict>,
}

impl MetricVerdict {
    fn new(kind: MetricKind, exists: bool) -> Self {
        MetricVerdict {
            kind,
            exists,
            witness: None,
            certificates: Vec::new(),
        }
    }
}

/// Exponent vector for `|sigma_{s+i}(u)|^2 / |sigma_{s+i'}(u)|^2`.
pub fn modulus_ratio(data: &OTData, i: usize, i2: usize) -> ExponentVector {
    let (s, t) = (data.s(), data.t());
    let mut e = ExponentVector::zero(data.n());
    e.0[s + i - 1] = 1;
    e.0[s + t + i - 1] = 1;
    e.0[s + i2 - 1] = -1;
    e.0[s + t + i2 - 1] = -1;
    e
}

/// All complex-embedding moduli agree on every generator. Decided by
/// certified pairwise relations and cross-checked against equality of the
/// columns of `B`.
pub fn decide_lck(data: &OTData) -> Result<MetricVerdict> {
    let t = data.t();
    let mut pairs = Vec::new();
    for i in 1..=t {
        for i2 in i + 1..=t {
            pairs.push((i, i2));
        }
    }
    let vectors: Vec<ExponentVector> = pairs
        .iter()
        .map(|&(i, i2)| modulus_ratio(data, i, i2))
        .collect();
    let certificates = certify_many(data.system(), data.generators(), &vectors)?;
    for (&(i, i2), v) in pairs.iter().zip(&certificates) {
        let columns_overlap = (0..data.s()).all(|k| data.b[k][i - 1].overlaps(&data.b[k][i2 - 1]));
        let consistent = match v.status {
            RelationStatus::Verified => columns_overlap,
            _ => !columns_overlap,
        };
        if !consistent {
            return Err(Error::Inconsistency(format!(
                "columns {i} and {i2} of B disagree with the certified modulus relation ({:?})",
                v.status
            )));
        }
    }
    let exists = certificates
        .iter()
        .all(|v| v.status == RelationStatus::Verified);
    Ok(MetricVerdict {
        certificates,
        ..MetricVerdict::new(MetricKind::Lck, exists)
    })
}

fn within(x: &Interval, v: i64, tol: &Dyadic) -> bool {
    x.sub(&Interval::from_int(v)).mag() < *tol
}

/// Screening tolerance `2^(-prec/4)` for entries of `B`.
pub fn screening_tolerance(data: &OTData) -> Dyadic {
    Dyadic::pow2(-(data.precision() as i64 / 4))
}

/// The permutation `i -> k_i` read off `B = -P` by screening, if any.
pub fn screen_permutation(data: &OTData) -> Option<Vec<usize>> {
    let (s, t) = (data.s(), data.t());
    if s != t {
        return None;
    }
    let tol = screening_tolerance(data);
    let mut perm = Vec::with_capacity(t);
    for i in 0..t {
        let k = (0..s).find(|&k| within(&data.b[k][i], -1, &tol))?;
        if !(0..s).all(|r| r == k || within(&data.b[r][i], 0, &tol)) {
            return None;
        }
        if perm.contains(&(k + 1)) {
            return None;
        }
        perm.push(k + 1);
    }
    Some(perm)
}

/// `s = t` and, after relabeling, `sigma_i(u) |sigma_{s+i}(u)|^2 = 1` for all `u`.
/// The relabeling is screened from `B` and then certified exactly.
pub fn decide_pluriclosed(data: &OTData) -> Result<MetricVerdict> {
    let Some(perm) = screen_permutation(data) else {
        return Ok(MetricVerdict::new(MetricKind::Pluriclosed, false));
    };
    let vectors: Vec<ExponentVector> = perm
        .iter()
        .enumerate()
        .map(|(i, &k)| data.pluriclosed_relation(k, i + 1))
        .collect();
    let certificates = certify_many(data.system(), data.generators(), &vectors)?;
    let exists = certificates
        .iter()
        .all(|v| v.status == RelationStatus::Verified);
    if exists {
        for (i, &k) in perm.iter().enumerate() {
            for r in 0..data.s() {
                let expected = if r + 1 == k { -1 } else { 0 };
                if !data.b[r][i].contains(&Dyadic::from_int(expected)) {
                    return Err(Error::Inconsistency(format!(
                        "certified pluriclosed relation but B[{}][{}] excludes {expected}",
                        r + 1,
                        i + 1
                    )));
                }
            }
        }
    }
    Ok(MetricVerdict {
        witness: exists.then(|| Witness::Permutation { permutation: perm }),
        certificates,
        ..MetricVerdict::new(MetricKind::Pluriclosed, exists)
    })
}

fn render_coeff(c: &Coeff) -> String {
    c.as_constant()
        .map_or_else(|| c.to_string(), |q| q.to_string())
}

fn identity_coeffs(n: usize) -> Vec<Vec<Coeff>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Coeff::one() } else { Coeff::zero() })
                .collect()
        })
        .collect()
}

/// Never exists. The witness is the symbolic expansion of `d Omega_0` for
/// structure constants with the shape `(s, t)` of this manifold (symbolic in
/// `B` and `C`, so it specializes to this manifold's constants).
pub fn decide_balanced(data: &OTData) -> Result<MetricVerdict> {
    let sc = StructureConstants::symbolic(data.s(), data.t())?;
    let ob = balanced_obstruction(&sc, &identity_coeffs(data.complex_dim()))?;
    let m: Vec<&Coeff> = ob.m.iter().take(data.s()).collect();
    if m.iter().any(|c| c.is_zero()) {
        return Err(Error::Inconsistency("balanced obstruction vanishes".into()));
    }
    Ok(MetricVerdict {
        witness: Some(Witness::BalancedObstruction {
            m_coefficients: m.iter().map(|c| render_coeff(c)).collect(),
            residual_basis: "m_k".into(),
        }),
        ..MetricVerdict::new(MetricKind::Balanced, false)
    })
}

/// Always exists, with Lee form `theta_0 = sum_k (w_k - cw_k)/(2i)`,
/// re-verified symbolically.
pub fn lcb_metric(data: &OTData) -> Result<MetricVerdict> {
    let sc = StructureConstants::symbolic(data.s(), data.t())?;
    let check = verify_lcb(&sc);
    if !check.holds {
        return Err(Error::Inconsistency(format!(
            "lcb identity fails: residual {}, d theta {}",
            check.residual, check.d_theta
        )));
    }
    let theta = lee_form(&sc.layout());
    let layout = sc.layout();
    let lee: BTreeMap<String, String> = theta
        .terms()
        .map(|(w, c)| (layout.name(w.trailing_zeros() as usize), render_coeff(c)))
        .collect();
    let exponents = data
        .b
        .iter()
        .map(|row| {
            row.iter()
                .map(|b| b.neg().to_decimal(REPORT_DIGITS))
                .collect()
        })
        .collect();
    Ok(MetricVerdict {
        witness: Some(Witness::Lcb {
            lee_form: lee,
            exponents,
            residual: check.residual,
            d_theta: check.d_theta,
        }),
        ..MetricVerdict::new(MetricKind::Lcb, true)
    })
}

/// Whether the pluriclosed obstruction for the diagonal metric `a`
/// vanishes on this manifold: `Some(true)` if identically zero,
/// `Some(false)` if some coefficient is certified nonzero, `None` if the
/// enclosures of `B` cannot decide.
pub fn obstruction_vanishes(
    data: &OTData,
    exact_b: Option<&[Vec<i64>]>,
    diag: &[i64],
) -> Result<Option<bool>> {
    let (s, t) = (data.s(), data.t());
    let a: Vec<Vec<Coeff>> = (0..s + t)
        .map(|i| {
            (0..s + t)
                .map(|j| {
                    if i == j {
                        Coeff::rational(rat(diag[i % diag.len()], 1))
                    } else {
                        Coeff::zero()
                    }
                })
                .collect()
        })
        .collect();
    if let Some(b) = exact_b {
        let rows: Vec<Vec<_>> = b
            .iter()
            .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
            .collect();
        let sc = StructureConstants::numeric_b(&rows)?;
        return Ok(Some(
            pluriclosed_obstruction(&sc, &a)?.vanishes_identically(),
        ));
    }
    let sc = StructureConstants::symbolic(s, t)?;
    let ob = pluriclosed_obstruction(&sc, &a)?;
    let prec = data.precision();
    let value = |atom: Atom| match atom {
        Atom::B(k, i) => data.b[k as usize][i as usize].clone(),
        Atom::C(..) => Interval::zero(),
    };
    let mut undecided = false;
    for c in ob.all_coefficients() {
        let (re, im) = c.eval_interval(&value, prec);
        if !re.contains_zero() || !im.contains_zero() {
            return Ok(Some(false));
        }
        undecided |= !c.is_zero();
    }
    Ok(if undecided { None } else { Some(true) })
}

/// The four verdicts together with the consistency checks that tie them to
/// each other and to the symbolic calculus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub lck: MetricVerdict,
    pub pluriclosed: MetricVerdict,
    pub balanced: MetricVerdict,
    pub lcb: MetricVerdict,
    pub surface_gate: bool,
    pub obstruction_consistent: bool,
}

/// `lcK and pluriclosed` only on surfaces (`s = t = 1`).
pub fn surface_gate(s: usize, t: usize, lck: bool, pluriclosed: bool) -> Result<()> {
    if lck && pluriclosed && (s, t) != (1, 1) {
        return Err(Error::Inconsistency(format!(
            "manifold of type ({s}, {t}) reported both lcK and pluriclosed"
        )));
    }
    Ok(())
}

pub fn classify(data: &OTData) -> Result<Classification> {
    let lck = decide_lck(data)?;
    let pluriclosed = decide_pluriclosed(data)?;
    let balanced = decide_balanced(data)?;
    let lcb = lcb_metric(data)?;
    if balanced.exists || !lcb.exists {
        return Err(Error::Inconsistency(
            "balanced/lcb verdicts violate the constant theorems".into(),
        ));
    }
    if pluriclosed.exists && data.s() != data.t() {
        return Err(Error::Inconsistency(
            "pluriclosed verdict with s != t".into(),
        ));
    }
    surface_gate(data.s(), data.t(), lck.exists, pluriclosed.exists)?;
    let exact_b = match &pluriclosed.witness {
        Some(Witness::Permutation { permutation }) => {
            Some(minus_permutation(data.s(), permutation))
        }
        _ => None,
    };
    let vanishes = obstruction_vanishes(data, exact_b.as_deref(), &[1, 2, 3])?;
    if vanishes != Some(pluriclosed.exists) {
        return Err(Error::Inconsistency(format!(
            "pluriclosed verdict {} but the symbolic obstruction gives {vanishes:?}",
            pluriclosed.exists
        )));
    }
    Ok(Classification {
        lck,
        pluriclosed,
        balanced,
        lcb,
        surface_gate: true,
        obstruction_consistent: true,
    })
}

/// `-P` for the permutation `i -> k_i`: entry `(k_i, i)` is `-1`.
pub fn minus_permutation(s: usize, perm: &[usize]) -> Vec<Vec<i64>> {
    let mut b = vec![vec![0; perm.len()]; s];
    for (i, &k) in perm.iter().enumerate() {
        b[k - 1][i] = -1;
    }
    b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dim4Classification {
    pub pluriclosed: bool,
    pub b3: u64,
    pub h21: u64,
    pub equivalent: bool,
}

/// In complex dimension 4: pluriclosed, `b_3 = 2` and `h^{2,1} = 2` are
/// computed independently and must agree.
pub fn classify_dim4(data: &OTData) -> Result<Dim4Classification> {
    if data.complex_dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            got: data.complex_dim(),
        });
    }
    let pluriclosed = decide_pluriclosed(data)?.exists;
    let b3 = betti3(data)?;
    let h21 = dolbeault_dim(data, 2, 1)?;
    let equivalent = pluriclosed == (b3 == 2) && pluriclosed == (h21 == 2);
    if !equivalent {
        return Err(Error::Inconsistency(format!(
            "dimension 4: pluriclosed = {pluriclosed}, b3 = {b3}, h21 = {h21}"
        )));
    }
    Ok(Dim4Classification {
        pluriclosed,
        b3,
        h21,
        equivalent,
    })
}
