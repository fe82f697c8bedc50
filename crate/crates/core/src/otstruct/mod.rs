//! Validation of `(K, U)` and the solvmanifold structure data: the log map,
//! admissibility, and the matrices `B` and `C` defined by
//!
//! ```text
//! 2 log|sigma_{s+i}(u)| = sum_k b_ki log sigma_k(u)
//! arg sigma_{s+i}(u)    = sum_k c_ki log sigma_k(u)   (mod 2 pi)
//! ```
//!
//! for every `u` in `U`.

pub mod linalg;

use std::sync::Arc;

use crate::embeddings::{EmbeddingSystem, ExponentVector};
use crate::error::{Error, Result};
use crate::exactnum::{FieldElem, NumberField};
use crate::interval::elementary::{arg, exp, ln, pi, sin_cos};
use crate::interval::{ComplexBox, Dyadic, Interval};
use linalg::IntervalMatrix;

/// Extra bits carried by every interval computation over the requested precision.
const GUARD: u32 = 32;

/// Largest coefficient tried when searching for an exact multiplicative
/// dependence among generators.
const DEPENDENCE_BOUND: i64 = 12;

/// Enumeration budget for the dependence search.
const DEPENDENCE_BUDGET: u64 = 2_000_000;

/// Unit generators, each certified integral, of norm `+-1` and totally positive.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    generators: Vec<FieldElem>,
}

impl UnitGroup {
    pub fn new(sys: &EmbeddingSystem, generators: Vec<FieldElem>) -> Result<UnitGroup> {
        if generators.len() != sys.s() {
            return Err(Error::RankMismatch {
                expected: sys.s(),
                got: generators.len(),
            });
        }
        for u in &generators {
            if !NumberField::same(u.field(), sys.field()) {
                return Err(Error::FieldMismatch);
            }
            if !u.is_algebraic_integer() {
                return Err(Error::NotIntegral(u.to_string()));
            }
            if !u.is_unit_norm() {
                return Err(Error::NotAUnit(u.to_string()));
            }
            if !check_totally_positive(sys, u)? {
                return Err(Error::NotTotallyPositive(u.to_string()));
            }
        }
        Ok(UnitGroup { generators })
    }

    pub fn generators(&self) -> &[FieldElem] {
        &self.generators
    }
}

/// Whether every real embedding of `u` is positive, with escalation until
/// each sign is certain.
pub fn check_totally_positive(sys: &EmbeddingSystem, u: &FieldElem) -> Result<bool> {
    if u.is_zero() {
        return Ok(false);
    }
    for k in 1..=sys.s() {
        let mut p = 64u32;
        loop {
            let z = sys.embed(u, k, p)?;
            if z.re.is_negative() {
                return Ok(false);
            }
            if z.re.is_positive() {
                break;
            }
            if p >= sys.cap() {
                return Err(Error::PrecisionCap {
                    what: format!("sign of embedding {k} of {u}"),
                    cap: p,
                });
            }
            p = (p * 2).min(sys.cap());
        }
    }
    Ok(true)
}

/// `(log sigma_1(u), ..., log sigma_s(u), 2 log|sigma_{s+1}(u)|, ..., 2 log|sigma_{s+t}(u)|)`.
pub fn l_map(sys: &EmbeddingSystem, u: &FieldElem, prec: u32) -> Result<Vec<Interval>> {
    let wp = prec + GUARD;
    let mut out = Vec::with_capacity(sys.s() + sys.t());
    for k in 1..=sys.s() + sys.t() {
        let z = sys.embed(u, k, wp)?;
        let v = if k <= sys.s() {
            ln(&z.re, wp).ok_or_else(|| Error::NotTotallyPositive(u.to_string()))?
        } else {
            ln(&z.abs_sq().round(wp), wp).ok_or_else(|| Error::NotAUnit(u.to_string()))?
        };
        out.push(v);
    }
    Ok(out)
}

/// Evidence that the log lattice has full rank.
#[derive(Clone, Debug)]
pub struct AdmissibilityCertificate {
    /// Enclosure of `det L`, bounded away from zero.
    pub det: Interval,
    pub precision: u32,
}

/// Certified structure data of `X(K, U)`.
#[derive(Debug)]
pub struct OTData {
    system: Arc<EmbeddingSystem>,
    units: UnitGroup,
    precision: u32,
    /// `l[j][k] = log sigma_k(u_j)`, `s x s`.
    pub l: IntervalMatrix,
    /// `m[j][i] = 2 log|sigma_{s+i}(u_j)|`, `s x t`.
    pub m: IntervalMatrix,
    /// Principal arguments `args[j][i]` of `sigma_{s+i}(u_j)`.
    pub args: IntervalMatrix,
    pub admissibility: AdmissibilityCertificate,
    /// `b[k][i]`, `s x t`.
    pub b: IntervalMatrix,
    /// Enclosures of the row sums of `B` (each must contain `-1`).
    pub b_row_sums: Vec<Interval>,
}

/// `C` for a given branch choice, with its reconstruction residual.
#[derive(Clone, Debug)]
pub struct CMatrix {
    pub c: IntervalMatrix,
    pub branch: Vec<Vec<i64>>,
    /// Upper bound on `|rebuilt sigma_{s+i}(u_j) - sigma_{s+i}(u_j)|` over all entries.
    pub residual: Dyadic,
}

impl OTData {
    /// Isolates the roots at `precision` and builds the structure data.
    pub fn new(
        field: &Arc<NumberField>,
        generators: Vec<FieldElem>,
        precision: u32,
    ) -> Result<OTData> {
        let sys = Arc::new(crate::embeddings::isolate_roots(field, precision)?);
        OTData::from_system(sys, generators)
    }

    pub fn from_system(system: Arc<EmbeddingSystem>, generators: Vec<FieldElem>) -> Result<OTData> {
        let (s, t) = (system.s(), system.t());
        if s == 0 || t == 0 {
            return Err(Error::NotOtSignature { s, t });
        }
        let units = UnitGroup::new(&system, generators)?;
        let (precision, l, m, det) = admissible_logs(&system, &units)?;
        let wp = precision + GUARD;
        let b = linalg::solve(&l, &m, wp).ok_or_else(|| {
            Error::Inconsistency("log matrix singular after admissibility".into())
        })?;
        let b_row_sums: Vec<Interval> = b
            .iter()
            .map(|row| row.iter().fold(Interval::zero(), |acc, x| acc.add(x)))
            .collect();
        let minus_one = Dyadic::from_int(-1);
        if let Some(k) = b_row_sums.iter().position(|r| !r.contains(&minus_one)) {
            return Err(Error::Inconsistency(format!(
                "row {} of B does not sum to -1",
                k + 1
            )));
        }
        let mut args = vec![vec![Interval::zero(); t]; s];
        for (j, u) in units.generators().iter().enumerate() {
            for i in 0..t {
                let z = system.embed(u, s + i + 1, wp)?;
                args[j][i] = principal_arg(&z, wp)?;
            }
        }
        Ok(OTData {
            system,
            units,
            precision,
            l,
            m,
            args,
            admissibility: AdmissibilityCertificate { det, precision },
            b,
            b_row_sums,
        })
    }

    pub fn system(&self) -> &Arc<EmbeddingSystem> {
        &self.system
    }

    pub fn units(&self) -> &UnitGroup {
        &self.units
    }

    pub fn generators(&self) -> &[FieldElem] {
        self.units.generators()
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.system.field()
    }

    pub fn s(&self) -> usize {
        self.system.s()
    }

    pub fn t(&self) -> usize {
        self.system.t()
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    /// Complex dimension `s + t` of the manifold.
    pub fn complex_dim(&self) -> usize {
        self.s() + self.t()
    }

    /// Precision at which the log lattice was certified.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Exponent vector for `sigma_k(u) |sigma_{s+i}(u)|^2` (1-based `k`, `i`).
    pub fn pluriclosed_relation(&self, k: usize, i: usize) -> ExponentVector {
        let (s, t) = (self.s(), self.t());
        ExponentVector::indicator(self.n(), &[k, s + i, s + t + i])
    }

    /// `C` for the given branch integers (`None` means all zero).
    pub fn c_matrix(&self, branch: Option<&[Vec<i64>]>) -> Result<CMatrix> {
        compute_c_matrix(self, branch)
    }
}

/// Log matrices at the first precision where `det L` is certified nonzero.
fn admissible_logs(
    sys: &EmbeddingSystem,
    units: &UnitGroup,
) -> Result<(u32, IntervalMatrix, IntervalMatrix, Interval)> {
    let s = sys.s();
    let mut p = sys.precision();
    let mut dependence_checked = false;
    loop {
        let rows: Vec<Vec<Interval>> = units
            .generators()
            .iter()
            .map(|u| l_map(sys, u, p))
            .collect::<Result<_>>()?;
        let l: IntervalMatrix = rows.iter().map(|r| r[..s].to_vec()).collect();
        let m: IntervalMatrix = rows.iter().map(|r| r[s..].to_vec()).collect();
        let det = linalg::det(&l, p + GUARD)
            .unwrap_or_else(|| Interval::symmetric(Dyadic::pow2(1 << 20)));
        if !det.contains_zero() {
            return Ok((p, l, m, det));
        }
        if !dependence_checked {
            dependence_checked = true;
            if let Some(e) = exact_dependence(units.generators(), &rows)? {
                return Err(Error::NotAdmissible(format!(
                    "generators satisfy prod u_j^m_j = 1 with m = {e:?}"
                )));
            }
        }
        if p >= sys.cap() {
            return Err(Error::PrecisionCap {
                what: "determinant of the log lattice".into(),
                cap: p,
            });
        }
        p = (p * 2).min(sys.cap());
    }
}

/// Integer vector `m != 0` with `prod u_j^{m_j} = 1` exactly, screened on the
/// log vectors and confirmed in the field. Coefficients up to
/// `DEPENDENCE_BOUND`, smallest l1 norm first.
pub fn exact_dependence(units: &[FieldElem], logs: &[Vec<Interval>]) -> Result<Option<Vec<i64>>> {
    let r = units.len();
    let logs_f: Vec<Vec<f64>> = logs
        .iter()
        .map(|row| row.iter().map(|x| x.to_f64()).collect())
        .collect();
    let mut bound = DEPENDENCE_BOUND;
    while bound > 1 && ((2 * bound + 1) as u64).saturating_pow(r as u32) > DEPENDENCE_BUDGET {
        bound -= 1;
    }
    let scale = logs_f.iter().flatten().fold(1.0f64, |a, &b| a.max(b.abs()));
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let mut cur = vec![-bound; r];
    loop {
        let first = cur.iter().find(|&&x| x != 0);
        if first.is_some_and(|&x| x > 0) {
            let dim = logs_f.first().map_or(0, |v| v.len());
            let l1: i64 = cur.iter().map(|x| x.abs()).sum();
            let tol = 1e-6 * scale * l1 as f64;
            let close = (0..dim).all(|c| {
                let v: f64 = cur
                    .iter()
                    .zip(&logs_f)
                    .map(|(&m, row)| m as f64 * row[c])
                    .sum();
                v.abs() <= tol
            });
            if close {
                candidates.push(cur.clone());
            }
        }
        let mut k = 0;
        loop {
            if k == r {
                candidates.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
                for m in candidates {
                    let mut acc = units[0].field().one();
                    for (u, &e) in units.iter().zip(&m) {
                        acc = acc.mul(&u.pow(e)?)?;
                    }
                    if acc.is_one() {
                        return Ok(Some(m));
                    }
                }
                return Ok(None);
            }
            if cur[k] < bound {
                cur[k] += 1;
                break;
            }
            cur[k] = -bound;
            k += 1;
        }
    }
}

/// Principal argument; a box straddling the negative real axis is measured
/// as `arg(-z) + pi`, which lies in `(0, 2 pi)` (a branch shift, not an error).
fn principal_arg(z: &ComplexBox, wp: u32) -> Result<Interval> {
    if let Some(a) = arg(z, wp) {
        return Ok(a);
    }
    arg(&z.neg(), wp)
        .map(|a| a.add(&pi(wp)).round(wp))
        .ok_or_else(|| Error::PrecisionCap {
            what: "argument of a complex embedding".into(),
            cap: wp,
        })
}

/// Standalone access to the `B` matrix of an `OTData`.
pub fn compute_b_matrix(data: &OTData) -> &IntervalMatrix {
    &data.b
}

/// Solves `L C[:, i] = (Arg sigma_{s+i}(u_j) + 2 pi branch[j][i])_j` and checks
/// that `B`, `C` rebuild every complex embedding of every generator.
pub fn compute_c_matrix(data: &OTData, branch: Option<&[Vec<i64>]>) -> Result<CMatrix> {
    let (s, t) = (data.s(), data.t());
    let branch: Vec<Vec<i64>> = match branch {
        Some(b) => {
            if b.len() != s || b.iter().any(|r| r.len() != t) {
                return Err(Error::Precondition(format!(
                    "branch matrix must be {s} x {t}"
                )));
            }
            b.to_vec()
        }
        None => vec![vec![0; t]; s],
    };
    let wp = data.precision + GUARD;
    let two_pi = pi(wp).mul_pow2(1);
    let rhs: IntervalMatrix = (0..s)
        .map(|j| {
            (0..t)
                .map(|i| {
                    data.args[j][i]
                        .add(&two_pi.scale_int(branch[j][i]))
                        .round(wp)
                })
                .collect()
        })
        .collect();
    let c = linalg::solve(&data.l, &rhs, wp)
        .ok_or_else(|| Error::Inconsistency("log matrix singular after admissibility".into()))?;

    let mut residual = Dyadic::zero();
    for (j, u) in data.generators().iter().enumerate() {
        for i in 0..t {
            let mut log_mod = Interval::zero();
            let mut theta = Interval::zero();
            for k in 0..s {
                log_mod = log_mod.add(&data.b[k][i].mul(&data.l[j][k])).round(wp);
                theta = theta.add(&c[k][i].mul(&data.l[j][k])).round(wp);
            }
            let r = exp(&log_mod.mul_pow2(-1), wp);
            let (sin, cos) = sin_cos(&theta, wp);
            let rebuilt = ComplexBox::new(r.mul(&cos), r.mul(&sin)).round(wp);
            let actual = data.system.embed(u, s + i + 1, wp)?;
            let diff = rebuilt.sub(&actual);
            let d = diff.re.mag().add(&diff.im.mag());
            if d > residual {
                residual = d;
            }
        }
    }
    Ok(CMatrix {
        c,
        branch,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totally_positive_examples() {
        let k = NumberField::from_ints(&[1, -2, -1, 2, 0, 0, 1]).unwrap();
        let sys = crate::embeddings::isolate_roots(&k, 128).unwrap();
        assert!(check_totally_positive(&sys, &k.generator()).unwrap());
        assert!(check_totally_positive(&sys, &k.elem_from_ints(&[1, -1])).unwrap());
        assert!(!check_totally_positive(&sys, &k.elem_from_ints(&[-1])).unwrap());
    }

    #[test]
    fn dependence_found_for_powers() {
        let k = NumberField::from_ints(&[-1, -1, 0, 1]).unwrap();
        let sys = crate::embeddings::isolate_roots(&k, 128).unwrap();
        let u = k.generator();
        let u2 = u.pow(2).unwrap();
        let logs = vec![
            l_map(&sys, &u, 128).unwrap(),
            l_map(&sys, &u2, 128).unwrap(),
        ];
        assert_eq!(
            exact_dependence(&[u, u2], &logs).unwrap(),
            Some(vec![2, -1])
        );
    }
}
