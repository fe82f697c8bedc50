//! Scans families of monic integer polynomials for OT manifolds carrying a
//! pluriclosed or lcK metric, with unit groups assembled from low-height
//! units.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::betti3;
use crate::embeddings::{combinations, precision_cap, EmbeddingSystem};
use crate::error::{Error, Result};
use crate::exactnum::{FieldElem, NumberField, Poly};
use crate::metrics::{classify, Classification, Witness};
use crate::otstruct::{check_totally_positive, OTData};

/// Polynomials handed to the thread pool at a time; the checkpoint advances
/// per chunk.
pub const CHUNK: u64 = 16;

/// `coefficients[k] = [lo, hi]` bounds the coefficient of `x^k`; the
/// polynomial is monic of degree `coefficients.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub coefficients: Vec<[i64; 2]>,
}

impl Family {
    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    pub fn len(&self) -> u64 {
        if self.coefficients.is_empty() {
            return 0;
        }
        self.coefficients
            .iter()
            .map(|&[lo, hi]| if hi < lo { 0 } else { (hi - lo + 1) as u64 })
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coefficients `c_0, ..., c_{d-1}, 1` of the `index`-th member;
    /// `c_0` varies fastest.
    pub fn member(&self, mut index: u64) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.degree() + 1);
        for &[lo, hi] in &self.coefficients {
            let width = (hi - lo + 1) as u64;
            out.push(lo + (index % width) as i64);
            index /= width;
        }
        out.push(1);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "pluriclosed")]
    Pluriclosed,
    #[serde(rename = "lcK")]
    Lck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitStrategy {
    /// Representatives in `alpha`, used for every field of the family.
    GivenList(Vec<Vec<i64>>),
    LowHeightScan {
        bound: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_polynomials: Option<u64>,
    pub max_hits: Option<u64>,
    /// Unit subsets tried per field.
    #[serde(default = "default_max_subsets")]
    pub max_subsets: usize,
    /// Wall-clock budget, checked between chunks. Runs that hit it are
    /// truncated and no longer reproducible.
    pub max_seconds: Option<f64>,
}

fn default_max_subsets() -> usize {
    4096
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_polynomials: None,
            max_hits: None,
            max_subsets: default_max_subsets(),
            max_seconds: None,
        }
    }
}

fn default_precision() -> u32 {
    256
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub family: Family,
    pub target: Target,
    pub unit_strategy: UnitStrategy,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default)]
    pub assert_irreducible: bool,
}

/// A totally positive unit and where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateUnit {
    pub unit: FieldElem,
    /// Representative that was probed.
    pub source: Vec<i64>,
    /// The probed element had a negative real embedding and was squared.
    pub squared: bool,
}

fn int_coeffs(p: &Poly) -> Result<Vec<i64>> {
    let cs = p
        .integer_coeffs()
        .ok_or_else(|| Error::NotIntegral(p.to_string()))?;
    cs.iter()
        .map(|c| {
            c.to_i64()
                .ok_or_else(|| Error::Precondition(format!("coefficient {c} exceeds 64 bits")))
        })
        .collect()
}

/// The unit behind `rep`, squared if some real embedding is negative;
/// `None` for non-units and for `+-1`.
fn normalize_unit(sys: &EmbeddingSystem, rep: &[i64]) -> Result<Option<CandidateUnit>> {
    let field = sys.field();
    let u = field.elem_from_ints(rep);
    if u.is_zero() || !u.is_unit_norm() {
        return Ok(None);
    }
    let (unit, squared) = if check_totally_positive(sys, &u)? {
        (u, false)
    } else {
        (u.mul(&u)?, true)
    };
    if unit.is_one() {
        return Ok(None);
    }
    Ok(Some(CandidateUnit {
        unit,
        source: rep.to_vec(),
        squared,
    }))
}

fn candidate_key(c: &CandidateUnit) -> (bool, usize, usize, Vec<u64>, Vec<i64>) {
    let nonzero = c.source.iter().filter(|&&x| x != 0).count();
    let degree = c.source.iter().rposition(|&x| x != 0).unwrap_or(0);
    (
        c.squared,
        nonzero,
        degree,
        c.source.iter().map(|x| x.unsigned_abs()).collect(),
        c.source.iter().map(|x| -x).collect(),
    )
}

/// Totally positive units with integer representatives in `[-bound, bound]`,
/// deduplicated, in canonical order: unsquared first, then by number of
/// nonzero coefficients, degree and coefficient size.
pub fn candidate_units(sys: &EmbeddingSystem, bound: i64) -> Result<Vec<CandidateUnit>> {
    if bound < 1 {
        return Err(Error::Precondition(format!(
            "unit bound must be at least 1, got {bound}"
        )));
    }
    let n = sys.n();
    let width = (2 * bound + 1) as u64;
    let total = width
        .checked_pow(n as u32)
        .ok_or_else(|| Error::Precondition("unit scan too large".into()))?;
    let found: Vec<Option<CandidateUnit>> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut rep = Vec::with_capacity(n);
            for _ in 0..n {
                rep.push((idx % width) as i64 - bound);
                idx /= width;
            }
            normalize_unit(sys, &rep)
        })
        .collect::<Result<_>>()?;
    Ok(dedup_sorted(found.into_iter().flatten().collect()))
}

fn dedup_sorted(mut units: Vec<CandidateUnit>) -> Vec<CandidateUnit> {
    units.sort_by_key(candidate_key);
    let mut seen = std::collections::HashSet::new();
    units.retain(|c| seen.insert(c.unit.clone()));
    units
}

/// Candidates from explicit representatives; non-units are dropped.
pub fn given_units(sys: &EmbeddingSystem, reps: &[Vec<i64>]) -> Result<Vec<CandidateUnit>> {
    let mut out = Vec::new();
    for rep in reps {
        if let Some(c) = normalize_unit(sys, rep)? {
            out.push(c);
        }
    }
    Ok(dedup_sorted(out))
}

/// Admissible `s`-subsets of the candidates (lexicographic in candidate
/// order), at most `max_subsets` tried. Subsets whose admissibility cannot
/// be decided below the system's cap are skipped.
pub fn assemble_admissible(
    sys: &Arc<EmbeddingSystem>,
    candidates: &[CandidateUnit],
    max_subsets: usize,
) -> Result<Vec<(Vec<usize>, OTData)>> {
    let mut out = Vec::new();
    for subset in combinations(candidates.len(), sys.s())
        .into_iter()
        .take(max_subsets)
    {
        let gens = subset
            .iter()
            .map(|&i| candidates[i - 1].unit.clone())
            .collect();
        match OTData::from_system(Arc::clone(sys), gens) {
            Ok(d) => out.push((subset, d)),
            Err(Error::NotAdmissible(_) | Error::PrecisionCap { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitRecord {
    pub rep: Vec<i64>,
    pub source: Vec<i64>,
    pub squared: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchHit {
    pub index: u64,
    /// `c_0, ..., c_d`.
    pub polynomial: Vec<i64>,
    pub signature: [usize; 2],
    pub units: Vec<UnitRecord>,
    pub target: Target,
    pub lck: bool,
    pub pluriclosed: bool,
    pub pluriclosed_witness: Option<Vec<usize>>,
    pub b3: u64,
    pub precision: u32,
    pub recheck_precision: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evaluation {
    Hit(Box<SearchHit>),
    Skip {
        index: u64,
        polynomial: Vec<i64>,
        reason: String,
    },
}

fn meets(target: Target, c: &Classification) -> bool {
    match target {
        Target::Pluriclosed => c.pluriclosed.exists,
        Target::Lck => c.lck.exists,
    }
}

fn witness_of(c: &Classification) -> Option<Vec<usize>> {
    match &c.pluriclosed.witness {
        Some(Witness::Permutation { permutation }) => Some(permutation.clone()),
        _ => None,
    }
}

fn skip(index: u64, polynomial: &[i64], reason: impl Into<String>) -> Evaluation {
    Evaluation::Skip {
        index,
        polynomial: polynomial.to_vec(),
        reason: reason.into(),
    }
}

/// Screens and analyzes one member of the family. Every hit is classified
/// again from scratch at doubled precision and must agree.
pub fn evaluate(spec: &SearchSpec, index: u64) -> Evaluation {
    let poly = spec.family.member(index);
    match evaluate_inner(spec, index, &poly) {
        Ok(e) => e,
        Err(e) => skip(index, &poly, format!("{}: {e}", e.code())),
    }
}

fn evaluate_inner(spec: &SearchSpec, index: u64, coeffs: &[i64]) -> Result<Evaluation> {
    let field = NumberField::new(Poly::from_ints(coeffs), spec.assert_irreducible)?;
    let cap = precision_cap().min(4 * spec.precision);
    let sys = Arc::new(EmbeddingSystem::new(&field, spec.precision, cap)?);
    let (s, t) = (sys.s(), sys.t());
    if s == 0 || t == 0 {
        return Ok(skip(
            index,
            coeffs,
            format!("signature ({s}, {t}) is not of OT type"),
        ));
    }
    if spec.target == Target::Pluriclosed && s != t {
        return Ok(skip(
            index,
            coeffs,
            format!("signature ({s}, {t}) has s != t"),
        ));
    }
    let candidates = match &spec.unit_strategy {
        UnitStrategy::GivenList(reps) => given_units(&sys, reps)?,
        UnitStrategy::LowHeightScan { bound } => candidate_units(&sys, *bound)?,
    };
    if candidates.len() < s {
        return Ok(skip(
            index,
            coeffs,
            format!("{} unit candidates for s = {s}", candidates.len()),
        ));
    }
    let mut admissible = 0usize;
    for subset in combinations(candidates.len(), s)
        .into_iter()
        .take(spec.limits.max_subsets)
    {
        let chosen: Vec<&CandidateUnit> = subset.iter().map(|&i| &candidates[i - 1]).collect();
        let gens: Vec<FieldElem> = chosen.iter().map(|c| c.unit.clone()).collect();
        let data = match OTData::from_system(Arc::clone(&sys), gens.clone()) {
            Ok(d) => d,
            Err(Error::NotAdmissible(_) | Error::PrecisionCap { .. }) => continue,
            Err(e) => return Err(e),
        };
        admissible += 1;
        let c = classify(&data)?;
        if !meets(spec.target, &c) {
            continue;
        }
        let recheck_precision = 2 * spec.precision;
        let fresh = OTData::new(
            &NumberField::new(Poly::from_ints(coeffs), spec.assert_irreducible)?,
            gens,
            recheck_precision,
        )?;
        let c2 = classify(&fresh)?;
        if c2.lck.exists != c.lck.exists
            || witness_of(&c2) != witness_of(&c)
            || !meets(spec.target, &c2)
        {
            return Err(Error::Inconsistency(format!(
                "verdicts changed at {recheck_precision} bits"
            )));
        }
        let units = chosen
            .iter()
            .map(|cu| {
                Ok(UnitRecord {
                    rep: int_coeffs(cu.unit.rep())?,
                    source: cu.source.clone(),
                    squared: cu.squared,
                })
            })
            .collect::<Result<_>>()?;
        return Ok(Evaluation::Hit(Box::new(SearchHit {
            index,
            polynomial: coeffs.to_vec(),
            signature: [s, t],
            units,
            target: spec.target,
            lck: c.lck.exists,
            pluriclosed: c.pluriclosed.exists,
            pluriclosed_witness: witness_of(&c),
            b3: betti3(&data)?,
            precision: spec.precision,
            recheck_precision,
        })));
    }
    Ok(skip(
        index,
        coeffs,
        format!(
            "{} candidates, {admissible} admissible subsets, none meets the target",
            candidates.len()
        ),
    ))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub examined: u64,
    pub hits: u64,
    pub skipped: u64,
    pub truncated: bool,
}

/// Evaluates members `start..` in chunks, in parallel within a chunk, and
/// hands each chunk's evaluations to `sink` in index order together with
/// the next index to evaluate.
pub fn run_search(
    spec: &SearchSpec,
    start: u64,
    mut sink: impl FnMut(u64, &[Evaluation]) -> Result<()>,
) -> Result<SearchSummary> {
    let clock = Instant::now();
    let end = spec
        .limits
        .max_polynomials
        .map_or(spec.family.len(), |m| m.min(spec.family.len()));
    let mut summary = SearchSummary::default();
    let mut next = start;
    while next < end {
        if spec
            .limits
            .max_seconds
            .is_some_and(|m| clock.elapsed().as_secs_f64() > m)
        {
            summary.truncated = true;
            break;
        }
        let stop = (next + CHUNK).min(end);
        let mut evals: Vec<Evaluation> = (next..stop)
            .into_par_iter()
            .map(|i| evaluate(spec, i))
            .collect();
        if let Some(max) = spec.limits.max_hits {
            let mut room = max.saturating_sub(summary.hits);
            evals.retain(|e| match e {
                Evaluation::Hit(_) if room == 0 => false,
                Evaluation::Hit(_) => {
                    room -= 1;
                    true
                }
                Evaluation::Skip { .. } => true,
            });
        }
        for e in &evals {
            match e {
                Evaluation::Hit(h) => {
                    summary.hits += 1;
                    log::info!("hit at index {}: {:?}", h.index, h.polynomial);
                }
                Evaluation::Skip {
                    index,
                    polynomial,
                    reason,
                } => {
                    summary.skipped += 1;
                    log::info!("skip index {index} {polynomial:?}: {reason}");
                }
            }
        }
        summary.examined += stop - next;
        next = stop;
        sink(next, &evals)?;
        if spec.limits.max_hits.is_some_and(|m| summary.hits >= m) {
            summary.truncated = next < end;
            break;
        }
    }
    Ok(summary)
}

/// All hits, in index order.
pub fn collect_hits(spec: &SearchSpec) -> Result<Vec<SearchHit>> {
    let mut hits = Vec::new();
    run_search(spec, 0, |_, evals| {
        hits.extend(evals.iter().filter_map(|e| match e {
            Evaluation::Hit(h) => Some((**h).clone()),
            Evaluation::Skip { .. } => None,
        }));
        Ok(())
    })?;
    Ok(hits)
}

/// Resume point: members before `next_index` are done and the output file
/// held `output_len` bytes at that moment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub spec: String,
    pub next_index: u64,
    pub output_len: u64,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs the search, appending one JSON line per hit to `out`. With a
/// checkpoint path the run records its progress after every chunk; if the
/// checkpoint exists and matches the spec the run resumes from it.
pub fn run_to_file(
    spec: &SearchSpec,
    out: &Path,
    checkpoint: Option<&Path>,
    threads: Option<usize>,
) -> Result<SearchSummary> {
    let fingerprint = serde_json::to_string(spec)?;
    let resume = match checkpoint {
        Some(p) if p.exists() => {
            let ck: Checkpoint = serde_json::from_slice(&fs::read(p)?)?;
            if ck.spec != fingerprint {
                return Err(Error::Manifest(format!(
                    "checkpoint {} belongs to a different spec",
                    p.display()
                )));
            }
            Some(ck)
        }
        _ => None,
    };
    let (start, mut len) = match &resume {
        Some(ck) => {
            let f = OpenOptions::new()
                .write(true)
                .create(true)
                .truncate(false)
                .open(out)?;
            f.set_len(ck.output_len)?;
            (ck.next_index, ck.output_len)
        }
        None => {
            File::create(out)?;
            (0, 0)
        }
    };
    let mut file = OpenOptions::new().append(true).open(out)?;
    let mut run = || {
        run_search(spec, start, |next, evals| {
            for e in evals {
                if let Evaluation::Hit(h) = e {
                    let mut line = serde_json::to_vec(h)?;
                    line.push(b'\n');
                    file.write_all(&line)?;
                    len += line.len() as u64;
                }
            }
            file.flush()?;
            if let Some(p) = checkpoint {
                let ck = Checkpoint {
                    spec: fingerprint.clone(),
                    next_index: next,
                    output_len: len,
                };
                write_atomic(p, &serde_json::to_vec(&ck)?)?;
            }
            Ok(())
        })
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Single-polynomial spec for `x^6 + 2x^3 - x^2 - 2x + c`, `c` in `c_range`.
pub fn sextic_family(c_range: [i64; 2]) -> SearchSpec {
    SearchSpec {
        family: Family {
            coefficients: vec![c_range, [-2, -2], [-1, -1], [2, 2], [0, 0], [0, 0]],
        },
        target: Target::Pluriclosed,
        unit_strategy: UnitStrategy::LowHeightScan { bound: 1 },
        limits: Limits::default(),
        precision: default_precision(),
        assert_irreducible: false,
    }
}

/// Reasons per skipped member, for reporting.
pub fn skip_reasons(evals: &[Evaluation]) -> BTreeMap<u64, String> {
    evals
        .iter()
        .filter_map(|e| match e {
            Evaluation::Skip { index, reason, .. } => Some((*index, reason.clone())),
            Evaluation::Hit(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_enumeration() {
        let f = Family {
            coefficients: vec![[0, 1], [-1, 1]],
        };
        assert_eq!(f.len(), 6);
        assert_eq!(f.member(0), vec![0, -1, 1]);
        assert_eq!(f.member(1), vec![1, -1, 1]);
        assert_eq!(f.member(5), vec![1, 1, 1]);
        assert!(Family {
            coefficients: vec![[1, 0]]
        }
        .is_empty());
        assert!(Family {
            coefficients: vec![]
        }
        .is_empty());
    }

    #[test]
    fn spec_round_trip() {
        let spec = sextic_family([1, 1]);
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"low_height_scan\":{\"bound\":1}"));
        assert_eq!(serde_json::from_str::<SearchSpec>(&json).unwrap(), spec);
    }
}
