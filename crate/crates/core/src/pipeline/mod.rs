//! Manifest-driven analysis: one manifest in, one deterministic report out.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology_table, default_hodge_pairs, CohomologyTable};
use crate::dga::{
    balanced_obstruction, verify_lcb, Coeff, Gen, LcbVerification, StructureConstants,
};
use crate::embeddings::isolate_roots;
use crate::error::{Error, Result};
use crate::exactnum::{IrreducibilityProof, IrreducibilityStatus, NumberField, Poly};
use crate::interval::{Decimal, DecimalComplex, Dyadic, REPORT_DIGITS};
use crate::metrics::{classify, classify_dim4, Dim4Classification, MetricVerdict, Witness};
use crate::otstruct::{compute_c_matrix, OTData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Request {
    Structure,
    Metrics,
    Cohomology,
    DgaVerify,
    Dim4,
}

pub const ALL_REQUESTS: [Request; 5] = [
    Request::Structure,
    Request::Metrics,
    Request::Cohomology,
    Request::DgaVerify,
    Request::Dim4,
];

fn default_precision() -> u32 {
    256
}

fn default_requests() -> Vec<Request> {
    ALL_REQUESTS.to_vec()
}

/// Input of one analysis. Polynomial and unit coefficients are listed from
/// the constant term up; units are representatives in `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub polynomial: Vec<i64>,
    pub units: Vec<Vec<i64>>,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default = "default_requests")]
    pub requests: Vec<Request>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge_pairs: Option<Vec<[usize; 2]>>,
    #[serde(default)]
    pub assert_irreducible: bool,
    /// Branch integers for `C`, `s x t`; zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_branch: Option<Vec<Vec<i64>>>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Manifest> {
        let m: Manifest = serde_json::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.polynomial.len() < 2 {
            return Err(Error::Manifest("polynomial needs degree at least 1".into()));
        }
        if self.precision < 32 {
            return Err(Error::Manifest(format!(
                "precision {} below 32 bits",
                self.precision
            )));
        }
        if self.requests.is_empty() {
            return Err(Error::Manifest("no requests".into()));
        }
        Ok(())
    }

    fn wants(&self, r: Request) -> bool {
        self.requests.contains(&r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IrreducibilityRecord {
    Certified { proof: IrreducibilityProof },
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub real_roots: Vec<Decimal>,
    /// Upper half-plane representatives.
    pub complex_roots: Vec<DecimalComplex>,
    /// Exact norms of the unit generators.
    pub unit_norms: Vec<String>,
    pub admissibility_det: Decimal,
    pub admissibility_precision: u32,
    pub b: Vec<Vec<Decimal>>,
    pub b_row_sums: Vec<Decimal>,
    pub c: Vec<Vec<Decimal>>,
    pub c_branch: Vec<Vec<i64>>,
    pub c_residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub lck: MetricVerdict,
    pub pluriclosed: MetricVerdict,
    pub balanced: MetricVerdict,
    pub lcb: MetricVerdict,
    pub surface_gate: bool,
    pub obstruction_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DgaReport {
    /// `d` of each generator for symbolic structure constants of this shape.
    pub structure_equations: BTreeMap<String, String>,
    pub d_squared_zero: bool,
    pub lcb: LcbVerification,
    /// Coefficients of `m_k` (`k <= s`) in `d Omega_0` for `a = I`.
    pub balanced_m: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PrecisionTrace {
    pub requested: u32,
    pub admissibility: u32,
    /// Largest precision any relation certification needed.
    pub max_certification: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub input: Manifest,
    pub s: usize,
    pub t: usize,
    pub irreducibility: IrreducibilityRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dga: Option<DgaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim4: Option<Dim4Classification>,
    pub precision_trace: PrecisionTrace,
    /// Seconds per stage; only when requested, since it breaks byte-for-byte
    /// reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
}

/// Error shape written instead of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub code: String,
    pub message: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        ErrorReport {
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

fn decimals(m: &[Vec<crate::interval::Interval>]) -> Vec<Vec<Decimal>> {
    m.iter()
        .map(|row| row.iter().map(|x| x.to_decimal(REPORT_DIGITS)).collect())
        .collect()
}

/// Builds the field and structure data of the manifest.
pub fn load(manifest: &Manifest) -> Result<OTData> {
    manifest.validate()?;
    let field = NumberField::new(
        Poly::from_ints(&manifest.polynomial),
        manifest.assert_irreducible,
    )?;
    let sys = Arc::new(isolate_roots(&field, manifest.precision)?);
    let units = manifest
        .units
        .iter()
        .map(|u| field.elem_from_ints(u))
        .collect();
    OTData::from_system(sys, units)
}

fn structure_report(data: &OTData, branch: Option<&[Vec<i64>]>) -> Result<StructureReport> {
    let sys = data.system();
    let bits = data.precision();
    let mut real_roots = Vec::new();
    for k in 1..=data.s() {
        real_roots.push(sys.root(k, bits)?.re.to_decimal(REPORT_DIGITS));
    }
    let mut complex_roots = Vec::new();
    for i in 1..=data.t() {
        complex_roots.push(sys.root(data.s() + i, bits)?.to_decimal(REPORT_DIGITS));
    }
    let c = compute_c_matrix(data, branch)?;
    Ok(StructureReport {
        real_roots,
        complex_roots,
        unit_norms: data
            .generators()
            .iter()
            .map(|u| u.norm().to_string())
            .collect(),
        admissibility_det: data.admissibility.det.to_decimal(REPORT_DIGITS),
        admissibility_precision: data.admissibility.precision,
        b: decimals(&data.b),
        b_row_sums: data
            .b_row_sums
            .iter()
            .map(|x| x.to_decimal(REPORT_DIGITS))
            .collect(),
        c: decimals(&c.c),
        c_branch: c.branch,
        c_residual: crate::interval::decimal_up(&c.residual, 3),
    })
}

fn dga_report(s: usize, t: usize) -> Result<DgaReport> {
    let sc = StructureConstants::symbolic(s, t)?;
    let layout = sc.layout();
    let gens: Vec<Gen> = (1..=s)
        .map(Gen::Omega)
        .chain((1..=t).map(Gen::Gamma))
        .chain((1..=s).map(Gen::OmegaBar))
        .chain((1..=t).map(Gen::GammaBar))
        .collect();
    let mut structure_equations = BTreeMap::new();
    let mut d_squared_zero = true;
    for g in gens {
        let dg = sc.d_generator(g);
        d_squared_zero &= sc.d(dg).is_zero();
        structure_equations.insert(format!("d {}", layout.name(layout.bit(g))), dg.render());
    }
    let identity: Vec<Vec<Coeff>> = (0..s + t)
        .map(|i| {
            (0..s + t)
                .map(|j| if i == j { Coeff::one() } else { Coeff::zero() })
                .collect()
        })
        .collect();
    let ob = balanced_obstruction(&sc, &identity)?;
    let balanced_m =
        ob.m.iter()
            .take(s)
            .map(|c| {
                c.as_constant()
                    .map_or_else(|| c.to_string(), |q| q.to_string())
            })
            .collect();
    Ok(DgaReport {
        structure_equations,
        d_squared_zero,
        lcb: verify_lcb(&sc),
        balanced_m,
    })
}

fn irreducibility(data: &OTData) -> IrreducibilityRecord {
    match data.field().status() {
        IrreducibilityStatus::Certified(p) => IrreducibilityRecord::Certified { proof: p.clone() },
        IrreducibilityStatus::Asserted => IrreducibilityRecord::Asserted,
    }
}

/// Runs every requested stage. Any error, including an inconclusive
/// certification, aborts the analysis.
pub fn analyze(manifest: &Manifest, timing: bool) -> Result<Report> {
    let mut times = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, times: &mut BTreeMap<String, f64>| {
        times.insert(name.to_string(), clock.elapsed().as_secs_f64());
        clock = Instant::now();
    };
    let data = load(manifest)?;
    lap("load", &mut times);
    let mut trace = PrecisionTrace {
        requested: manifest.precision,
        admissibility: data.admissibility.precision,
        max_certification: 0,
    };
    let structure = if manifest.wants(Request::Structure) {
        let r = structure_report(&data, manifest.c_branch.as_deref())?;
        lap("structure", &mut times);
        Some(r)
    } else {
        None
    };
    let metrics = if manifest.wants(Request::Metrics) {
        let c = classify(&data)?;
        for v in [&c.lck, &c.pluriclosed, &c.balanced, &c.lcb] {
            for cert in &v.certificates {
                trace.max_certification = trace.max_certification.max(cert.precision_used);
            }
        }
        lap("metrics", &mut times);
        Some(MetricsReport {
            lck: c.lck,
            pluriclosed: c.pluriclosed,
            balanced: c.balanced,
            lcb: c.lcb,
            surface_gate: c.surface_gate,
            obstruction_consistent: c.obstruction_consistent,
        })
    } else {
        None
    };
    let cohomology = if manifest.wants(Request::Cohomology) {
        let pairs: Vec<(usize, usize)> = match &manifest.hodge_pairs {
            Some(p) => p.iter().map(|&[a, b]| (a, b)).collect(),
            None => default_hodge_pairs(&data),
        };
        let table = cohomology_table(&data, &pairs)?;
        lap("cohomology", &mut times);
        Some(table)
    } else {
        None
    };
    let dga = if manifest.wants(Request::DgaVerify) {
        let r = dga_report(data.s(), data.t())?;
        if !r.d_squared_zero || !r.lcb.holds {
            return Err(Error::Inconsistency("symbolic verification failed".into()));
        }
        lap("dga", &mut times);
        Some(r)
    } else {
        None
    };
    let dim4 = if manifest.wants(Request::Dim4) && data.complex_dim() == 4 {
        let r = classify_dim4(&data)?;
        lap("dim4", &mut times);
        Some(r)
    } else {
        None
    };
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        input: manifest.clone(),
        s: data.s(),
        t: data.t(),
        irreducibility: irreducibility(&data),
        structure,
        metrics,
        cohomology,
        dga,
        dim4,
        precision_trace: trace,
        timing: timing.then_some(times),
    })
}

pub const SEXTIC_MANIFEST: &str = include_str!("../../data/sextic.json");
pub const CUBIC_MANIFEST: &str = include_str!("../../data/inoue_cubic.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checklist {
    pub precision: u32,
    pub items: Vec<CheckItem>,
}

impl Checklist {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.status == CheckStatus::Pass)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        let status = if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.items.push(CheckItem {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn error(&mut self, name: &str, e: &Error) {
        let status = if matches!(e, Error::PrecisionCap { .. }) {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Fail
        };
        self.items.push(CheckItem {
            name: name.into(),
            status,
            detail: e.to_string(),
        });
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            let tag = match i.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!("[{tag}] {}: {}\n", i.name, i.detail));
        }
        out
    }
}

fn permutation_witness(v: &MetricVerdict) -> Option<Vec<usize>> {
    match &v.witness {
        Some(Witness::Permutation { permutation }) => Some(permutation.clone()),
        _ => None,
    }
}

fn show_permutation(w: &Option<Vec<usize>>) -> String {
    match w {
        Some(p) => {
            let maps: Vec<String> = p
                .iter()
                .enumerate()
                .map(|(i, k)| format!("{} -> {k}", i + 1))
                .collect();
            maps.join(", ")
        }
        None => "no witness".into(),
    }
}

fn sextic_checks(list: &mut Checklist, manifest: &Manifest) -> Result<()> {
    let data = load(manifest)?;
    list.check(
        "sextic: signature (2, 2)",
        (data.s(), data.t()) == (2, 2),
        format!("({}, {})", data.s(), data.t()),
    );
    let half = crate::interval::Interval::from_rational(&crate::exactnum::rat(1, 2), 8);
    let mut in_range = true;
    for k in 1..=data.s() {
        let r = data.system().root(k, data.precision())?.re;
        in_range &= r.lo() > half.hi() && r.hi() < &Dyadic::one();
    }
    list.check(
        "sextic: real roots in (1/2, 1)",
        in_range,
        "certified enclosures",
    );
    let norms: Vec<String> = data
        .generators()
        .iter()
        .map(|u| u.norm().to_string())
        .collect();
    list.check(
        "sextic: N(alpha) = N(1 - alpha) = 1",
        norms == ["1", "1"],
        norms.join(", "),
    );
    list.check(
        "sextic: admissible",
        !data.admissibility.det.contains_zero(),
        format!("det L = {}", data.admissibility.det.to_decimal(12).value),
    );
    let c = classify(&data)?;
    let w = permutation_witness(&c.pluriclosed);
    list.check(
        "sextic: pluriclosed with permutation witness",
        c.pluriclosed.exists && w.is_some(),
        show_permutation(&w),
    );
    list.check(
        "sextic: not lcK",
        !c.lck.exists,
        "moduli of the complex embeddings differ",
    );
    list.check(
        "sextic: not balanced",
        !c.balanced.exists,
        "m_k coefficients nonzero",
    );
    list.check(
        "sextic: lcb",
        c.lcb.exists,
        "d Omega_0 = theta_0 ^ Omega_0, d theta_0 = 0",
    );
    let d4 = classify_dim4(&data)?;
    list.check("sextic: b3 = 2", d4.b3 == 2, d4.b3.to_string());
    list.check("sextic: h^{2,1} = 2", d4.h21 == 2, d4.h21.to_string());
    list.check(
        "sextic: pluriclosed iff b3 = 2 iff h^{2,1} = 2",
        d4.equivalent,
        "dimension 4",
    );
    Ok(())
}

fn cubic_checks(list: &mut Checklist, manifest: &Manifest) -> Result<()> {
    let data = load(manifest)?;
    list.check(
        "cubic: signature (1, 1)",
        (data.s(), data.t()) == (1, 1),
        format!("({}, {})", data.s(), data.t()),
    );
    let b = &data.b[0][0];
    let name = "cubic: B = [[-1]]";
    let detail = b.to_decimal(REPORT_DIGITS).value;
    if !b.contains(&Dyadic::from_int(-1)) {
        list.check(name, false, detail);
    } else if b.sub(&crate::interval::Interval::from_int(-1)).mag() < Dyadic::pow2(-200) {
        list.check(name, true, detail);
    } else {
        list.items.push(CheckItem {
            name: name.into(),
            status: CheckStatus::Inconclusive,
            detail: format!("{detail}, enclosure wider than 2^-200"),
        });
    }
    let c = classify(&data)?;
    list.check("cubic: lcK", c.lck.exists, "t = 1");
    list.check(
        "cubic: pluriclosed",
        c.pluriclosed.exists,
        show_permutation(&permutation_witness(&c.pluriclosed)),
    );
    let b3 = crate::cohomology::betti3(&data)?;
    list.check("cubic: b3 = 1", b3 == 1, b3.to_string());
    list.check(
        "cubic: lcK and pluriclosed only on surfaces",
        c.surface_gate,
        "s = t = 1",
    );
    Ok(())
}

fn dga_checks(list: &mut Checklist) -> Result<()> {
    for (s, t) in [(1, 1), (2, 2)] {
        let r = dga_report(s, t)?;
        list.check(
            &format!("dga ({s}, {t}): d^2 = 0 on generators"),
            r.d_squared_zero,
            "symbolic",
        );
        list.check(
            &format!("dga ({s}, {t}): lcb identity"),
            r.lcb.holds,
            format!("residual {}", r.lcb.residual),
        );
        let nonzero = r.balanced_m.iter().all(|m| m != "0");
        list.check(
            &format!("dga ({s}, {t}): d Omega_0 has nonzero m_k terms"),
            nonzero,
            r.balanced_m.join(", "),
        );
        let displayed = r.balanced_m.iter().all(|m| m == "-1/2i");
        list.check(
            &format!("dga ({s}, {t}): m_k coefficient -(i/2) a_kk"),
            displayed,
            format!("computed {}", r.balanced_m.join(", ")),
        );
    }
    Ok(())
}

/// The bundled sextic and cubic manifests at `precision`, checked against
/// the published values, plus the symbolic identities.
pub fn verify_paper_example(precision: u32) -> Result<Checklist> {
    verify_with(
        &Manifest::from_json(SEXTIC_MANIFEST)?,
        &Manifest::from_json(CUBIC_MANIFEST)?,
        precision,
    )
}

pub fn verify_with(sextic: &Manifest, cubic: &Manifest, precision: u32) -> Result<Checklist> {
    let mut list = Checklist {
        precision,
        items: Vec::new(),
    };
    let with_prec = |m: &Manifest| Manifest {
        precision,
        ..m.clone()
    };
    if let Err(e) = sextic_checks(&mut list, &with_prec(sextic)) {
        list.error("sextic", &e);
    }
    if let Err(e) = cubic_checks(&mut list, &with_prec(cubic)) {
        list.error("cubic", &e);
    }
    if let Err(e) = dga_checks(&mut list) {
        list.error("dga", &e);
    }
    Ok(list)
}
