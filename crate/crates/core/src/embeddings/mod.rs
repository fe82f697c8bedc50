//! Certified images of field elements under the `s + 2t` embeddings.
//!
//! Embedding indices are 1-based and canonical: real roots ascending
//! (`1..=s`), then one upper-half-plane representative per conjugate pair
//! sorted by (real part, imaginary part) (`s+1..=s+t`), then the conjugates
//! in the same order (`s+t+1..=s+2t`, index `s+t+i` conjugate to `s+i`).

mod relation;
mod roots;

use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::exactnum::{FieldElem, NumberField};
use crate::interval::{ComplexBox, Dyadic, Interval};

pub use relation::{
    certify_many, certify_relation, combinations, detect_relations, separation_bits,
    ExponentVector, RelationStatus, RelationVerdict,
};

/// Default ceiling for automatic precision escalation, in bits.
pub const DEFAULT_PRECISION_CAP: u32 = 16384;

/// Smallest accepted working precision.
pub const MIN_PRECISION: u32 = 64;

/// The escalation cap: `OTLAB_PRECISION_CAP` if set and parseable, else the default.
pub fn precision_cap() -> u32 {
    std::env::var("OTLAB_PRECISION_CAP")
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&v| v >= MIN_PRECISION)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}

#[derive(Clone, Debug)]
struct RootCell {
    enclosure: ComplexBox,
    /// The enclosure has width at most `2^-bits`.
    bits: u32,
    real: bool,
}

/// Certified, refinable enclosures of all roots of the defining polynomial.
#[derive(Debug)]
pub struct EmbeddingSystem {
    field: Arc<NumberField>,
    s: usize,
    t: usize,
    precision: u32,
    cap: u32,
    cells: Mutex<Vec<RootCell>>,
}

/// Isolates all roots of the field's polynomial with the cap taken from the environment.
pub fn isolate_roots(field: &Arc<NumberField>, precision: u32) -> Result<EmbeddingSystem> {
    EmbeddingSystem::new(field, precision, precision_cap())
}

impl EmbeddingSystem {
    pub fn new(field: &Arc<NumberField>, precision: u32, cap: u32) -> Result<EmbeddingSystem> {
        if precision < MIN_PRECISION {
            return Err(Error::Precondition(format!(
                "precision must be at least {MIN_PRECISION} bits, got {precision}"
            )));
        }
        let f = field.poly();
        roots::ensure_squarefree(f)?;
        let n = field.degree();
        let reals = roots::isolate_real_roots(f);
        let s = reals.len();
        if (n - s) % 2 != 0 {
            return Err(Error::Inconsistency(format!(
                "{n} roots with {s} real ones"
            )));
        }
        let t = (n - s) / 2;

        let mut cells: Vec<RootCell> = reals
            .into_iter()
            .map(|(lo, hi)| {
                let x = roots::refine_real_root(f, &Interval::new(lo, hi), precision);
                RootCell {
                    enclosure: ComplexBox::real(x),
                    bits: precision,
                    real: true,
                }
            })
            .collect();

        if t > 0 {
            let mut complex = isolate_complex(f, t, precision, cap)?;
            let mut p = precision;
            loop {
                match canonical_complex_order(&complex) {
                    Some(order) => {
                        complex = order.into_iter().map(|k| complex[k].clone()).collect();
                        break;
                    }
                    None if p < cap => {
                        p = (p * 2).min(cap);
                        for c in complex.iter_mut() {
                            refine_cell(f, c, p)?;
                        }
                    }
                    None => break,
                }
            }
            cells.extend(complex);
        }
        Ok(EmbeddingSystem {
            field: Arc::clone(field),
            s,
            t,
            precision,
            cap,
            cells: Mutex::new(cells),
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.s + 2 * self.t
    }

    /// Working precision the system was built with.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_real(&self, index: usize) -> bool {
        index >= 1 && index <= self.s
    }

    /// Index of the complex conjugate embedding.
    pub fn conjugate_index(&self, index: usize) -> usize {
        let (s, t) = (self.s, self.t);
        if index <= s {
            index
        } else if index <= s + t {
            index + t
        } else {
            index - t
        }
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.n() {
            return Err(Error::BadIndex {
                index,
                max: self.n(),
            });
        }
        Ok(())
    }

    /// Enclosure of the root behind embedding `index`, of width at most `2^-bits`.
    pub fn root(&self, index: usize, bits: u32) -> Result<ComplexBox> {
        self.check_index(index)?;
        let (s, t) = (self.s, self.t);
        let slot = if index > s + t {
            index - t - 1
        } else {
            index - 1
        };
        if bits > self.cap {
            return Err(Error::PrecisionCap {
                what: format!("root {index}"),
                cap: self.cap,
            });
        }
        let mut cells = self.cells.lock().expect("root cache poisoned");
        let cell = &mut cells[slot];
        if cell.bits < bits {
            refine_cell(self.field.poly(), cell, bits)?;
        }
        let b = cell.enclosure.clone();
        Ok(if index > s + t { b.conj() } else { b })
    }

    /// `sigma_index(a)` enclosed in a box of width at most `2^-prec`.
    pub fn embed(&self, a: &FieldElem, index: usize, prec: u32) -> Result<ComplexBox> {
        if !NumberField::same(a.field(), &self.field) {
            return Err(Error::FieldMismatch);
        }
        self.check_index(index)?;
        let rep = a.rep();
        if rep.degree().unwrap_or(0) == 0 {
            return Ok(ComplexBox::from_rational(&rep.coeff(0), prec + 8));
        }
        let goal = Dyadic::pow2(-(prec as i64));
        let mut guard = 16u32 + 4 * rep.degree().unwrap_or(0) as u32;
        loop {
            let wp = prec.saturating_add(guard);
            if wp > self.cap.saturating_add(64) {
                return Err(Error::PrecisionCap {
                    what: format!("embedding {index} of {a}"),
                    cap: self.cap,
                });
            }
            let z = self.root(index, wp.min(self.cap))?;
            let v = if self.is_real(index) {
                ComplexBox::real(rep.eval_interval(&z.re, wp))
            } else {
                rep.eval_complex(&z, wp)
            };
            if v.width() <= goal {
                return Ok(v);
            }
            guard *= 2;
        }
    }

    /// Snapshot of the stored enclosures for indices `1..=s+t`.
    pub fn enclosures(&self) -> Vec<ComplexBox> {
        self.cells
            .lock()
            .expect("root cache poisoned")
            .iter()
            .map(|c| c.enclosure.clone())
            .collect()
    }
}

/// Non-real roots in the upper half plane: one certified box per pair.
fn isolate_complex(
    f: &crate::exactnum::Poly,
    t: usize,
    precision: u32,
    cap: u32,
) -> Result<Vec<RootCell>> {
    let mut est = roots::complex_root_estimates(f);
    est.sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal));
    let upper: Vec<_> = est.into_iter().take(t).collect();
    if upper.iter().any(|z| !roots::is_upper(z)) {
        return Err(Error::Inconsistency(
            "companion estimates missed an upper-half-plane root".into(),
        ));
    }
    let mut p = precision;
    loop {
        let boxes: Option<Vec<ComplexBox>> = upper
            .iter()
            .map(|z| roots::certify_complex_root(f, &roots::estimate_to_box(z), p))
            .collect();
        if let Some(boxes) = boxes {
            let separated = boxes.iter().all(|b| b.im.is_positive())
                && boxes
                    .iter()
                    .enumerate()
                    .all(|(i, a)| boxes[i + 1..].iter().all(|b| a.disjoint(b)));
            if separated {
                return Ok(boxes
                    .into_iter()
                    .map(|b| RootCell {
                        enclosure: b,
                        bits: p,
                        real: false,
                    })
                    .collect());
            }
        }
        if p >= cap {
            return Err(Error::PrecisionCap {
                what: "complex root isolation".into(),
                cap,
            });
        }
        p = (p * 2).min(cap);
    }
}

/// Sort permutation by (real part, imaginary part); `None` if two boxes are
/// not yet separated in the coordinate that decides their order.
fn canonical_complex_order(cells: &[RootCell]) -> Option<Vec<usize>> {
    let mut idx: Vec<usize> = (0..cells.len()).collect();
    let mut ok = true;
    idx.sort_by(|&a, &b| {
        let (x, y) = (&cells[a].enclosure, &cells[b].enclosure);
        if x.re.disjoint(&y.re) {
            x.re.lo().cmp(y.re.lo())
        } else if x.im.disjoint(&y.im) {
            // Real parts agree to the working precision; fall back to the
            // imaginary part (real parts equal or closer than the precision).
            if cells[a].bits < 64 {
                ok = false;
            }
            x.im.lo().cmp(y.im.lo())
        } else {
            ok = false;
            std::cmp::Ordering::Equal
        }
    });
    ok.then_some(idx)
}

fn refine_cell(f: &crate::exactnum::Poly, cell: &mut RootCell, bits: u32) -> Result<()> {
    if cell.real {
        cell.enclosure = ComplexBox::real(roots::refine_real_root(f, &cell.enclosure.re, bits));
    } else {
        let fresh =
            roots::certify_complex_root(f, &cell.enclosure.mid(), bits).ok_or_else(|| {
                Error::PrecisionCap {
                    what: "complex root refinement".into(),
                    cap: bits,
                }
            })?;
        // The old box holds exactly one root; the fresh box must identify the same one.
        if !(fresh.re.subset_of(&cell.enclosure.re) && fresh.im.subset_of(&cell.enclosure.im)) {
            return Err(Error::Inconsistency(
                "refined root left its isolating box".into(),
            ));
        }
        cell.enclosure = fresh;
    }
    cell.bits = bits;
    Ok(())
}

/// `true` when the enclosure of a real embedding is certified positive.
pub fn certified_positive(b: &ComplexBox) -> bool {
    b.re.is_positive()
}

/// `true` when the enclosure of a real embedding is certified negative.
pub fn certified_negative(b: &ComplexBox) -> bool {
    b.re.lo().signum() < 0 && b.re.hi().signum() < 0
}
