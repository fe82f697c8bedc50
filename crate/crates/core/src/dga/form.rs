//! Invariant forms in the exterior algebra on the co-frame
//! `w_1..w_s, g_1..g_t, cw_1..cw_s, cg_1..cg_t`.

use std::collections::BTreeMap;
use std::fmt;

use super::coeff::{Coeff, GaussQ};

/// A co-frame generator. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Omega(usize),
    Gamma(usize),
    OmegaBar(usize),
    GammaBar(usize),
}

/// Bit positions of the generators for a given `(s, t)`, in the total order
/// `w_1 < .. < w_s < g_1 < .. < g_t < cw_1 < .. < cg_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    pub s: usize,
    pub t: usize,
}

impl Layout {
    pub fn new(s: usize, t: usize) -> Layout {
        assert!(2 * (s + t) <= 64, "at most 64 generators");
        Layout { s, t }
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.s + self.t
    }

    pub fn generators(&self) -> usize {
        2 * self.n()
    }

    pub fn bit(&self, g: Gen) -> usize {
        let (s, t, n) = (self.s, self.t, self.n());
        let (idx, max, base) = match g {
            Gen::Omega(k) => (k, s, 0),
            Gen::Gamma(i) => (i, t, s),
            Gen::OmegaBar(k) => (k, s, n),
            Gen::GammaBar(i) => (i, t, n + s),
        };
        assert!((1..=max).contains(&idx), "generator {g:?} out of range");
        base + idx - 1
    }

    pub fn gen(&self, bit: usize) -> Gen {
        let (s, n) = (self.s, self.n());
        match bit {
            b if b < s => Gen::Omega(b + 1),
            b if b < n => Gen::Gamma(b - s + 1),
            b if b < n + s => Gen::OmegaBar(b - n + 1),
            b => Gen::GammaBar(b - n - s + 1),
        }
    }

    /// The bit of the conjugate generator.
    pub fn bar(&self, bit: usize) -> usize {
        (bit + self.n()) % self.generators()
    }

    /// `(p, q)` of a word.
    pub fn bidegree(&self, word: u64) -> (u32, u32) {
        let low = (1u64 << self.n()) - 1;
        ((word & low).count_ones(), (word >> self.n()).count_ones())
    }

    pub fn name(&self, bit: usize) -> String {
        match self.gen(bit) {
            Gen::Omega(k) => format!("w{k}"),
            Gen::Gamma(i) => format!("g{i}"),
            Gen::OmegaBar(k) => format!("cw{k}"),
            Gen::GammaBar(i) => format!("cg{i}"),
        }
    }
}

/// Letters of a word in ascending order.
pub fn letters(word: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |b| word >> b & 1 == 1)
}

/// Wedge of two sorted words: the sign from merging, or `None` if they share a letter.
pub fn wedge_words(a: u64, b: u64) -> Option<(bool, u64)> {
    if a & b != 0 {
        return None;
    }
    let mut odd = false;
    for y in letters(b) {
        let above = if y >= 63 { 0 } else { a >> (y + 1) };
        odd ^= above.count_ones() % 2 == 1;
    }
    Some((odd, a | b))
}

/// Sorts a sequence of letters: the sign of the sorting permutation, or
/// `None` on a repeated letter.
pub fn word_from_seq(seq: &[usize]) -> Option<(bool, u64)> {
    let mut word = 0u64;
    let mut odd = false;
    for &g in seq {
        if word >> g & 1 == 1 {
            return None;
        }
        let above = if g >= 63 { 0 } else { word >> (g + 1) };
        odd ^= above.count_ones() % 2 == 1;
        word |= 1 << g;
    }
    Some((odd, word))
}

/// A left-invariant form: a map from sorted words to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantForm {
    layout: Layout,
    terms: BTreeMap<u64, Coeff>,
}

impl InvariantForm {
    pub fn zero(layout: Layout) -> Self {
        InvariantForm {
            layout,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(layout: Layout, c: Coeff) -> Self {
        let mut f = InvariantForm::zero(layout);
        f.add_term(0, c);
        f
    }

    pub fn generator(layout: Layout, g: Gen) -> Self {
        let mut f = InvariantForm::zero(layout);
        f.add_term(1 << layout.bit(g), Coeff::one());
        f
    }

    /// `c * g_1 ^ g_2 ^ ...` in the given (not necessarily sorted) order.
    pub fn monomial(layout: Layout, c: Coeff, gens: &[Gen]) -> Self {
        let seq: Vec<usize> = gens.iter().map(|&g| layout.bit(g)).collect();
        let mut f = InvariantForm::zero(layout);
        if let Some((odd, w)) = word_from_seq(&seq) {
            f.add_term(w, if odd { c.neg() } else { c });
        }
        f
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Coeff)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    /// Coefficient of a sorted word.
    pub fn coeff(&self, word: u64) -> Coeff {
        self.terms.get(&word).cloned().unwrap_or_default()
    }

    /// Coefficient of `g_1 ^ g_2 ^ ...` in the given order.
    pub fn coeff_of(&self, gens: &[Gen]) -> Coeff {
        let seq: Vec<usize> = gens.iter().map(|&g| self.layout.bit(g)).collect();
        match word_from_seq(&seq) {
            Some((odd, w)) => {
                let c = self.coeff(w);
                if odd {
                    c.neg()
                } else {
                    c
                }
            }
            None => Coeff::zero(),
        }
    }

    pub fn add_term(&mut self, word: u64, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(word).or_default();
        entry.add_assign(&c);
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    fn check(&self, o: &InvariantForm) {
        assert_eq!(self.layout, o.layout, "forms over different co-frames");
    }

    pub fn add(&self, o: &InvariantForm) -> InvariantForm {
        self.check(o);
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(*w, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &InvariantForm) -> InvariantForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> InvariantForm {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, c: &Coeff) -> InvariantForm {
        let mut out = InvariantForm::zero(self.layout);
        for (w, x) in &self.terms {
            out.add_term(*w, x.mul(c));
        }
        out
    }

    pub fn scale_q(&self, c: &GaussQ) -> InvariantForm {
        self.map_coeffs(|x| x.scale(c))
    }

    fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> InvariantForm {
        let mut out = InvariantForm::zero(self.layout);
        for (w, c) in &self.terms {
            out.add_term(*w, f(c));
        }
        out
    }

    pub fn wedge(&self, o: &InvariantForm) -> InvariantForm {
        self.check(o);
        let mut out = InvariantForm::zero(self.layout);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &o.terms {
                if let Some((odd, w)) = wedge_words(*wa, *wb) {
                    let c = ca.mul(cb);
                    out.add_term(w, if odd { c.neg() } else { c });
                }
            }
        }
        out
    }

    /// Complex conjugation: conjugates coefficients and swaps barred and
    /// unbarred generators.
    pub fn conj(&self) -> InvariantForm {
        let mut out = InvariantForm::zero(self.layout);
        for (w, c) in &self.terms {
            let seq: Vec<usize> = letters(*w).map(|b| self.layout.bar(b)).collect();
            let (odd, nw) = word_from_seq(&seq).expect("conjugation is a bijection");
            let c = c.conj();
            out.add_term(nw, if odd { c.neg() } else { c });
        }
        out
    }

    /// The `(p, q)` component.
    pub fn project(&self, p: u32, q: u32) -> InvariantForm {
        let mut out = InvariantForm::zero(self.layout);
        for (w, c) in &self.terms {
            if self.layout.bidegree(*w) == (p, q) {
                out.add_term(*w, c.clone());
            }
        }
        out
    }

    /// Bidegrees present.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<_> = self
            .terms
            .keys()
            .map(|w| self.layout.bidegree(*w))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Interior product with the dual vector of `g`: deletes the letter with
    /// sign `(-1)^(letters before it)`.
    pub fn contract(&self, g: Gen) -> InvariantForm {
        let b = self.layout.bit(g);
        let mut out = InvariantForm::zero(self.layout);
        for (w, c) in &self.terms {
            if w >> b & 1 == 1 {
                let before = (w & ((1u64 << b) - 1)).count_ones();
                out.add_term(
                    w & !(1 << b),
                    if before % 2 == 1 { c.neg() } else { c.clone() },
                );
            }
        }
        out
    }

    /// Applies a map to every coefficient (e.g. substituting atoms).
    pub fn map(&self, f: &dyn Fn(&Coeff) -> Coeff) -> InvariantForm {
        self.map_coeffs(f)
    }

    /// Text form such as `(1/2i) w1^cw1 + (-1) g1^cg1`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<String> = letters(*w).map(|b| self.layout.name(b)).collect();
                let coeff = match c.as_constant() {
                    Some(q) => format!("({q})"),
                    None => format!("[{c}]"),
                };
                if word.is_empty() {
                    coeff
                } else {
                    format!("{coeff} {}", word.join("^"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
