//! Exterior calculus on left-invariant forms of the solvmanifold, driven by
//! the structure equations
//!
//! ```text
//! d w_k = (i/2) w_k ^ cw_k
//! d g_i = sum_k (i b_ki / 4 - c_ki / 2) (w_k - cw_k) ^ g_i
//! ```
//!
//! with the conjugate rules obtained by conjugation. Coefficients are exact
//! polynomials in the `b_ki`, `c_ki`, so identities are decided by normal form.

pub mod coeff;
pub mod form;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{rat, Rational};
pub use coeff::{Atom, Coeff, GaussQ, Monomial};
use form::letters;
pub use form::{Gen, InvariantForm, Layout};

/// Ratio between the closed-form pluriclosed obstruction coefficient
/// `-a b (b + 1)` and the `w_k ^ cw_k` coefficient of the contraction
/// `i_{g_i*} i_{cg_i*} dJd(Omega)` under `J = i^(p-q)`.
pub const PLURICLOSED_NORMALIZATION: i64 = 2;

/// The structure constants `B` and `C` (`s x t`), with rows of `B` summing to `-1`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    layout: Layout,
    b: Vec<Vec<Coeff>>,
    c: Vec<Vec<Coeff>>,
    dgen: Vec<InvariantForm>,
}

impl StructureConstants {
    /// Validates shapes and the row-sum identity (as polynomials).
    pub fn new(s: usize, t: usize, b: Vec<Vec<Coeff>>, c: Vec<Vec<Coeff>>) -> Result<Self> {
        if s == 0 || t == 0 {
            return Err(Error::NotOtSignature { s, t });
        }
        let shape_ok = |m: &Vec<Vec<Coeff>>| m.len() == s && m.iter().all(|r| r.len() == t);
        if !shape_ok(&b) || !shape_ok(&c) {
            return Err(Error::Precondition(format!("B and C must be {s} x {t}")));
        }
        for (k, row) in b.iter().enumerate() {
            let sum = row.iter().fold(Coeff::one(), |acc, x| acc.add(x));
            if !sum.is_zero() {
                return Err(Error::Precondition(format!(
                    "row {} of B does not sum to -1",
                    k + 1
                )));
            }
        }
        for m in [&b, &c] {
            if m.iter().flatten().any(|x| x.conj() != *x) {
                return Err(Error::Precondition("B and C must be real".into()));
            }
        }
        let layout = Layout::new(s, t);
        let mut sc = StructureConstants {
            layout,
            b,
            c,
            dgen: Vec::new(),
        };
        sc.dgen = sc.generator_differentials();
        Ok(sc)
    }

    /// Fully symbolic constants. The last column of `B` is eliminated through
    /// the row-sum identity: `b_kt = -1 - sum_{i<t} b_ki`.
    pub fn symbolic(s: usize, t: usize) -> Result<Self> {
        let b = (0..s)
            .map(|k| {
                let mut row: Vec<Coeff> = (0..t - 1)
                    .map(|i| Coeff::atom(Atom::B(k as u16, i as u16)))
                    .collect();
                let last = row.iter().fold(Coeff::one().neg(), |acc, x| acc.sub(x));
                row.push(last);
                row
            })
            .collect();
        StructureConstants::new(s, t, b, Self::symbolic_c(s, t))
    }

    /// Rational `B` and `C`.
    pub fn numeric(b: &[Vec<Rational>], c: &[Vec<Rational>]) -> Result<Self> {
        let s = b.len();
        let t = b.first().map_or(0, |r| r.len());
        StructureConstants::new(s, t, Self::lift(b), Self::lift(c))
    }

    /// Rational `B` with symbolic `C`.
    pub fn numeric_b(b: &[Vec<Rational>]) -> Result<Self> {
        let s = b.len();
        let t = b.first().map_or(0, |r| r.len());
        StructureConstants::new(s, t, Self::lift(b), Self::symbolic_c(s, t))
    }

    fn lift(m: &[Vec<Rational>]) -> Vec<Vec<Coeff>> {
        m.iter()
            .map(|r| r.iter().map(|x| Coeff::rational(x.clone())).collect())
            .collect()
    }

    fn symbolic_c(s: usize, t: usize) -> Vec<Vec<Coeff>> {
        (0..s)
            .map(|k| {
                (0..t)
                    .map(|i| Coeff::atom(Atom::C(k as u16, i as u16)))
                    .collect()
            })
            .collect()
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn s(&self) -> usize {
        self.layout.s
    }

    pub fn t(&self) -> usize {
        self.layout.t
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    /// `b_ki`, 1-based.
    pub fn b(&self, k: usize, i: usize) -> &Coeff {
        &self.b[k - 1][i - 1]
    }

    /// `c_ki`, 1-based.
    pub fn c(&self, k: usize, i: usize) -> &Coeff {
        &self.c[k - 1][i - 1]
    }

    fn generator_differentials(&self) -> Vec<InvariantForm> {
        let l = self.layout;
        let half_i = Coeff::constant(GaussQ::new(rat(0, 1), rat(1, 2)));
        let mut out = vec![InvariantForm::zero(l); l.generators()];
        for k in 1..=l.s {
            let f = InvariantForm::monomial(l, half_i.clone(), &[Gen::Omega(k), Gen::OmegaBar(k)]);
            out[l.bit(Gen::OmegaBar(k))] = f.conj();
            out[l.bit(Gen::Omega(k))] = f;
        }
        let quarter_i = GaussQ::new(rat(0, 1), rat(1, 4));
        let minus_half = GaussQ::real(rat(-1, 2));
        for i in 1..=l.t {
            let mut f = InvariantForm::zero(l);
            for k in 1..=l.s {
                let a = self
                    .b(k, i)
                    .scale(&quarter_i)
                    .add(&self.c(k, i).scale(&minus_half));
                f = f
                    .add(&InvariantForm::monomial(
                        l,
                        a.clone(),
                        &[Gen::Omega(k), Gen::Gamma(i)],
                    ))
                    .sub(&InvariantForm::monomial(
                        l,
                        a,
                        &[Gen::OmegaBar(k), Gen::Gamma(i)],
                    ));
            }
            out[l.bit(Gen::GammaBar(i))] = f.conj();
            out[l.bit(Gen::Gamma(i))] = f;
        }
        out
    }

    /// `d` of a single generator.
    pub fn d_generator(&self, g: Gen) -> &InvariantForm {
        &self.dgen[self.layout.bit(g)]
    }

    /// The exterior derivative, extended from the generators as a graded derivation.
    pub fn d(&self, form: &InvariantForm) -> InvariantForm {
        assert_eq!(
            form.layout(),
            self.layout,
            "form and structure constants disagree on (s, t)"
        );
        let mut out = InvariantForm::zero(self.layout);
        for (w, c) in form.terms() {
            for (j, g) in letters(w).enumerate() {
                let below = w & ((1u64 << g) - 1);
                let above = w & !((1u64 << g) | below);
                for (w2, c2) in self.dgen[g].terms() {
                    let Some((o1, x)) = form::wedge_words(below, w2) else {
                        continue;
                    };
                    let Some((o2, y)) = form::wedge_words(x, above) else {
                        continue;
                    };
                    let coeff = c.mul(c2);
                    let odd = (j % 2 == 1) ^ o1 ^ o2;
                    out.add_term(y, if odd { coeff.neg() } else { coeff });
                }
            }
        }
        out
    }

    /// `del`: the `(p+1, q)` part of `d` on each `(p, q)` term.
    pub fn del(&self, form: &InvariantForm) -> InvariantForm {
        self.split_d(form, true)
    }

    /// `delbar`: the `(p, q+1)` part of `d` on each `(p, q)` term.
    pub fn delbar(&self, form: &InvariantForm) -> InvariantForm {
        self.split_d(form, false)
    }

    fn split_d(&self, form: &InvariantForm, holomorphic: bool) -> InvariantForm {
        let mut out = InvariantForm::zero(self.layout);
        for (w, c) in form.terms() {
            let (p, q) = self.layout.bidegree(w);
            let mut single = InvariantForm::zero(self.layout);
            single.add_term(w, c.clone());
            let dd = self.d(&single);
            out = out.add(&if holomorphic {
                dd.project(p + 1, q)
            } else {
                dd.project(p, q + 1)
            });
        }
        out
    }

    /// `d^c = -J^{-1} d J`.
    pub fn dc(&self, form: &InvariantForm) -> InvariantForm {
        j_inverse(&self.d(&j_operator(form))).neg()
    }

    pub fn ddc(&self, form: &InvariantForm) -> InvariantForm {
        self.d(&self.dc(form))
    }
}

/// `J` on forms: multiplication by `i^(p-q)` on each `(p, q)` term.
pub fn j_operator(form: &InvariantForm) -> InvariantForm {
    j_power(form, 1)
}

/// `J^{-1}`: multiplication by `i^(q-p)`.
pub fn j_inverse(form: &InvariantForm) -> InvariantForm {
    j_power(form, -1)
}

fn j_power(form: &InvariantForm, sign: i64) -> InvariantForm {
    let l = form.layout();
    let mut out = InvariantForm::zero(l);
    for (w, c) in form.terms() {
        let (p, q) = l.bidegree(w);
        out.add_term(w, c.scale(&GaussQ::i_pow(sign * (p as i64 - q as i64))));
    }
    out
}

/// `alpha_l` for `1 <= l <= n`: `w_l` for `l <= s`, else `g_{l-s}`.
fn alpha(idx: usize) -> usize {
    idx - 1
}

fn alpha_bar(l: &Layout, idx: usize) -> usize {
    l.n() + idx - 1
}

fn word_of(seq: &[usize]) -> (bool, u64) {
    form::word_from_seq(seq).expect("distinct letters")
}

/// `m_{i jbar} = alpha_1 ^ calpha_1 ^ .. ^ (no alpha_i) .. ^ (no calpha_j) .. ^ alpha_n ^ calpha_n`.
pub fn m_pair(l: &Layout, i: usize, j: usize) -> InvariantForm {
    let mut seq = Vec::new();
    for idx in 1..=l.n() {
        if idx != i {
            seq.push(alpha(idx));
        }
        if idx != j {
            seq.push(alpha_bar(l, idx));
        }
    }
    let (odd, w) = word_of(&seq);
    let mut f = InvariantForm::zero(*l);
    f.add_term(
        w,
        if odd {
            Coeff::one().neg()
        } else {
            Coeff::one()
        },
    );
    f
}

/// `m_k = i^(n-1) alpha_1 ^ calpha_1 ^ .. ^ (no alpha_k) ^ calpha_k ^ ..`
/// and, with `barred`, `m_kbar` (the `calpha_k` removed instead).
pub fn m_single(l: &Layout, k: usize, barred: bool) -> InvariantForm {
    let mut seq = Vec::new();
    for idx in 1..=l.n() {
        if barred || idx != k {
            seq.push(alpha(idx));
        }
        if !barred || idx != k {
            seq.push(alpha_bar(l, idx));
        }
    }
    let (odd, w) = word_of(&seq);
    let c = Coeff::constant(GaussQ::i_pow(l.n() as i64 - 1));
    let mut f = InvariantForm::zero(*l);
    f.add_term(w, if odd { c.neg() } else { c });
    f
}

fn check_hermitian(n: usize, a: &[Vec<Coeff>]) -> Result<()> {
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition(format!(
            "coefficient matrix must be {n} x {n}"
        )));
    }
    for i in 0..n {
        for j in 0..n {
            if a[j][i] != a[i][j].conj() {
                return Err(Error::Precondition(format!(
                    "coefficient matrix is not Hermitian at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Strict diagonal dominance with a positive diagonal, using `|re| + |im|`
/// as an upper bound for the moduli. Only constant entries are checked.
fn check_dominance(a: &[Vec<Coeff>]) -> Result<()> {
    use num_traits::Signed;
    for (i, row) in a.iter().enumerate() {
        let Some(d) = row[i].as_constant() else {
            continue;
        };
        let mut off = Rational::from_integer(0.into());
        for (j, x) in row.iter().enumerate() {
            if j != i {
                match x.as_constant() {
                    Some(q) => off += q.re.abs() + q.im.abs(),
                    None => return Ok(()),
                }
            }
        }
        if d.re <= off {
            return Err(Error::Precondition(format!(
                "coefficient matrix is not diagonally dominant in row {}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Result of [`pluriclosed_obstruction`].
#[derive(Clone, Debug)]
pub struct PluriclosedObstruction {
    /// `coefficients[i-1][k-1] = -a_{s+i, s+i} b_ki (b_ki + 1)`.
    pub coefficients: Vec<Vec<Coeff>>,
    /// Terms of `i_{g_i*} i_{cg_i*} dJd(Omega)` other than the `w_k ^ cw_k`
    /// (the `w_k ^ cw_m` with `k != m`, coefficient `b_ki b_mi` up to a constant).
    pub cross_terms: Vec<InvariantForm>,
}

impl PluriclosedObstruction {
    /// The `w_k ^ cw_k` coefficients vanish.
    pub fn vanishes(&self) -> bool {
        self.coefficients.iter().flatten().all(Coeff::is_zero)
    }

    /// Every coefficient of every contraction vanishes, cross terms included.
    pub fn vanishes_identically(&self) -> bool {
        self.vanishes() && self.cross_terms.iter().all(InvariantForm::is_zero)
    }

    /// All coefficients, diagonal first.
    pub fn all_coefficients(&self) -> impl Iterator<Item = &Coeff> {
        self.coefficients.iter().flatten().chain(
            self.cross_terms
                .iter()
                .flat_map(|f| f.terms().map(|(_, c)| c)),
        )
    }
}

/// The `(1,1)`-form `sum_{i,j} a_{i jbar} i alpha_i ^ calpha_j`.
pub fn hermitian_form(l: &Layout, a: &[Vec<Coeff>]) -> InvariantForm {
    let mut out = InvariantForm::zero(*l);
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let (odd, w) = word_of(&[alpha(i + 1), alpha_bar(l, j + 1)]);
            let c = x.mul(&Coeff::i());
            out.add_term(w, if odd { c.neg() } else { c });
        }
    }
    out
}

/// For each `i <= t`, the `w_k ^ cw_k` coefficients of
/// `i_{g_i*} i_{cg_i*} dJd(Omega)` for the Hermitian metric with
/// coefficient matrix `a`. They are computed both from the closed formula
/// `-a_{s+i,s+i} b_ki (b_ki + 1)` and by full expansion (scaled by
/// [`PLURICLOSED_NORMALIZATION`]); a mismatch is an internal error.
pub fn pluriclosed_obstruction(
    sc: &StructureConstants,
    a: &[Vec<Coeff>],
) -> Result<PluriclosedObstruction> {
    let l = sc.layout();
    check_hermitian(l.n(), a)?;
    check_dominance(a)?;
    let omega = hermitian_form(&l, a);
    let djd = sc.d(&j_operator(&sc.d(&omega)));
    let norm = Coeff::rational(Rational::from_integer(PLURICLOSED_NORMALIZATION.into()));
    let mut coefficients = Vec::with_capacity(l.t);
    let mut cross_terms = Vec::with_capacity(l.t);
    for i in 1..=l.t {
        let contracted = djd.contract(Gen::GammaBar(i)).contract(Gen::Gamma(i));
        let a_ii = &a[l.s + i - 1][l.s + i - 1];
        let mut row = Vec::with_capacity(l.s);
        let mut rest = contracted.clone();
        for k in 1..=l.s {
            let diag = [Gen::Omega(k), Gen::OmegaBar(k)];
            let expanded = contracted.coeff_of(&diag);
            rest = rest.sub(&InvariantForm::monomial(l, expanded.clone(), &diag));
            let b = sc.b(k, i);
            let closed = a_ii.mul(b).mul(&b.add(&Coeff::one())).neg();
            if expanded.mul(&norm) != closed {
                return Err(Error::Inconsistency(format!(
                    "pluriclosed obstruction for (k, i) = ({k}, {i}): expansion {} vs closed formula {}",
                    expanded.mul(&norm),
                    closed
                )));
            }
            row.push(closed);
        }
        coefficients.push(row);
        cross_terms.push(rest);
    }
    Ok(PluriclosedObstruction {
        coefficients,
        cross_terms,
    })
}

/// Result of [`balanced_obstruction`]: `d Omega_0 = sum_k m[k-1] m_k + m_bar[k-1] m_kbar`.
#[derive(Clone, Debug)]
pub struct BalancedObstruction {
    pub m: Vec<Coeff>,
    pub m_bar: Vec<Coeff>,
}

/// The `(n-1, n-1)`-form `Omega_0 = i^(n-1) sum a_{i jbar} m_{i jbar}`.
pub fn balanced_form(l: &Layout, a: &[Vec<Coeff>]) -> InvariantForm {
    let unit = Coeff::constant(GaussQ::i_pow(l.n() as i64 - 1));
    let mut out = InvariantForm::zero(*l);
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out = out.add(&m_pair(l, i + 1, j + 1).scale(&x.mul(&unit)));
        }
    }
    out
}

/// Expands `d Omega_0` in the basis `m_k, m_kbar` and checks that the
/// coefficient of `m_k` for `k <= s` is `(i/2) a_{k kbar}`.
pub fn balanced_obstruction(
    sc: &StructureConstants,
    a: &[Vec<Coeff>],
) -> Result<BalancedObstruction> {
    let l = sc.layout();
    check_hermitian(l.n(), a)?;
    let domega = sc.d(&balanced_form(&l, a));
    let extract = |barred: bool| -> Vec<Coeff> {
        (1..=l.n())
            .map(|k| {
                let basis = m_single(&l, k, barred);
                let (w, c) = basis
                    .terms()
                    .next()
                    .map(|(w, c)| (w, c.clone()))
                    .expect("monomial");
                let inv = c
                    .as_constant()
                    .and_then(|q| q.inv())
                    .expect("unit coefficient");
                domega.coeff(w).scale(&inv)
            })
            .collect()
    };
    let out = BalancedObstruction {
        m: extract(false),
        m_bar: extract(true),
    };
    let mut rebuilt = InvariantForm::zero(l);
    for k in 1..=l.n() {
        rebuilt = rebuilt
            .add(&m_single(&l, k, false).scale(&out.m[k - 1]))
            .add(&m_single(&l, k, true).scale(&out.m_bar[k - 1]));
    }
    if rebuilt != domega {
        return Err(Error::Inconsistency(
            "d Omega_0 is not spanned by the m_k, m_kbar".into(),
        ));
    }
    let half_i = GaussQ::new(rat(0, 1), rat(1, 2));
    for k in 1..=l.s {
        let expected = a[k - 1][k - 1].scale(&half_i);
        if out.m[k - 1] != expected {
            return Err(Error::Inconsistency(format!(
                "coefficient of m_{k} is {}, expected {}",
                out.m[k - 1],
                expected
            )));
        }
    }
    Ok(out)
}

/// The Lee form `theta_0 = sum_k (w_k - cw_k) / (2i)` of `Omega_0 = i^(n-1) sum m_{k kbar}`.
pub fn lee_form(l: &Layout) -> InvariantForm {
    lee_form_scaled(l, &GaussQ::new(rat(0, 1), rat(-1, 2)))
}

/// `sum_k c (w_k - cw_k)`.
pub fn lee_form_scaled(l: &Layout, c: &GaussQ) -> InvariantForm {
    let mut out = InvariantForm::zero(*l);
    for k in 1..=l.s {
        out = out
            .add(&InvariantForm::generator(*l, Gen::Omega(k)))
            .sub(&InvariantForm::generator(*l, Gen::OmegaBar(k)));
    }
    out.scale_q(c)
}

/// Outcome of an lcb check: `residual = d Omega_0 - theta ^ Omega_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcbVerification {
    pub holds: bool,
    pub theta: String,
    pub residual: String,
    pub d_theta: String,
}

/// Checks `d Omega_0 = theta_0 ^ Omega_0` and `d theta_0 = 0` for the Lee form [`lee_form`].
pub fn verify_lcb(sc: &StructureConstants) -> LcbVerification {
    verify_lcb_with(sc, &lee_form(&sc.layout()))
}

/// [`verify_lcb`] with an arbitrary candidate one-form.
pub fn verify_lcb_with(sc: &StructureConstants, theta: &InvariantForm) -> LcbVerification {
    let l = sc.layout();
    let identity: Vec<Vec<Coeff>> = (0..l.n())
        .map(|i| {
            (0..l.n())
                .map(|j| if i == j { Coeff::one() } else { Coeff::zero() })
                .collect()
        })
        .collect();
    let omega0 = balanced_form(&l, &identity);
    let residual = sc.d(&omega0).sub(&theta.wedge(&omega0));
    let d_theta = sc.d(theta);
    LcbVerification {
        holds: residual.is_zero() && d_theta.is_zero(),
        theta: theta.render(),
        residual: residual.render(),
        d_theta: d_theta.render(),
    }
}

/// The identity-weighted metric `sum_k i w_k ^ cw_k + sum_i i g_i ^ cg_i`.
pub fn standard_metric(l: &Layout) -> InvariantForm {
    let identity: Vec<Vec<Coeff>> = (0..l.n())
        .map(|i| {
            (0..l.n())
                .map(|j| if i == j { Coeff::one() } else { Coeff::zero() })
                .collect()
        })
        .collect();
    hermitian_form(l, &identity)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussQ {
        GaussQ::real(rat(n, d))
    }

    fn iq(n: i64, d: i64) -> Coeff {
        Coeff::constant(GaussQ::new(rat(0, 1), rat(n, d)))
    }

    fn diag(n: usize, v: &[i64]) -> Vec<Vec<Coeff>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Coeff::rational(rat(v[i], 1))
                        } else {
                            Coeff::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn generator_rules() {
        let sc = StructureConstants::symbolic(2, 2).unwrap();
        let l = sc.layout();
        let dw = sc.d(&InvariantForm::generator(l, Gen::Omega(1)));
        assert_eq!(dw.render(), "(1/2i) w1^cw1");
        assert_eq!(sc.d_generator(Gen::OmegaBar(1)), &dw);
        assert!(sc.d(&InvariantForm::scalar(l, Coeff::one())).is_zero());
        let pair = InvariantForm::monomial(l, Coeff::one(), &[Gen::Omega(1), Gen::OmegaBar(1)]);
        assert!(sc.d(&pair).is_zero());
    }

    #[test]
    fn gamma_block_derivative() {
        let sc = StructureConstants::symbolic(2, 3).unwrap();
        let l = sc.layout();
        let mut block = InvariantForm::scalar(l, Coeff::one());
        for i in 1..=3 {
            block = block.wedge(&InvariantForm::monomial(
                l,
                Coeff::one(),
                &[Gen::Gamma(i), Gen::GammaBar(i)],
            ));
        }
        let mut expected = InvariantForm::zero(l);
        for k in 1..=2 {
            expected = expected
                .add(&InvariantForm::generator(l, Gen::Omega(k)).scale(&iq(-1, 2)))
                .add(&InvariantForm::generator(l, Gen::OmegaBar(k)).scale(&iq(1, 2)));
        }
        assert_eq!(sc.d(&block), expected.wedge(&block));
    }

    #[test]
    fn inoue_surface_balanced_coefficient_matches_coordinates() {
        // s = t = 1, B = -1, C = 0: w = dw/y, g = y^(1/2) dz. With a = diag(a1, a2),
        // Omega_0 = i (a1 g^cg + a2 w^cw) = i a1 y dz^dzbar + ..., so
        // d Omega_0 = (a1/2)(dw - dwbar)^dz^dzbar = (a1/2)(w - cw)^g^cg
        // and m_1 = i cw^g^cg, m_1bar = i w^g^cg.
        let sc = StructureConstants::numeric(&[vec![rat(-1, 1)]], &[vec![rat(0, 1)]]).unwrap();
        let l = sc.layout();
        let a = diag(2, &[3, 5]);
        let d = sc.d(&balanced_form(&l, &a));
        let expected = InvariantForm::monomial(
            l,
            Coeff::rational(rat(3, 2)),
            &[Gen::Omega(1), Gen::Gamma(1), Gen::GammaBar(1)],
        )
        .sub(&InvariantForm::monomial(
            l,
            Coeff::rational(rat(3, 2)),
            &[Gen::OmegaBar(1), Gen::Gamma(1), Gen::GammaBar(1)],
        ));
        assert_eq!(d, expected);
        let ob = balanced_obstruction(&sc, &a).unwrap();
        assert_eq!(ob.m[0], iq(3, 2));
        assert_eq!(ob.m_bar[0], iq(-3, 2));
    }

    #[test]
    fn pluriclosed_single_entry() {
        let sc = StructureConstants::numeric(
            &[vec![rat(-1, 2), rat(-1, 2)]],
            &[vec![rat(0, 1), rat(0, 1)]],
        )
        .unwrap();
        let ob = pluriclosed_obstruction(&sc, &diag(3, &[1, 1, 1])).unwrap();
        assert_eq!(ob.coefficients[0][0].as_constant().unwrap(), q(1, 4));
        assert!(!ob.vanishes());
    }

    #[test]
    fn standard_metric_is_pluriclosed_when_b_is_minus_identity() {
        let minus_i = vec![vec![rat(-1, 1), rat(0, 1)], vec![rat(0, 1), rat(-1, 1)]];
        let sc = StructureConstants::numeric_b(&minus_i).unwrap();
        let l = sc.layout();
        assert!(sc.ddc(&standard_metric(&l)).is_zero());
        let ob = pluriclosed_obstruction(&sc, &diag(4, &[2, 3, 5, 7])).unwrap();
        assert!(ob.vanishes());
        assert!(ob.cross_terms.iter().all(InvariantForm::is_zero));
    }

    #[test]
    fn lee_form_sign() {
        for (s, t) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let sc = StructureConstants::symbolic(s, t).unwrap();
            assert!(verify_lcb(&sc).holds, "(s, t) = ({s}, {t})");
            let flipped = lee_form(&sc.layout()).neg();
            assert!(!verify_lcb_with(&sc, &flipped).holds);
        }
    }

    #[test]
    fn preconditions() {
        let sc = StructureConstants::symbolic(1, 1).unwrap();
        let mut a = diag(2, &[1, 1]);
        a[0][1] = Coeff::i();
        assert!(matches!(
            pluriclosed_obstruction(&sc, &a),
            Err(Error::Precondition(_))
        ));
        a[1][0] = iq(-1, 1);
        assert!(matches!(
            pluriclosed_obstruction(&sc, &a),
            Err(Error::Precondition(_))
        ));
        assert!(StructureConstants::numeric(&[vec![rat(-1, 2)]], &[vec![rat(0, 1)]]).is_err());
    }
}
