use otlab::dga::{
    balanced_obstruction, j_operator, lee_form, lee_form_scaled, pluriclosed_obstruction,
    standard_metric, verify_lcb, verify_lcb_with, Atom, Coeff, GaussQ, Gen, InvariantForm, Layout,
    StructureConstants,
};
use otlab::exactnum::{rat, Rational};
use proptest::prelude::*;

fn gq(re: i64, im: i64) -> Coeff {
    Coeff::constant(GaussQ::new(rat(re, 1), rat(im, 1)))
}

fn form_from(l: Layout, terms: &[(u64, i64, i64)]) -> InvariantForm {
    let mask = (1u64 << l.generators()) - 1;
    let mut f = InvariantForm::zero(l);
    for &(w, re, im) in terms {
        f.add_term(w & mask, gq(re, im));
    }
    f
}

fn arb_terms() -> impl Strategy<Value = Vec<(u64, i64, i64)>> {
    proptest::collection::vec((any::<u64>(), -3i64..=3, -3i64..=3), 1..5)
}

/// A random `s x t` matrix with rows summing to -1.
fn arb_b(s: usize, t: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    proptest::collection::vec(proptest::collection::vec((-4i64..=4, 1i64..=3), t - 1), s).prop_map(
        move |rows| {
            rows.into_iter()
                .map(|r| {
                    let mut row: Vec<Rational> = r.into_iter().map(|(n, d)| rat(n, d)).collect();
                    let last = row.iter().fold(rat(-1, 1), |acc, x| acc - x);
                    row.push(last);
                    row
                })
                .collect()
        },
    )
}

fn arb_shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=3)
}

fn diag(n: usize, v: &[i64]) -> Vec<Vec<Coeff>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Coeff::rational(rat(v[i % v.len()], 1))
                    } else {
                        Coeff::zero()
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn d_squared_vanishes_on_generators() {
    for s in 1..=3 {
        for t in 1..=3 {
            let sc = StructureConstants::symbolic(s, t).unwrap();
            let l = sc.layout();
            for b in 0..l.generators() {
                let g = InvariantForm::generator(l, l.gen(b));
                assert!(
                    sc.d(&sc.d(&g)).is_zero(),
                    "(s, t) = ({s}, {t}), generator {}",
                    l.name(b)
                );
            }
        }
    }
}

#[test]
fn gamma_differential_matches_structure_equation() {
    let sc = StructureConstants::symbolic(2, 2).unwrap();
    let l = sc.layout();
    let dg = sc.d(&InvariantForm::generator(l, Gen::Gamma(1)));
    let b11 = Coeff::atom(Atom::B(0, 0));
    let c11 = Coeff::atom(Atom::C(0, 0));
    let a = b11
        .scale(&GaussQ::new(rat(0, 1), rat(1, 4)))
        .add(&c11.scale(&GaussQ::real(rat(-1, 2))));
    assert_eq!(dg.coeff_of(&[Gen::Omega(1), Gen::Gamma(1)]), a);
    assert_eq!(dg.coeff_of(&[Gen::OmegaBar(1), Gen::Gamma(1)]), a.neg());
    // b_12 = -1 - b_11 after elimination.
    let b12 = Coeff::one().neg().sub(&b11);
    let dg2 = sc.d(&InvariantForm::generator(l, Gen::Gamma(2)));
    let a2 = b12
        .scale(&GaussQ::new(rat(0, 1), rat(1, 4)))
        .add(&Coeff::atom(Atom::C(0, 1)).scale(&GaussQ::real(rat(-1, 2))));
    assert_eq!(dg2.coeff_of(&[Gen::Omega(1), Gen::Gamma(2)]), a2);
}

#[test]
fn dc_conventions() {
    let sc = StructureConstants::symbolic(1, 2).unwrap();
    let l = sc.layout();
    assert!(sc.dc(&InvariantForm::scalar(l, gq(3, 1))).is_zero());
    // On a (1,0)-form J is multiplication by i.
    let w = InvariantForm::generator(l, Gen::Omega(1));
    assert_eq!(j_operator(&w), w.scale(&Coeff::i()));
}

#[test]
fn verify_lcb_symbolic_all_shapes() {
    for s in 1..=3 {
        for t in 1..=3 {
            let sc = StructureConstants::symbolic(s, t).unwrap();
            let v = verify_lcb(&sc);
            assert!(v.holds, "(s, t) = ({s}, {t}): residual {}", v.residual);
            assert_eq!(v.residual, "0");
            assert_eq!(v.d_theta, "0");
            let third = lee_form_scaled(&sc.layout(), &GaussQ::new(rat(0, 1), rat(-1, 3)));
            assert!(!verify_lcb_with(&sc, &third).holds);
            assert!(!verify_lcb_with(&sc, &lee_form(&sc.layout()).neg()).holds);
        }
    }
}

#[test]
fn lee_form_is_real_with_s_components() {
    let l = Layout::new(3, 2);
    let theta = lee_form(&l);
    assert_eq!(theta.conj(), theta);
    let half = GaussQ::new(rat(0, 1), rat(-1, 2));
    for k in 1..=3 {
        assert_eq!(
            theta.coeff_of(&[Gen::Omega(k)]).as_constant().unwrap(),
            half
        );
    }
    assert_eq!(theta.len(), 6);
}

#[test]
fn balanced_coefficients_all_shapes() {
    let half_i = GaussQ::new(rat(0, 1), rat(1, 2));
    for s in 1..=3 {
        for t in 1..=3 {
            let sc = StructureConstants::symbolic(s, t).unwrap();
            let n = s + t;
            let ob = balanced_obstruction(&sc, &diag(n, &[1])).unwrap();
            for k in 0..s {
                assert_eq!(
                    ob.m[k].as_constant().unwrap(),
                    half_i,
                    "(s, t) = ({s}, {t}), k = {}",
                    k + 1
                );
                assert_eq!(ob.m_bar[k], ob.m[k].conj());
            }
            let mut a = diag(n, &[2, 3]);
            a[0][0] = Coeff::zero();
            let ob = balanced_obstruction(&sc, &a).unwrap();
            assert!(ob.m[0].is_zero());
        }
    }
}

#[test]
fn balanced_with_off_diagonal_entries() {
    let sc = StructureConstants::symbolic(2, 1).unwrap();
    let mut a = diag(3, &[4, 5, 6]);
    a[0][2] = gq(1, 2);
    a[2][0] = gq(1, -2);
    a[1][2] = gq(0, 1);
    a[2][1] = gq(0, -1);
    let ob = balanced_obstruction(&sc, &a).unwrap();
    assert_eq!(ob.m[0], Coeff::constant(GaussQ::new(rat(0, 1), rat(2, 1))));
    assert_eq!(ob.m[1], Coeff::constant(GaussQ::new(rat(0, 1), rat(5, 2))));
    // Off-diagonal entries only reach m_k, m_kbar with k > s.
    assert_eq!(
        ob.m_bar[0],
        Coeff::constant(GaussQ::new(rat(0, 1), rat(-2, 1)))
    );
    assert_eq!(
        ob.m_bar[1],
        Coeff::constant(GaussQ::new(rat(0, 1), rat(-5, 2)))
    );
    assert!(!ob.m[2].is_zero());
}

#[test]
fn pluriclosed_grid_sweep() {
    // Every B with entries in {0, -1, -1/2, -2, 1} and row sums -1 for (s, t) = (2, 2):
    // the obstruction vanishes exactly when all entries lie in {0, -1}.
    let values = [rat(0, 1), rat(-1, 1), rat(-1, 2), rat(-2, 1), rat(1, 1)];
    let mut seen = (0, 0);
    for a in &values {
        for b in &values {
            let rows = vec![
                vec![a.clone(), rat(-1, 1) - a],
                vec![b.clone(), rat(-1, 1) - b],
            ];
            let sc = StructureConstants::numeric_b(&rows).unwrap();
            let ob = pluriclosed_obstruction(&sc, &diag(4, &[1, 2, 3, 5])).unwrap();
            let in_grid = rows
                .iter()
                .flatten()
                .all(|x| *x == rat(0, 1) || *x == rat(-1, 1));
            assert_eq!(ob.vanishes(), in_grid, "B = {rows:?}");
            if in_grid {
                seen.0 += 1;
            } else {
                seen.1 += 1;
            }
        }
    }
    assert_eq!(seen, (4, 21));
}

#[test]
fn pluriclosed_symbolic_closed_form() {
    for (s, t) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let sc = StructureConstants::symbolic(s, t).unwrap();
        let ob = pluriclosed_obstruction(&sc, &diag(s + t, &[3, 1, 2])).unwrap();
        for row in &ob.coefficients {
            assert!(row
                .iter()
                .flat_map(|c| c.atoms())
                .all(|a| matches!(a, Atom::B(..))));
        }
    }
}

#[test]
fn cross_terms_only_off_the_diagonal() {
    let sc = StructureConstants::numeric_b(&[
        vec![rat(-1, 2), rat(-1, 2)],
        vec![rat(-1, 3), rat(-2, 3)],
    ])
    .unwrap();
    let l = sc.layout();
    let ob = pluriclosed_obstruction(&sc, &diag(4, &[1])).unwrap();
    for (i, rest) in ob.cross_terms.iter().enumerate() {
        for (w, _) in rest.terms() {
            let bits: Vec<_> = (0..l.generators())
                .filter(|b| w >> b & 1 == 1)
                .map(|b| l.gen(b))
                .collect();
            assert!(
                matches!(bits.as_slice(), [Gen::Omega(k), Gen::OmegaBar(m)] if k != m),
                "column {i}: {rest}"
            );
        }
        assert!(!rest.is_zero());
    }
}

#[test]
fn standard_metric_pluriclosed_iff_minus_identity() {
    for s in 1..=3 {
        let id: Vec<Vec<Rational>> = (0..s)
            .map(|k| {
                (0..s)
                    .map(|i| if k == i { rat(-1, 1) } else { rat(0, 1) })
                    .collect()
            })
            .collect();
        let sc = StructureConstants::numeric_b(&id).unwrap();
        assert!(sc.ddc(&standard_metric(&sc.layout())).is_zero());
    }
    let sc = StructureConstants::numeric_b(&[
        vec![rat(-1, 2), rat(-1, 2)],
        vec![rat(-1, 2), rat(-1, 2)],
    ])
    .unwrap();
    assert!(!sc.ddc(&standard_metric(&sc.layout())).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn d_squared_vanishes_on_random_forms((s, t) in arb_shape(), terms in arb_terms()) {
        let sc = StructureConstants::symbolic(s, t).unwrap();
        let f = form_from(sc.layout(), &terms);
        prop_assert!(sc.d(&sc.d(&f)).is_zero());
    }

    #[test]
    fn leibniz_rule((s, t) in arb_shape(), x in arb_terms(), y in arb_terms()) {
        let sc = StructureConstants::symbolic(s, t).unwrap();
        let l = sc.layout();
        // Homogeneous left factor so the sign (-1)^deg is well defined.
        let deg = (x[0].0 & ((1u64 << l.generators()) - 1)).count_ones();
        let xs: Vec<_> = x.into_iter().filter(|(w, _, _)| (w & ((1u64 << l.generators()) - 1)).count_ones() == deg).collect();
        let (a, b) = (form_from(l, &xs), form_from(l, &y));
        let lhs = sc.d(&a.wedge(&b));
        let second = a.wedge(&sc.d(&b));
        let rhs = sc.d(&a).wedge(&b).add(&if deg % 2 == 1 { second.neg() } else { second });
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_commutes_with_d((s, t) in arb_shape(), terms in arb_terms()) {
        let sc = StructureConstants::symbolic(s, t).unwrap();
        let f = form_from(sc.layout(), &terms);
        prop_assert_eq!(sc.d(&f).conj(), sc.d(&f.conj()));
    }

    #[test]
    fn del_delbar_relations((s, t) in (1usize..=2, 1usize..=2), terms in arb_terms()) {
        let sc = StructureConstants::symbolic(s, t).unwrap();
        let f = form_from(sc.layout(), &terms);
        prop_assert_eq!(sc.d(&f), sc.del(&f).add(&sc.delbar(&f)));
        let lhs = sc.del(&sc.delbar(&f));
        let rhs = sc.ddc(&f).scale(&Coeff::constant(GaussQ::new(rat(0, 1), rat(1, 2))));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn verify_lcb_numeric_b(((s, t), rows) in arb_shape().prop_flat_map(|st| (Just(st), arb_b(st.0, st.1)))) {
        let c: Vec<Vec<Rational>> = (0..s).map(|k| (0..t).map(|i| rat((k * 3 + i) as i64 - 2, 5)).collect()).collect();
        let sc = StructureConstants::numeric(&rows, &c).unwrap();
        prop_assert!(verify_lcb(&sc).holds);
    }

    #[test]
    fn pluriclosed_formula_matches_expansion(
        ((s, t), rows) in (1usize..=2, 1usize..=2).prop_flat_map(|st| (Just(st), arb_b(st.0, st.1))),
        diag_entries in proptest::collection::vec(7i64..=12, 4),
        off in proptest::collection::vec((-1i64..=1, -1i64..=1), 6),
    ) {
        let n = s + t;
        let mut a = diag(n, &diag_entries);
        let mut idx = 0;
        for i in 0..n {
            for j in i + 1..n {
                let (re, im) = off[idx % off.len()];
                idx += 1;
                a[i][j] = gq(re, im);
                a[j][i] = gq(re, -im);
            }
        }
        // Symbolic C: the obstruction must not depend on it.
        let sc = StructureConstants::numeric_b(&rows).unwrap();
        let ob = pluriclosed_obstruction(&sc, &a).unwrap();
        for (i, row) in ob.coefficients.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                let b = &rows[k][i];
                let expected = -(rat(diag_entries[(s + i) % diag_entries.len()], 1)) * b * (b + rat(1, 1));
                prop_assert_eq!(c.as_constant().unwrap(), GaussQ::real(expected));
            }
        }
        for rest in &ob.cross_terms {
            for (_, c) in rest.terms() {
                prop_assert!(c.as_constant().is_some());
            }
        }
    }
}
