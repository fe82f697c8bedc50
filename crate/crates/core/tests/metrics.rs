use std::sync::Arc;

use otlab::embeddings::RelationStatus;
use otlab::exactnum::{FieldElem, NumberField};
use otlab::metrics::{
    classify, classify_dim4, decide_balanced, decide_lck, decide_pluriclosed, lcb_metric,
    obstruction_vanishes, screen_permutation, surface_gate, MetricKind, Witness,
};
use otlab::otstruct::OTData;
use otlab::Error;

fn field(cs: &[i64]) -> Arc<NumberField> {
    NumberField::from_ints(cs).unwrap()
}

fn sextic_units(k: &Arc<NumberField>) -> Vec<FieldElem> {
    vec![k.generator(), k.elem_from_ints(&[1, -1])]
}

fn sextic(prec: u32) -> OTData {
    let k = field(&[1, -2, -1, 2, 0, 0, 1]);
    OTData::new(&k, sextic_units(&k), prec).unwrap()
}

fn cubic(prec: u32) -> OTData {
    let k = field(&[-1, -1, 0, 1]);
    OTData::new(&k, vec![k.generator()], prec).unwrap()
}

/// `x^4 - x - 1`, `(s, t) = (2, 1)`, `U = <a^2, (1-a)^2>`.
fn quartic() -> OTData {
    let k = field(&[-1, -1, 0, 0, 1]);
    let a = k.generator();
    let b = k.elem_from_ints(&[1, -1]);
    OTData::new(&k, vec![a.pow(2).unwrap(), b.pow(2).unwrap()], 256).unwrap()
}

/// `x^5 - x - 1`, `(s, t) = (1, 2)`, `U = <a>`.
fn quintic() -> OTData {
    let k = field(&[-1, -1, 0, 0, 0, 1]);
    OTData::new(&k, vec![k.generator()], 256).unwrap()
}

#[test]
fn fixture_signatures() {
    assert_eq!((quartic().s(), quartic().t()), (2, 1));
    assert_eq!((quintic().s(), quintic().t()), (1, 2));
}

#[test]
fn sextic_verdicts() {
    let d = sextic(256);
    let p = decide_pluriclosed(&d).unwrap();
    assert_eq!(p.kind, MetricKind::Pluriclosed);
    assert!(p.exists);
    assert_eq!(
        p.witness,
        Some(Witness::Permutation {
            permutation: vec![2, 1]
        })
    );
    assert_eq!(p.certificates.len(), 2);
    assert!(p
        .certificates
        .iter()
        .all(|c| c.status == RelationStatus::Verified));
    let l = decide_lck(&d).unwrap();
    assert!(!l.exists);
    assert_eq!(l.certificates.len(), 1);
    assert_eq!(l.certificates[0].status, RelationStatus::Refuted);
}

#[test]
fn cubic_verdicts() {
    let d = cubic(256);
    assert!(decide_lck(&d).unwrap().exists);
    let p = decide_pluriclosed(&d).unwrap();
    assert!(p.exists);
    assert_eq!(
        p.witness,
        Some(Witness::Permutation {
            permutation: vec![1]
        })
    );
    let c = classify(&d).unwrap();
    assert!(c.surface_gate && c.obstruction_consistent);
}

#[test]
fn quartic_verdicts() {
    let d = quartic();
    assert!(decide_lck(&d).unwrap().exists);
    assert!(screen_permutation(&d).is_none());
    assert!(!decide_pluriclosed(&d).unwrap().exists);
    assert_eq!(obstruction_vanishes(&d, None, &[1]).unwrap(), Some(false));
    classify(&d).unwrap();
}

#[test]
fn quintic_verdicts() {
    let d = quintic();
    assert!(!decide_lck(&d).unwrap().exists);
    assert!(!decide_pluriclosed(&d).unwrap().exists);
    assert_eq!(
        obstruction_vanishes(&d, None, &[1, 5]).unwrap(),
        Some(false)
    );
    classify(&d).unwrap();
}

#[test]
fn obstruction_vanishes_on_pluriclosed_examples() {
    assert_eq!(
        obstruction_vanishes(&sextic(256), Some(&[vec![0, -1], vec![-1, 0]]), &[1, 2]).unwrap(),
        Some(true)
    );
    assert_eq!(
        obstruction_vanishes(&cubic(256), Some(&[vec![-1]]), &[3]).unwrap(),
        Some(true)
    );
}

#[test]
fn balanced_never_lcb_always() {
    for d in [sextic(256), cubic(256), quartic(), quintic()] {
        let b = decide_balanced(&d).unwrap();
        assert!(!b.exists);
        let Some(Witness::BalancedObstruction { m_coefficients, .. }) = b.witness else {
            panic!()
        };
        assert_eq!(m_coefficients, vec!["1/2i".to_string(); d.s()]);
        let l = lcb_metric(&d).unwrap();
        assert!(l.exists);
        let Some(Witness::Lcb {
            lee_form,
            exponents,
            ..
        }) = l.witness
        else {
            panic!()
        };
        assert_eq!(lee_form.len(), 2 * d.s());
        assert!(lee_form.values().all(|c| c == "-1/2i" || c == "1/2i"));
        assert_eq!((exponents.len(), exponents[0].len()), (d.s(), d.t()));
    }
}

#[test]
fn verdicts_invariant_under_change_of_basis() {
    let k = field(&[1, -2, -1, 2, 0, 0, 1]);
    let [a, b]: [FieldElem; 2] = sextic_units(&k).try_into().unwrap();
    for gens in [
        vec![b.clone(), a.clone()],
        vec![a.mul(&b).unwrap(), b.clone()],
        vec![a.inv().unwrap(), b.clone()],
    ] {
        let d = OTData::new(&k, gens, 256).unwrap();
        assert!(decide_pluriclosed(&d).unwrap().exists);
        assert!(!decide_lck(&d).unwrap().exists);
    }
}

#[test]
fn stable_across_precision() {
    for (lo, hi) in [(sextic(128), sextic(512)), (cubic(128), cubic(512))] {
        let (a, b) = (classify(&lo).unwrap(), classify(&hi).unwrap());
        assert_eq!(a.lck.exists, b.lck.exists);
        assert_eq!(a.pluriclosed.witness, b.pluriclosed.witness);
    }
}

#[test]
fn dimension_four() {
    let c = classify_dim4(&sextic(256)).unwrap();
    assert!(c.pluriclosed && c.equivalent);
    assert_eq!((c.b3, c.h21), (2, 2));
    assert!(matches!(
        classify_dim4(&cubic(256)),
        Err(Error::Dimension {
            expected: 4,
            got: 2
        })
    ));
}

#[test]
fn gate_rejects_hypothetical_higher_dimensional_case() {
    assert!(surface_gate(1, 1, true, true).is_ok());
    assert!(surface_gate(3, 3, true, true).is_err());
}

#[test]
fn verdicts_serialize() {
    let v = serde_json::to_value(decide_pluriclosed(&sextic(256)).unwrap()).unwrap();
    assert_eq!(v["kind"], "pluriclosed");
    assert_eq!(v["witness"]["type"], "permutation");
    assert_eq!(v["witness"]["permutation"], serde_json::json!([2, 1]));
}
