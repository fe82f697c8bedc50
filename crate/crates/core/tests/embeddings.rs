use std::sync::Arc;

use otlab::embeddings::{
    certify_relation, detect_relations, isolate_roots, ExponentVector, RelationStatus,
};
use otlab::exactnum::NumberField;
use proptest::prelude::*;

fn sextic() -> Arc<NumberField> {
    NumberField::from_ints(&[1, -2, -1, 2, 0, 0, 1]).unwrap()
}

#[test]
fn sextic_relations_up_to_support_three() {
    let k = sextic();
    let sys = isolate_roots(&k, 256).unwrap();
    let units = [k.generator(), k.elem_from_ints(&[1, -1])];
    let found = detect_relations(&sys, &units, 3, 1).unwrap();
    let supports: Vec<Vec<usize>> = found.iter().map(|e| e.support()).collect();
    assert_eq!(supports.len(), 2);
    assert!(supports.contains(&vec![1, 4, 6]));
    assert!(supports.contains(&vec![2, 3, 5]));
}

#[test]
fn sextic_single_relations() {
    let k = sextic();
    let sys = isolate_roots(&k, 256).unwrap();
    let a = [k.generator()];
    let v = certify_relation(&sys, &a, &ExponentVector::indicator(6, &[1, 4, 6])).unwrap();
    assert_eq!(v.status, RelationStatus::Verified);
    assert!(v.residual_log2.map_or(true, |r| r < -200));
    let v = certify_relation(&sys, &a, &ExponentVector::indicator(6, &[1, 2])).unwrap();
    assert_eq!(v.status, RelationStatus::Refuted);
    let v = certify_relation(&sys, &a, &ExponentVector::zero(6)).unwrap();
    assert_eq!(v.status, RelationStatus::Verified);
    // The adjacent-pair reading {1,3,5} of the paper's relation does not hold.
    let v = certify_relation(&sys, &a, &ExponentVector::indicator(6, &[1, 3, 5])).unwrap();
    assert_eq!(v.status, RelationStatus::Refuted);
}

#[test]
fn empty_support_finds_nothing() {
    let k = sextic();
    let sys = isolate_roots(&k, 128).unwrap();
    assert!(detect_relations(&sys, &[k.generator()], 0, 1)
        .unwrap()
        .is_empty());
}

#[test]
fn inoue_cubic_has_no_pair_relations() {
    let k = NumberField::from_ints(&[-1, -1, 0, 1]).unwrap();
    let sys = isolate_roots(&k, 128).unwrap();
    assert!(detect_relations(&sys, &[k.generator()], 2, 1)
        .unwrap()
        .is_empty());
    let triples = detect_relations(&sys, &[k.generator()], 3, 1).unwrap();
    assert_eq!(triples, vec![ExponentVector(vec![1, 1, 1])]);
}

#[test]
fn detection_ignores_generator_order() {
    let k = sextic();
    let sys = isolate_roots(&k, 256).unwrap();
    let a = k.generator();
    let b = k.elem_from_ints(&[1, -1]);
    let x = detect_relations(&sys, &[a.clone(), b.clone()], 3, 1).unwrap();
    let y = detect_relations(&sys, &[b, a], 3, 1).unwrap();
    assert_eq!(x, y);
}

#[test]
fn precision_doubling_keeps_verdicts() {
    let k = sextic();
    let lo = isolate_roots(&k, 128).unwrap();
    let hi = isolate_roots(&k, 512).unwrap();
    let units = [k.generator(), k.elem_from_ints(&[1, -1])];
    for support in [
        vec![1, 4, 6],
        vec![2, 3, 5],
        vec![1, 2],
        vec![3, 4, 5],
        vec![1, 3],
    ] {
        let e = ExponentVector::indicator(6, &support);
        let a = certify_relation(&lo, &units, &e).unwrap().status;
        let b = certify_relation(&hi, &units, &e).unwrap().status;
        assert_eq!(a, b, "support {support:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_relation_tracks_norm_sign(cs in proptest::collection::vec(-2i64..=2, 3)) {
        let k = NumberField::from_ints(&[-1, -1, 0, 1]).unwrap();
        let sys = isolate_roots(&k, 128).unwrap();
        let u = k.elem_from_ints(&cs);
        prop_assume!(u.is_unit_norm());
        let v = certify_relation(&sys, &[u.clone()], &ExponentVector(vec![1; 3])).unwrap();
        let expected = if u.norm() > num_rational::BigRational::from_integer(0.into()) {
            RelationStatus::Verified
        } else {
            RelationStatus::Refuted
        };
        prop_assert_eq!(v.status, expected);
    }

    #[test]
    fn squared_relations_stay_verified(pick in 0usize..2, gen in 0usize..2) {
        let k = sextic();
        let sys = isolate_roots(&k, 256).unwrap();
        let units = [k.generator(), k.elem_from_ints(&[1, -1])];
        let support = [vec![1, 4, 6], vec![2, 3, 5]][pick].clone();
        let e = ExponentVector::indicator(6, &support);
        let u = [units[gen].clone()];
        prop_assert_eq!(certify_relation(&sys, &u, &e).unwrap().status, RelationStatus::Verified);
        prop_assert_eq!(certify_relation(&sys, &u, &e.scaled(2)).unwrap().status, RelationStatus::Verified);
        prop_assert_eq!(certify_relation(&sys, &u, &e.scaled(-1)).unwrap().status, RelationStatus::Verified);
    }
}
