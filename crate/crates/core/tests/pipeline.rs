use otlab::pipeline::{
    analyze, verify_paper_example, verify_with, CheckStatus, Manifest, Request, CUBIC_MANIFEST,
    SEXTIC_MANIFEST,
};
use otlab::Error;

fn sextic() -> Manifest {
    Manifest::from_json(SEXTIC_MANIFEST).unwrap()
}

fn cubic() -> Manifest {
    Manifest::from_json(CUBIC_MANIFEST).unwrap()
}

const SIGN_ITEMS: [&str; 2] = [
    "dga (1, 1): m_k coefficient -(i/2) a_kk",
    "dga (2, 2): m_k coefficient -(i/2) a_kk",
];

#[test]
fn sextic_report() {
    let r = analyze(&sextic(), false).unwrap();
    assert_eq!((r.s, r.t), (2, 2));
    let m = r.metrics.as_ref().unwrap();
    assert!(m.pluriclosed.exists && !m.lck.exists && !m.balanced.exists && m.lcb.exists);
    let c = r.cohomology.as_ref().unwrap();
    assert_eq!((c.b3, c.hodge["h2,1"]), (2, 2));
    let d4 = r.dim4.as_ref().unwrap();
    assert!(d4.pluriclosed && d4.equivalent);
    let st = r.structure.as_ref().unwrap();
    assert_eq!(st.unit_norms, ["1", "1"]);
    assert!(st.b[0][0].value.starts_with("0.000") || st.b[0][0].value.starts_with("-0.000"));
    assert!(st.b[0][1].value.starts_with("-1.000") || st.b[0][1].value.starts_with("-0.999"));
    assert!(r.dga.as_ref().unwrap().d_squared_zero);
    assert!(r.timing.is_none());
}

#[test]
fn reports_are_byte_identical() {
    let a = serde_json::to_string_pretty(&analyze(&sextic(), false).unwrap()).unwrap();
    let b = serde_json::to_string_pretty(&analyze(&sextic(), false).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(!a.contains("timing"));
    let timed = serde_json::to_value(analyze(&cubic(), true).unwrap()).unwrap();
    assert!(timed["timing"]["load"].is_f64());
}

#[test]
fn real_numbers_are_strings() {
    let v = serde_json::to_value(analyze(&cubic(), false).unwrap()).unwrap();
    let b = &v["structure"]["b"][0][0];
    assert!(b["value"].is_string() && b["±"].is_string());
}

#[test]
fn requests_select_stages() {
    let m = Manifest {
        requests: vec![Request::Metrics],
        ..cubic()
    };
    let r = analyze(&m, false).unwrap();
    assert!(
        r.metrics.is_some() && r.structure.is_none() && r.cohomology.is_none() && r.dga.is_none()
    );
    assert!(r.dim4.is_none());
}

#[test]
fn hodge_pairs_override() {
    let m = Manifest {
        hodge_pairs: Some(vec![[2, 1], [1, 1]]),
        requests: vec![Request::Cohomology],
        ..sextic()
    };
    let r = analyze(&m, false).unwrap();
    let keys: Vec<_> = r.cohomology.unwrap().hodge.into_keys().collect();
    assert_eq!(keys, ["h1,1", "h2,1"]);
}

#[test]
fn structured_errors() {
    let reducible = Manifest {
        polynomial: vec![-1, 0, 1],
        units: vec![],
        ..cubic()
    };
    assert!(matches!(
        analyze(&reducible, false),
        Err(Error::Reducible { .. })
    ));
    let short = Manifest {
        units: vec![vec![0, 1]],
        ..sextic()
    };
    assert!(matches!(
        analyze(&short, false),
        Err(Error::RankMismatch {
            expected: 2,
            got: 1
        })
    ));
    let real_quadratic = Manifest {
        polynomial: vec![-2, 0, 1],
        units: vec![vec![1, 1]],
        ..cubic()
    };
    assert!(matches!(
        analyze(&real_quadratic, false),
        Err(Error::NotOtSignature { s: 2, t: 0 })
    ));
    assert!(matches!(
        Manifest::from_json(r#"{"polynomial": [1, 1], "units": [], "bogus": 1}"#),
        Err(Error::Manifest(_))
    ));
    assert!(matches!(
        Manifest::from_json(r#"{"polynomial": [1, 1]}"#),
        Err(Error::Manifest(_))
    ));
    let e = Error::PrecisionCap {
        what: "x".into(),
        cap: 64,
    };
    assert_eq!(otlab::pipeline::ErrorReport::from(&e).code, "inconclusive");
}

#[test]
fn defaults() {
    let m = Manifest::from_json(r#"{"polynomial": [-1, -1, 0, 1], "units": [[0, 1]]}"#).unwrap();
    assert_eq!(m.precision, 256);
    assert_eq!(m.requests.len(), 5);
    assert!(!m.assert_irreducible);
}

#[test]
fn paper_checklist() {
    let list = verify_paper_example(256).unwrap();
    for item in &list.items {
        let expected = if SIGN_ITEMS.contains(&item.name.as_str()) {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        };
        assert_eq!(item.status, expected, "{}: {}", item.name, item.detail);
    }
    assert!(list.items.len() > 20);
    assert!(!list.passed());
    assert_eq!(list.item(SIGN_ITEMS[0]).unwrap().detail, "computed 1/2i");
}

#[test]
fn paper_checklist_at_low_precision_has_no_false_negatives() {
    let list = verify_paper_example(64).unwrap();
    for item in &list.items {
        if !SIGN_ITEMS.contains(&item.name.as_str()) {
            assert_ne!(
                item.status,
                CheckStatus::Fail,
                "{}: {}",
                item.name,
                item.detail
            );
        }
    }
}

#[test]
fn tampered_manifest_fails_rank() {
    let tampered = Manifest {
        units: vec![vec![0, 1]],
        ..sextic()
    };
    let list = verify_with(&tampered, &cubic(), 256).unwrap();
    let item = list.item("sextic").unwrap();
    assert_eq!(item.status, CheckStatus::Fail);
    assert!(item.detail.contains("generators"), "{}", item.detail);
}
