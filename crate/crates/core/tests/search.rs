use std::fs;
use std::sync::Arc;

use otlab::embeddings::isolate_roots;
use otlab::exactnum::NumberField;
use otlab::search::{
    assemble_admissible, candidate_units, collect_hits, given_units, run_search, run_to_file,
    Checkpoint, Evaluation, Family, SearchSpec, Target, UnitStrategy, CHUNK,
};

const BUNDLED: &str = include_str!("../data/search_sextic_family.json");

fn bundled() -> SearchSpec {
    serde_json::from_str(BUNDLED).unwrap()
}

fn system(cs: &[i64]) -> Arc<otlab::embeddings::EmbeddingSystem> {
    Arc::new(isolate_roots(&NumberField::from_ints(cs).unwrap(), 256).unwrap())
}

#[test]
fn sextic_candidates_contain_the_generators() {
    let sys = system(&[1, -2, -1, 2, 0, 0, 1]);
    let k = sys.field().clone();
    let c = candidate_units(&sys, 1).unwrap();
    let units: Vec<_> = c.iter().map(|c| c.unit.clone()).collect();
    assert!(units.contains(&k.generator()));
    assert!(units.contains(&k.elem_from_ints(&[1, -1])));
    assert!(!units.contains(&k.one()));
    assert_eq!(c[0].unit, k.generator());
}

#[test]
fn cubic_candidates_contain_rho() {
    let sys = system(&[-1, -1, 0, 1]);
    let c = candidate_units(&sys, 1).unwrap();
    assert!(c
        .iter()
        .any(|c| c.unit == sys.field().generator() && !c.squared));
    assert!(c.iter().all(|c| c.unit.is_unit_norm()));
}

#[test]
fn negative_units_are_squared() {
    let sys = system(&[-1, -1, 0, 1]);
    let c = given_units(&sys, &[vec![0, -1], vec![1], vec![2]]).unwrap();
    assert_eq!(c.len(), 1);
    assert!(c[0].squared);
    assert_eq!(c[0].unit, sys.field().elem_from_ints(&[0, 0, 1]));
}

#[test]
fn assembly() {
    let sys = system(&[1, -2, -1, 2, 0, 0, 1]);
    let pair = given_units(&sys, &[vec![0, 1], vec![1, -1]]).unwrap();
    assert_eq!(assemble_admissible(&sys, &pair, 100).unwrap().len(), 1);
    let dependent = given_units(&sys, &[vec![0, 1], vec![0, 0, 1]]).unwrap();
    assert!(assemble_admissible(&sys, &dependent, 100)
        .unwrap()
        .is_empty());

    let sys = system(&[-1, -1, 0, 1]);
    let single = given_units(&sys, &[vec![0, 1]]).unwrap();
    let found = assemble_admissible(&sys, &single, 100).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].0, vec![1]);
}

#[test]
fn bundled_family_has_one_hit() {
    let hits = collect_hits(&bundled()).unwrap();
    assert_eq!(hits.len(), 1);
    let h = &hits[0];
    assert_eq!(h.polynomial, vec![1, -2, -1, 2, 0, 0, 1]);
    assert_eq!(h.signature, [2, 2]);
    let reps: Vec<_> = h.units.iter().map(|u| u.rep.clone()).collect();
    assert_eq!(reps, vec![vec![0, 1], vec![1, -1]]);
    assert!(h.pluriclosed && !h.lck);
    assert_eq!(h.pluriclosed_witness, Some(vec![2, 1]));
    assert_eq!(h.b3, 2);
}

#[test]
fn skipped_members_carry_reasons() {
    let mut skips = Vec::new();
    run_search(&bundled(), 0, |_, evals| {
        skips.extend(evals.iter().filter_map(|e| match e {
            Evaluation::Skip {
                polynomial, reason, ..
            } => Some((polynomial.clone(), reason.clone())),
            Evaluation::Hit(_) => None,
        }));
        Ok(())
    })
    .unwrap();
    assert_eq!(skips.len(), 1);
    assert_eq!(skips[0].0[0], 2);
    assert!(skips[0].1.contains("signature"), "{}", skips[0].1);
}

#[test]
fn reducible_members_are_skipped() {
    let spec = SearchSpec {
        family: Family {
            coefficients: vec![[-1, -1], [0, 0]],
        },
        target: Target::Lck,
        unit_strategy: UnitStrategy::LowHeightScan { bound: 1 },
        limits: Default::default(),
        precision: 128,
        assert_irreducible: false,
    };
    assert!(collect_hits(&spec).unwrap().is_empty());
}

#[test]
fn lck_target_finds_the_cubic() {
    let spec = SearchSpec {
        family: Family {
            coefficients: vec![[-1, -1], [-1, -1], [0, 0]],
        },
        target: Target::Lck,
        unit_strategy: UnitStrategy::GivenList(vec![vec![0, 1]]),
        limits: Default::default(),
        precision: 256,
        assert_irreducible: false,
    };
    let hits = collect_hits(&spec).unwrap();
    assert_eq!(hits.len(), 1);
    assert!(hits[0].lck && hits[0].pluriclosed);
}

#[test]
fn empty_family_writes_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = bundled();
    spec.family.coefficients[0] = [3, 2];
    let out = dir.path().join("hits.jsonl");
    let summary = run_to_file(&spec, &out, None, None).unwrap();
    assert_eq!(summary.examined, 0);
    assert_eq!(fs::read(&out).unwrap(), b"");
}

#[test]
fn output_independent_of_threads_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = bundled();
    let mut outputs = Vec::new();
    for (i, threads) in [Some(1), Some(4), None, Some(1)].into_iter().enumerate() {
        let out = dir.path().join(format!("hits{i}.jsonl"));
        run_to_file(&spec, &out, None, threads).unwrap();
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0].iter().filter(|&&b| b == b'\n').count(), 1);
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

/// `x^3 + c_1 x + c_0` with `U = <alpha>` (squared if needed): many cheap
/// members spanning several chunks.
fn cubic_family() -> SearchSpec {
    SearchSpec {
        family: Family {
            coefficients: vec![[-2, 2], [-3, 3], [0, 0]],
        },
        target: Target::Lck,
        unit_strategy: UnitStrategy::GivenList(vec![vec![0, 1]]),
        limits: Default::default(),
        precision: 128,
        assert_irreducible: false,
    }
}

#[test]
fn resumed_run_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let spec = cubic_family();
    assert!(spec.family.len() > 2 * CHUNK);
    let full = dir.path().join("full.jsonl");
    let ck_full = dir.path().join("full.ckpt");
    run_to_file(&spec, &full, Some(&ck_full), None).unwrap();
    let full_bytes = fs::read(&full).unwrap();
    let hits: Vec<serde_json::Value> = full_bytes
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert!(hits.len() >= 2);

    // Crash after the first chunk, with part of the second chunk's output written.
    let done = hits
        .iter()
        .filter(|h| h["index"].as_u64().unwrap() < CHUNK)
        .count();
    let prefix_len: usize = full_bytes
        .split_inclusive(|&b| b == b'\n')
        .take(done)
        .map(<[u8]>::len)
        .sum();
    let part = dir.path().join("part.jsonl");
    let mut crashed = full_bytes[..prefix_len].to_vec();
    crashed.extend_from_slice(b"{\"index\": 99, \"trunc");
    fs::write(&part, crashed).unwrap();
    let ck = dir.path().join("part.ckpt");
    let checkpoint = Checkpoint {
        spec: serde_json::to_string(&spec).unwrap(),
        next_index: CHUNK,
        output_len: prefix_len as u64,
    };
    fs::write(&ck, serde_json::to_vec(&checkpoint).unwrap()).unwrap();

    let summary = run_to_file(&spec, &part, Some(&ck), Some(2)).unwrap();
    assert_eq!(summary.examined, spec.family.len() - CHUNK);
    assert_eq!(fs::read(&part).unwrap(), full_bytes);
    assert_eq!(fs::read(&ck).unwrap(), fs::read(&ck_full).unwrap());
}

#[test]
fn checkpoint_of_another_spec_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (out, ck) = (dir.path().join("o.jsonl"), dir.path().join("o.ckpt"));
    let mut first = cubic_family();
    first.limits.max_polynomials = Some(3);
    run_to_file(&first, &out, Some(&ck), None).unwrap();
    assert!(matches!(
        run_to_file(&cubic_family(), &out, Some(&ck), None),
        Err(otlab::Error::Manifest(_))
    ));
}
