use qrtmodal_core::corpus;
use qrtmodal_core::harness::{run_theorems, HarnessOptions, Injected, Status};
use qrtmodal_core::Qrt;

fn examples() -> Vec<(String, Qrt)> {
    corpus::examples().into_iter().map(|(n, q)| (n.to_owned(), q)).collect()
}

#[test]
fn shipped_examples_pass() {
    let r = run_theorems(&examples(), &Injected::default(), &HarnessOptions::default()).unwrap();
    assert_eq!(r.status(), Status::Passed, "{r:#?}");
    assert_eq!(r.exit_code(), 0);
    assert!(r.resource_destroying.contains(&"resource_destroying".to_owned()));
    assert!(!r.resource_destroying.contains(&"chain".to_owned()));
}

#[test]
fn injected_negatives_falsify() {
    let injected = Injected {
        models: vec![("i".into(), corpus::broken_thm4_i()), ("ii".into(), corpus::broken_thm4_ii())],
        records: vec![("thm5".into(), corpus::broken_thm5())],
        pairs: vec![{
            let (x, y) = corpus::fstar_collision();
            ("collision".into(), x, y)
        }],
    };
    let r = run_theorems(&examples()[..2], &injected, &HarnessOptions::default()).unwrap();
    assert_eq!(r.exit_code(), 1);
    for name in ["thm4_necessity", "thm5_free_to_free", "fstar_injectivity"] {
        assert_eq!(r.section(name).unwrap().status, Status::Falsified, "{name}");
    }
    assert_eq!(r.section("thm4_necessity").unwrap().failures.len(), 2);
    assert_eq!(r.section("s4").unwrap().status, Status::Passed);
}

#[test]
fn thm3_gap_pair_is_reported() {
    let (x, y) = corpus::thm3_gap();
    let family = vec![("x".to_owned(), x), ("y".to_owned(), y)];
    let r = run_theorems(&family, &Injected::default(), &HarnessOptions::default()).unwrap();
    let s = r.section("thm3_equivalence").unwrap();
    assert_eq!(s.failures.len(), 1);
    assert!(s.failures[0].contains("conditions false, F-images isomorphic true"));
}

#[test]
fn empty_family_passes() {
    let r = run_theorems(&[], &Injected::default(), &HarnessOptions::default()).unwrap();
    assert_eq!(r.status(), Status::Passed);
    assert!(r.sections.iter().all(|s| s.checked == 0));
}
