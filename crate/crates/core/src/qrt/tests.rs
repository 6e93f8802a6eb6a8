use std::collections::BTreeSet;

use super::*;
use crate::corpus;
use crate::linalg::{DensityMatrix, KrausChannel};

fn zero() -> DensityMatrix {
    DensityMatrix::basis(2, 0)
}

fn one() -> DensityMatrix {
    DensityMatrix::basis(2, 1)
}

fn names(q: &Qrt, set: &BTreeSet<usize>) -> Vec<String> {
    set.iter().map(|&g| q.qualified(g)).collect()
}

fn shell() -> Qrt {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi = DensityMatrix::pure(&[s.into(), 0.0.into(), 0.0.into(), s.into()]).unwrap();
    QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("zero", zero())])
        .system("B", 2, vec![("zero", zero())])
        .system("AB", 4, vec![("phi", phi)])
        .build()
        .unwrap()
}

#[test]
fn trivial_and_shell_validate() {
    let t = corpus::trivial();
    assert!(validate_qrt(&t).is_valid());
    assert_eq!(t.channels().len(), 1);
    assert_eq!(t.channels()[0].id, "1_C");
    let s = shell();
    assert!(validate_qrt(&s).is_valid(), "{}", validate_qrt(&s));
    assert_eq!(s.channels().len(), 4);
}

#[test]
fn unmatched_image_is_reported() {
    let r = validate_qrt(&corpus::unmatched());
    assert!(r
        .issues
        .iter()
        .any(|i| matches!(i, ValidationIssue::ImageUnmatched { channel, state, .. } if channel == "hadamard" && state == "A.zero")));
}

#[test]
fn ambiguous_image_is_reported() {
    let q = QrtBuilder::new()
        .tolerances(Tolerances::default().with_uniform_eps(0.5))
        .system("A", 2, vec![("zero", zero()), ("almost", DensityMatrix::diagonal(&[0.9, 0.1], &Tolerances::default()).unwrap())])
        .build()
        .unwrap();
    assert!(validate_qrt(&q).issues.iter().any(|i| matches!(i, ValidationIssue::ImageAmbiguous { .. })));
}

#[test]
fn missing_identity_and_open_composition_are_reported() {
    let systems = vec![
        SystemDecl { id: "A".into(), dim: 2, states: vec![("zero".into(), zero()), ("one".into(), one())] },
        SystemDecl { id: "B".into(), dim: 2, states: vec![("zero".into(), zero()), ("one".into(), one())] },
        SystemDecl { id: "D".into(), dim: 2, states: vec![("zero".into(), zero()), ("one".into(), one())] },
    ];
    let chan = |id: &str, f: &str, t: &str| ChannelDecl {
        id: id.into(),
        from: f.into(),
        to: t.into(),
        channel: KrausChannel::identity(2),
    };
    let raw = Qrt::new_raw(systems.clone(), vec![chan("ab", "A", "B")], None, Tolerances::default()).unwrap();
    let r = validate_qrt(&raw);
    assert!(r.issues.iter().any(|i| matches!(i, ValidationIssue::MissingIdentity { system } if system == "A")));
    let open = Qrt::new(systems, vec![chan("ab", "A", "B"), chan("bd", "B", "D")], None, Tolerances::default()).unwrap();
    let r = validate_qrt(&open);
    assert!(r.issues.iter().any(|i| matches!(i, ValidationIssue::CompositionOpen { .. })));
    assert!(r.is_completable());
    let closed = complete_composition(&open).unwrap();
    assert!(validate_qrt(&closed).is_valid());
    let ad: Vec<_> = closed.maps().unwrap().into_iter().filter(|m| m.from == 0 && m.to == 2).collect();
    assert_eq!(ad.len(), 1);
    assert_eq!(ad[0].image, vec![0, 1]);
}

#[test]
fn structural_errors() {
    let bad_dim = QrtBuilder::new().system("A", 2, vec![("x", DensityMatrix::basis(3, 0))]).build();
    assert!(matches!(bad_dim, Err(QrtError::Structure(_))));
    let no_trivial = QrtBuilder::new()
        .system("K", 1, vec![("one", DensityMatrix::scalar_one())])
        .system("A", 2, vec![("zero", zero())])
        .build();
    assert!(matches!(no_trivial, Err(QrtError::Structure(_))));
    let dup = QrtBuilder::new()
        .system("A", 2, vec![("zero", zero())])
        .system("A", 2, vec![("zero", zero())])
        .build();
    assert!(matches!(dup, Err(QrtError::Structure(_))));
    let cap = Tolerances { max_dim: 2, ..Default::default() };
    let big = QrtBuilder::new().tolerances(cap).system("A", 3, vec![("z", DensityMatrix::basis(3, 0))]).build();
    assert!(matches!(big, Err(QrtError::Linalg(_))));
}

#[test]
fn completion_is_idempotent() {
    for (name, q) in corpus::examples() {
        let again = complete_composition(&q).unwrap();
        assert_eq!(q.function_set().unwrap(), again.function_set().unwrap(), "{name}");
    }
}

#[test]
fn completion_caps_function_count() {
    let tol = Tolerances { max_channels: 3, ..Default::default() };
    let perm = |p: [usize; 3]| {
        let mut u = crate::linalg::ComplexMatrix::zeros(3, 3);
        for (i, &j) in p.iter().enumerate() {
            u.set(j, i, 1.0.into());
        }
        KrausChannel::unitary(u).unwrap()
    };
    let states: Vec<_> = (0..3).map(|k| (["t0", "t1", "t2"][k], DensityMatrix::basis(3, k))).collect();
    let generators = || {
        QrtBuilder::new()
            .system("T", 3, states.clone())
            .channel("swap", "T", "T", perm([1, 0, 2]))
            .channel("cycle", "T", "T", perm([1, 2, 0]))
    };
    assert!(matches!(
        generators().tolerances(tol).build_complete(),
        Err(QrtError::ResourceLimit(_))
    ));
    assert_eq!(generators().build_complete().unwrap().function_set().unwrap().len(), 6);
}

#[test]
fn preparation_composes_into_a_preparation() {
    let q = corpus::chain();
    let c = q.system_index("C").unwrap();
    let b = q.system_index("B").unwrap();
    let prep_b = q.channels().iter().find(|d| d.from == "C" && d.to == "B").expect("synthesized C -> B");
    let image = crate::linalg::apply(&prep_b.channel, &DensityMatrix::scalar_one(), q.tolerances()).unwrap();
    assert!(crate::linalg::trace_distance(&image, &zero()).unwrap() < 1e-12);
    assert!(q.maps().unwrap().iter().any(|m| m.from == c && m.to == b && m.image == vec![0]));
}

#[test]
fn free_and_resource_states() {
    let q = QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("rho", zero()), ("other", one())])
        .prepare("prep", "A", "rho")
        .build_complete()
        .unwrap();
    assert_eq!(names(&q, &free_states(&q).unwrap()), vec!["A.rho"]);
    assert_eq!(names(&q, &resource_states(&q).unwrap()), vec!["A.other"]);

    let chain = corpus::chain();
    assert_eq!(names(&chain, &free_states(&chain).unwrap()), vec!["A.zero", "B.zero"]);

    let s = shell();
    assert!(free_states(&s).unwrap().is_empty());
    assert_eq!(names(&s, &resource_states(&s).unwrap()), vec!["A.zero", "B.zero", "AB.phi"]);

    let e = corpus::entanglement();
    assert_eq!(names(&e, &resource_states(&e).unwrap()), vec!["AB.phi"]);

    let all_free = corpus::qutrit_permutations();
    assert!(resource_states(&all_free).unwrap().is_empty());
}

#[test]
fn preorder_examples() {
    let s = shell();
    let p = convertibility_preorder(&s).unwrap();
    assert_eq!(p, crate::relation::Relation::diagonal(s.n_states()));

    let chain = corpus::chain();
    let p = convertibility_preorder(&chain).unwrap();
    let a = chain.find_state("A.zero").unwrap();
    let b = chain.find_state("B.zero").unwrap();
    assert!(p.contains(a, b) && !p.contains(b, a));
    assert!(p.is_preorder());
}

#[test]
fn resources_are_downward_closed() {
    for (name, q) in corpus::examples() {
        let p = convertibility_preorder(&q).unwrap();
        let res = resource_states(&q).unwrap();
        for (r, s) in p.pairs() {
            if res.contains(&s) {
                assert!(res.contains(&r), "{name}: {} -> {}", q.qualified(r), q.qualified(s));
            }
        }
    }
}

#[test]
fn sub_qrt_examples() {
    let e = corpus::entanglement();
    assert!(is_sub_qrt(&e, &e).unwrap());
    let dropped = e.restrict(&["C", "A", "B"]).unwrap();
    assert!(is_sub_qrt(&dropped, &e).unwrap());
    assert!(!is_sub_qrt(&e, &dropped).unwrap());
    let extra = complete_composition(
        &dropped
            .with_channel(ChannelDecl {
                id: "erase".into(),
                from: "A".into(),
                to: "A".into(),
                channel: KrausChannel::replacement(2, &one()),
            })
            .unwrap(),
    )
    .unwrap();
    assert!(!is_sub_qrt(&extra, &e).unwrap());
}

#[test]
fn isomorphism_examples() {
    let e = corpus::entanglement();
    let renamed = e
        .relabel(&[3, 1, 0, 2], &|id| format!("{id}_r"), &e.systems().iter().map(|s| (0..s.states.len()).rev().collect()).collect::<Vec<_>>())
        .unwrap();
    let w = qrt_isomorphic(&e, &renamed).unwrap().expect("isomorphic");
    assert!(w.systems.contains(&("AB".into(), "AB_r".into())));
    assert!(w.states.contains(&("AB.phi".into(), "AB_r.phi".into())));
    assert!(w.states.contains(&("C.one".into(), "C_r.one".into())));

    let a2 = QrtBuilder::new().system("A", 2, vec![("z", zero())]).build().unwrap();
    let a3 = QrtBuilder::new().system("A", 3, vec![("z", DensityMatrix::basis(3, 0))]).build().unwrap();
    assert!(qrt_isomorphic(&a2, &a3).unwrap().is_none());

    let (x, y) = (corpus::xi_pair_x(), corpus::xi_pair_y());
    let w = qrt_isomorphic(&x, &y).unwrap().expect("the qubit pair relabels B's states");
    assert!(w.states.contains(&("B.b0".into(), "B.b1".into())));

    assert!(qrt_isomorphic(&corpus::chain(), &corpus::entanglement()).unwrap().is_none());
}

#[test]
fn isomorphism_respects_functions() {
    let (x, y) = corpus::fstar_collision();
    assert!(qrt_isomorphic(&x, &y).unwrap().is_none());
    assert!(qrt_isomorphic(&x, &x).unwrap().is_some());
    let (gx, gy) = corpus::thm3_gap();
    assert!(qrt_isomorphic(&gx, &gy).unwrap().is_none());
}

#[test]
fn isomorphism_search_is_capped() {
    let tol = Tolerances { max_iso_nodes: 2, ..Default::default() };
    let q = corpus::entanglement();
    let capped = Qrt::new_raw(q.systems().to_vec(), q.channels().to_vec(), q.trivial_id().map(str::to_owned), tol).unwrap();
    assert!(matches!(qrt_isomorphic(&capped, &capped), Err(QrtError::ResourceLimit(_))));
}

#[test]
fn state_graph_has_identity_loops() {
    let q = corpus::entanglement();
    let g = state_graph(&q).unwrap();
    for s in 0..q.n_states() {
        assert!(g.edges.iter().any(|e| e.from == s && e.to == s));
    }
}
