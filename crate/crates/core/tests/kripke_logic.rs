mod common;

use proptest::prelude::*;
use qrtmodal_core::generate::{random_formula, random_model};
use qrtmodal_core::kripke::{check_isomorphism, is_s4, models_isomorphic, s4_counterexample, starred_isomorphic, KripkeModel, StarredModel};
use qrtmodal_core::logic::{evaluate, is_valid, parse, truth_set, Formula};
use qrtmodal_core::relation::Relation;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 1_000_000;

fn shuffled(m: &KripkeModel, rng: &mut ChaCha8Rng) -> (KripkeModel, Vec<usize>) {
    let mut pw: Vec<usize> = (0..m.worlds().len()).collect();
    let mut pa: Vec<usize> = (0..m.atoms().len()).collect();
    pw.shuffle(rng);
    pa.shuffle(rng);
    let mut worlds = vec![String::new(); pw.len()];
    for (w, &t) in pw.iter().enumerate() {
        worlds[t] = format!("v{w}");
    }
    let mut atoms = vec![String::new(); pa.len()];
    for (a, &t) in pa.iter().enumerate() {
        atoms[t] = format!("q{a}");
    }
    let access = Relation::from_pairs(pw.len(), m.access().pairs().map(|(a, b)| (pw[a], pw[b])));
    let mut domains = vec![Default::default(); pw.len()];
    for w in 0..pw.len() {
        domains[pw[w]] = m.domain(w).iter().map(|&a| pa[a]).collect();
    }
    let mut interp = vec![false; pa.len()];
    for a in 0..pa.len() {
        interp[pa[a]] = m.truth(a);
    }
    (KripkeModel::from_indexed(worlds, access, atoms, domains, interp).unwrap(), pa)
}

fn random_preorder(n: usize, rng: &mut ChaCha8Rng) -> Relation {
    let mut r = Relation::empty(n);
    for a in 0..n {
        for b in 0..n {
            if rng.random_bool(0.2) {
                r.insert(a, b);
            }
        }
    }
    r.reflexive_transitive_closure()
}

#[test]
fn model_isomorphism_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut agreements = [0usize; 2];
    for _ in 0..300 {
        let a = random_model(4, 4, rng.random_bool(0.5), &mut rng);
        let b = if rng.random_bool(0.4) {
            shuffled(&a, &mut rng).0
        } else {
            random_model(4, 4, rng.random_bool(0.5), &mut rng)
        };
        let fast = models_isomorphic(&a, &b, CAP).unwrap();
        let brute = common::brute_models_isomorphic(&a, &b, None);
        assert_eq!(fast.is_some(), brute, "{a:?}\n{b:?}");
        if let Some(w) = fast {
            assert!(check_isomorphism(&a, &b, None, &w));
        }
        agreements[usize::from(brute)] += 1;
    }
    assert!(agreements[0] > 0 && agreements[1] > 0, "{agreements:?}");
}

#[test]
fn starred_isomorphism_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let a = random_model(3, 4, true, &mut rng);
        let oa = random_preorder(a.atoms().len(), &mut rng);
        let (b, pa) = shuffled(&a, &mut rng);
        let ob = if rng.random_bool(0.5) {
            Relation::from_pairs(pa.len(), oa.pairs().map(|(x, y)| (pa[x], pa[y])))
        } else {
            random_preorder(b.atoms().len(), &mut rng)
        };
        let sa = StarredModel::new(a.clone(), oa.clone()).unwrap();
        let sb = StarredModel::new(b.clone(), ob.clone()).unwrap();
        let fast = starred_isomorphic(&sa, &sb, CAP).unwrap();
        assert_eq!(fast.is_some(), common::brute_models_isomorphic(&a, &b, Some((&oa, &ob))));
        if let Some(w) = fast {
            assert!(check_isomorphism(&a, &b, Some((&oa, &ob)), &w));
        }
    }
}

#[test]
fn s4_check_matches_relation_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let m = random_model(5, 2, rng.random_bool(0.5), &mut rng);
        let n = m.worlds().len();
        let r = m.access();
        let reflexive = (0..n).all(|w| r.contains(w, w));
        let transitive = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(r.contains(a, b) && r.contains(b, c)) || r.contains(a, c))));
        assert_eq!(is_s4(&m), reflexive && transitive);
        assert_eq!(s4_counterexample(&m).is_none(), is_s4(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn evaluator_matches_direct_valuation(seed in any::<u64>(), depth in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(5, 4, false, &mut rng);
        let f = random_formula(m.atoms(), depth, &mut rng);
        let set = truth_set(&m, &f).unwrap();
        for (w, id) in m.worlds().iter().enumerate() {
            prop_assert_eq!(set[w], common::holds(&m, &f, w));
            prop_assert_eq!(evaluate(&m, &f, id).unwrap().value, set[w]);
        }
        let v = is_valid(&m, &f).unwrap();
        prop_assert_eq!(v.valid, set.iter().all(|&b| b));
        prop_assert_eq!(v.failing_world.as_deref(), set.iter().position(|&b| !b).map(|w| m.worlds()[w].as_str()));
    }
}

#[test]
fn k_axiom_necessitation_and_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let m = random_model(5, 4, false, &mut rng);
        for _ in 0..100 {
            let phi = random_formula(m.atoms(), 3, &mut rng);
            let psi = random_formula(m.atoms(), 3, &mut rng);
            let k = Formula::implies(
                Formula::nec(Formula::implies(phi.clone(), psi.clone())),
                Formula::implies(Formula::nec(phi.clone()), Formula::nec(psi.clone())),
            );
            assert!(is_valid(&m, &k).unwrap().valid, "K fails for {k}");
            if is_valid(&m, &phi).unwrap().valid {
                assert!(is_valid(&m, &Formula::nec(phi.clone())).unwrap().valid);
            }
            let dual = Formula::not(Formula::nec(Formula::not(phi.clone())));
            assert_eq!(truth_set(&m, &Formula::poss(phi.clone())).unwrap(), truth_set(&m, &dual).unwrap());
        }
    }
}

#[test]
fn s4_axioms_on_reflexive_transitive_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let m = random_model(5, 3, true, &mut rng);
        for _ in 0..20 {
            let phi = random_formula(m.atoms(), 3, &mut rng);
            let t = Formula::implies(Formula::nec(phi.clone()), phi.clone());
            let four = Formula::implies(Formula::nec(phi.clone()), Formula::nec(Formula::nec(phi.clone())));
            assert!(is_valid(&m, &t).unwrap().valid);
            assert!(is_valid(&m, &four).unwrap().valid);
        }
    }
}

#[test]
fn parser_round_trips_random_asts() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let atoms: Vec<String> = ["p", "q_1", "r2", "p_c"].iter().map(|s| s.to_string()).collect();
    for _ in 0..1000 {
        let depth = rng.random_range(0..=8);
        let f = random_formula(&atoms, depth, &mut rng);
        let text = f.to_string();
        assert_eq!(parse(&text).unwrap(), f, "{text}");
    }
}
