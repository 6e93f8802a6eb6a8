//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use qrtmodal_core::kripke::KripkeModel;
use qrtmodal_core::logic::Formula;
use qrtmodal_core::qrt::{free_states, Qrt, StateMap};
use qrtmodal_core::relation::Relation;

/// Direct recursive valuation, one world at a time.
pub fn holds(m: &KripkeModel, f: &Formula, w: usize) -> bool {
    match f {
        Formula::Atom(a) => m.truth(m.atom_index(a).expect("known atom")),
        Formula::Not(g) => !holds(m, g, w),
        Formula::Implies(a, b) => !holds(m, a, w) || holds(m, b, w),
        Formula::Box(g) => (0..m.worlds().len()).all(|u| !m.access().contains(w, u) || holds(m, g, u)),
        Formula::Diamond(g) => (0..m.worlds().len()).any(|u| m.access().contains(w, u) && holds(m, g, u)),
    }
}

/// Tries every world and atom permutation.
pub fn brute_models_isomorphic(a: &KripkeModel, b: &KripkeModel, orders: Option<(&Relation, &Relation)>) -> bool {
    let (nw, na) = (a.worlds().len(), a.atoms().len());
    if nw != b.worlds().len() || na != b.atoms().len() {
        return false;
    }
    for pw in (0..nw).permutations(nw) {
        let access_ok = (0..nw)
            .cartesian_product(0..nw)
            .all(|(x, y)| a.access().contains(x, y) == b.access().contains(pw[x], pw[y]));
        if !access_ok {
            continue;
        }
        for pa in (0..na).permutations(na) {
            if (0..na).any(|x| a.truth(x) != b.truth(pa[x])) {
                continue;
            }
            let domains_ok = (0..nw).all(|w| {
                let mapped: BTreeSet<usize> = a.domain(w).iter().map(|&x| pa[x]).collect();
                &mapped == b.domain(pw[w])
            });
            let order_ok = orders.is_none_or(|(oa, ob)| {
                (0..na)
                    .cartesian_product(0..na)
                    .all(|(x, y)| oa.contains(x, y) == ob.contains(pa[x], pa[y]))
            });
            if domains_ok && order_ok {
                return true;
            }
        }
    }
    false
}

/// Tries every system permutation (equal dimensions and state counts, trivial
/// to trivial) and every per-system state permutation, comparing the
/// transported function sets and free sets.
pub fn brute_qrt_isomorphic(x: &Qrt, y: &Qrt) -> bool {
    let n = x.systems().len();
    if n != y.systems().len() || x.n_states() != y.n_states() {
        return false;
    }
    let fx = x.function_set().unwrap();
    let fy = y.function_set().unwrap();
    let free_x = free_states(x).unwrap();
    let free_y = free_states(y).unwrap();
    for sigma in (0..n).permutations(n) {
        let shape_ok = (0..n).all(|s| {
            let (a, b) = (&x.systems()[s], &y.systems()[sigma[s]]);
            a.dim == b.dim && a.states.len() == b.states.len() && (x.trivial() == Some(s)) == (y.trivial() == Some(sigma[s]))
        });
        if !shape_ok {
            continue;
        }
        let per_system: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|s| {
                let k = x.systems()[s].states.len();
                (0..k).permutations(k).collect()
            })
            .collect();
        for choice in per_system.iter().map(|v| v.iter()).multi_cartesian_product() {
            let state = |g: usize| {
                let (s, l) = x.locate(g);
                y.global(sigma[s], choice[s][l])
            };
            let free_mapped: BTreeSet<usize> = free_x.iter().map(|&g| state(g)).collect();
            if free_mapped != free_y {
                continue;
            }
            let mapped: BTreeSet<StateMap> = fx
                .iter()
                .map(|f| {
                    let mut image = vec![0; f.image.len()];
                    for (l, &t) in f.image.iter().enumerate() {
                        image[choice[f.from][l]] = choice[f.to][t];
                    }
                    StateMap { from: sigma[f.from], to: sigma[f.to], image }
                })
                .collect();
            if mapped == fy {
                return true;
            }
        }
    }
    false
}
