//! The shipped example corpus and hand-broken negative controls.
//!
//! Every example is built in code; [`corpus_files`] renders the JSON files
//! that ship under `corpus/`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_complex::Complex64;

use crate::format::{model_to_json, qrt_to_json, record_to_json};
use crate::kripke::{KripkeModel, StarredModel};
use crate::linalg::{ComplexMatrix, DensityMatrix, KrausChannel};
use crate::qrt::{Qrt, QrtBuilder};
use crate::relation::Relation;
use crate::translate::{functor_f, TranslationRecord};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn zero() -> DensityMatrix {
    DensityMatrix::basis(2, 0)
}

fn one() -> DensityMatrix {
    DensityMatrix::basis(2, 1)
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
}

fn permutation(perm: &[usize]) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(perm.len(), perm.len());
    for (i, &p) in perm.iter().enumerate() {
        u.set(p, i, c(1.0));
    }
    u
}

/// `ℂ` alone.
pub fn trivial() -> Qrt {
    QrtBuilder::new().trivial("C").build().unwrap()
}

/// `ℂ -> A -> B` with `|0><0|` prepared on `A` and carried to `B`.
pub fn chain() -> Qrt {
    QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("zero", zero()), ("one", one())])
        .system("B", 2, vec![("zero", zero()), ("one", one())])
        .prepare("prep_A", "A", "zero")
        .channel("move", "A", "B", KrausChannel::identity(2))
        .build_complete()
        .unwrap()
}

/// Two qubits and their composite with product preparations, local
/// operations, and the Bell state `phi` as the only resource.
pub fn entanglement() -> Qrt {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi = DensityMatrix::pure(&[c(s), c(0.0), c(0.0), c(s)]).unwrap();
    let zz = DensityMatrix::basis(4, 0);
    let oo = DensityMatrix::basis(4, 3);
    let mut copy = ComplexMatrix::zeros(4, 2);
    copy.set(0, 0, c(1.0));
    copy.set(3, 1, c(1.0));
    QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("zero", zero()), ("one", one())])
        .system("B", 2, vec![("zero", zero()), ("one", one())])
        .system("AB", 4, vec![("zz", zz.clone()), ("oo", oo), ("phi", phi)])
        .prepare("prep_A", "A", "zero")
        .prepare("prep_B", "B", "zero")
        .prepare("prep_AB", "AB", "zz")
        .channel("flip_A", "A", "A", KrausChannel::unitary(pauli_x()).unwrap())
        .channel("flip_B", "B", "B", KrausChannel::unitary(pauli_x()).unwrap())
        .channel("flip_AB", "AB", "AB", KrausChannel::unitary(pauli_x().kron(&pauli_x())).unwrap())
        .channel("copy", "A", "AB", KrausChannel::new(2, 4, vec![copy]).unwrap())
        .channel("send", "A", "B", KrausChannel::measure_prepare(2, &[zero(), one()]).unwrap())
        .channel("reset", "AB", "AB", KrausChannel::replacement(4, &zz))
        .build_complete()
        .unwrap()
}

fn xi_member(b_dim: usize, perm: &[usize]) -> Qrt {
    let b_states: Vec<(String, DensityMatrix)> = (0..b_dim)
        .map(|k| (format!("b{k}"), DensityMatrix::basis(b_dim, k)))
        .collect();
    let outputs: Vec<DensityMatrix> = (0..2).map(|k| DensityMatrix::basis(b_dim, perm[k])).collect();
    let mut builder = QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("zero", zero()), ("one", one())])
        .system("B", b_dim, b_states.iter().map(|(n, s)| (n.as_str(), s.clone())).collect())
        .prepare("prep_A", "A", "zero");
    for (n, _) in &b_states {
        builder = builder.prepare(&format!("prep_{n}"), "B", n);
    }
    builder
        .channel("phi", "A", "B", KrausChannel::measure_prepare(2, &outputs).unwrap())
        .build_complete()
        .unwrap()
}

/// `X` of the pair: `Φ: A -> B` measures and re-prepares in the computational basis.
pub fn xi_pair_x() -> Qrt {
    xi_member(2, &[0, 1])
}

/// `Y` of the pair: `ξ∘Φ` with `ξ` the bit flip on `B`, which fixes `B`'s free states.
pub fn xi_pair_y() -> Qrt {
    xi_member(2, &[1, 0])
}

/// The pair with a qutrit `B`, one entry per automorphism `ξ` permuting `B`'s basis.
pub fn xi_sweep() -> Vec<(String, Qrt, Qrt)> {
    let x = xi_member(3, &[0, 1, 2]);
    (0..3)
        .permutations(3)
        .map(|p| (format!("xi_qutrit_{}{}{}", p[0], p[1], p[2]), x.clone(), xi_member(3, &p)))
        .collect()
}

/// Each system has one free state, so every free mixture is trivially free.
pub fn convex() -> Qrt {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::pure(&[c(s), c(s)]).unwrap();
    QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("mixed", DensityMatrix::maximally_mixed(2)), ("zero", zero()), ("plus", plus)])
        .system("B", 3, vec![("mixed", DensityMatrix::maximally_mixed(3)), ("zero", DensityMatrix::basis(3, 0))])
        .prepare("prep_A", "A", "mixed")
        .channel("depolarize", "A", "A", KrausChannel::replacement(2, &DensityMatrix::maximally_mixed(2)))
        .channel("embed", "A", "B", KrausChannel::replacement(2, &DensityMatrix::maximally_mixed(3)))
        .build_complete()
        .unwrap()
}

/// `|0>` and `|1>` are free but their even mixture is a named resource.
pub fn non_convex() -> Qrt {
    QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("zero", zero()), ("one", one()), ("mixed", DensityMatrix::maximally_mixed(2))])
        .prepare("prep_zero", "A", "zero")
        .prepare("prep_one", "A", "one")
        .build_complete()
        .unwrap()
}

/// A Kraus operator `diag(1, 1.1)` that is not trace preserving.
pub fn broken_tp() -> Qrt {
    let leaky = ComplexMatrix::diag(&[1.0, 1.1]);
    QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("zero", zero())])
        .prepare("prep_A", "A", "zero")
        .channel("leaky", "A", "A", KrausChannel::from_kraus(vec![leaky]).unwrap())
        .build()
        .unwrap()
}

/// A Hadamard channel whose image of `|0>` is not a named state.
pub fn unmatched() -> Qrt {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = ComplexMatrix::from_real_rows(&[&[s, s], &[s, -s]]).unwrap();
    QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("zero", zero()), ("one", one())])
        .channel("hadamard", "A", "A", KrausChannel::unitary(h).unwrap())
        .build()
        .unwrap()
}

/// Erasure sends the resource `|1>` to the free `|0>`.
pub fn resource_destroying() -> Qrt {
    QrtBuilder::new()
        .trivial("C")
        .system("A", 2, vec![("zero", zero()), ("one", one())])
        .prepare("prep_A", "A", "zero")
        .channel("erase", "A", "A", KrausChannel::replacement(2, &zero()))
        .build_complete()
        .unwrap()
}

/// The permutation channels of a qutrit, used by tests that need a group of functions.
pub fn qutrit_permutations() -> Qrt {
    let mut b = QrtBuilder::new()
        .trivial("C")
        .system("T", 3, (0..3).map(|k| (["t0", "t1", "t2"][k], DensityMatrix::basis(3, k))).collect())
        .prepare("prep_T", "T", "t0");
    for p in (0..3).permutations(3) {
        let id = format!("perm_{}{}{}", p[0], p[1], p[2]);
        b = b.channel(&id, "T", "T", KrausChannel::unitary(permutation(&p)).unwrap());
    }
    b.build_complete().unwrap()
}

fn model(worlds: &[&str], access: &[(&str, &str)], domains: &[(&str, &[&str])], interp: &[(&str, bool)]) -> KripkeModel {
    let owned = |s: &str| s.to_owned();
    KripkeModel::new(
        worlds.iter().copied().map(owned).collect(),
        access.iter().map(|&(a, b)| (owned(a), owned(b))).collect(),
        interp.iter().map(|&(a, _)| owned(a)).collect(),
        domains
            .iter()
            .map(|&(w, ds)| (owned(w), ds.iter().copied().map(owned).collect()))
            .collect::<BTreeMap<_, _>>(),
        interp.iter().map(|&(a, v)| (owned(a), v)).collect(),
    )
    .unwrap()
}

/// Truth vanishes along `w -> u`.
pub fn broken_thm4_i() -> KripkeModel {
    model(
        &["c", "w", "u"],
        &[("c", "c"), ("w", "w"), ("u", "u"), ("c", "w"), ("c", "u"), ("w", "u")],
        &[("c", &["p_c"]), ("w", &["w_a"]), ("u", &["u_b"])],
        &[("p_c", true), ("w_a", true), ("u_b", false)],
    )
}

/// No world has a singleton domain.
pub fn broken_thm4_ii() -> KripkeModel {
    model(
        &["A", "B"],
        &[("A", "A"), ("B", "B")],
        &[("A", &["a0", "a1"]), ("B", &["b0", "b1"])],
        &[("a0", true), ("a1", false), ("b0", true), ("b1", false)],
    )
}

/// The chain's record with the carried state's atom marked as a resource.
pub fn broken_thm5() -> TranslationRecord {
    let mut rec = functor_f(&chain()).unwrap();
    let b0 = rec.model.atom_index("B.zero").unwrap();
    rec.model = rec.model.with_truth(b0, false);
    rec
}

/// A reflexive two-world starred model with no c-world.
pub fn no_c_world() -> StarredModel {
    let m = broken_thm4_ii();
    let order = Relation::diagonal(m.atoms().len());
    StarredModel::new(m, order).unwrap()
}

/// `F(x) ≅ F(y)` while `y` has a constant map with no counterpart in `x`.
pub fn thm3_gap() -> (Qrt, Qrt) {
    let base = || {
        QrtBuilder::new()
            .system("A", 2, vec![("a", zero())])
            .system("B", 2, vec![("b1", zero()), ("b2", one())])
            .channel("to_b1", "A", "B", KrausChannel::replacement(2, &zero()))
    };
    let x = base().build_complete().unwrap();
    let y = base()
        .channel("to_b2", "A", "B", KrausChannel::replacement(2, &one()))
        .build_complete()
        .unwrap();
    (x, y)
}

/// Two labeled-inequivalent QRTs whose `F*`-images are starred-isomorphic:
/// `x` has the identity and flip maps `A -> B`, `y` the two constant maps.
pub fn fstar_collision() -> (Qrt, Qrt) {
    let base = || {
        QrtBuilder::new()
            .system("A", 2, vec![("a0", zero()), ("a1", one())])
            .system("B", 2, vec![("b0", zero()), ("b1", one())])
    };
    let x = base()
        .channel("keep", "A", "B", KrausChannel::identity(2))
        .channel("flip", "A", "B", KrausChannel::unitary(pauli_x()).unwrap())
        .build_complete()
        .unwrap();
    let y = base()
        .channel("to_b0", "A", "B", KrausChannel::replacement(2, &zero()))
        .channel("to_b1", "A", "B", KrausChannel::replacement(2, &one()))
        .build_complete()
        .unwrap();
    (x, y)
}

/// Valid shipped QRTs by file stem.
pub fn examples() -> Vec<(&'static str, Qrt)> {
    vec![
        ("trivial", trivial()),
        ("chain", chain()),
        ("entanglement", entanglement()),
        ("xi_pair_x", xi_pair_x()),
        ("xi_pair_y", xi_pair_y()),
        ("convex", convex()),
        ("non_convex", non_convex()),
        ("resource_destroying", resource_destroying()),
    ]
}

/// File name and contents of every shipped corpus file.
pub fn corpus_files() -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = examples()
        .into_iter()
        .map(|(n, q)| (format!("{n}.qrt.json"), qrt_to_json(&q)))
        .collect();
    files.push(("broken_tp.qrt.json".into(), qrt_to_json(&broken_tp())));
    files.push(("unmatched.qrt.json".into(), qrt_to_json(&unmatched())));
    files.push(("broken_thm4_i.model.json".into(), model_to_json(&broken_thm4_i(), None)));
    files.push(("broken_thm4_ii.model.json".into(), model_to_json(&broken_thm4_ii(), None)));
    files.push(("broken_thm5.record.json".into(), record_to_json(&broken_thm5())));
    files
}
