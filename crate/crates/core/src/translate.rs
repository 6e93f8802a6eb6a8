//! The functors `F: QRT -> VDS4` and `F*`, and executable checks of the
//! conditions the functors are claimed to satisfy.
//!
//! Every check works on the labeled structure: named states and the
//! functions channels induce on them. Hilbert-space isomorphisms are never
//! constructed.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::kripke::{
    check_isomorphism, is_s4, is_sub_model, models_isomorphic, s4_counterexample, starred_isomorphic, KripkeError,
    KripkeModel, ModelIsomorphism, StarredModel,
};
use crate::qrt::{
    convertibility_preorder, free_states, is_sub_qrt, qrt_isomorphic, state_graph, validate_qrt, Qrt, QrtError,
    QrtIsomorphism,
};
use crate::relation::Relation;

/// Atom id of the trivial system's unique state.
pub const P_C: &str = "p_c";

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("source QRT is not valid:\n{0}")]
    InvalidSource(String),
    #[error(transparent)]
    Qrt(#[from] QrtError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

/// One state-graph edge, by atom id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub struct RecordEdge {
    pub from: String,
    pub to: String,
    pub channel: String,
}

/// `F(X)` (or `F*(X)` when `order` is present) with the name maps back to `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationRecord {
    pub model: KripkeModel,
    pub order: Option<Relation>,
    /// System id to world id.
    pub world_of: BTreeMap<String, String>,
    /// Qualified state id (`system.state`) to atom id.
    pub atom_of: BTreeMap<String, String>,
    pub c_world: Option<String>,
    pub edges: Vec<RecordEdge>,
}

impl TranslationRecord {
    /// The starred model, when this record came from [`functor_f_star`].
    pub fn starred(&self) -> Option<StarredModel> {
        self.order
            .as_ref()
            .map(|o| StarredModel::new(self.model.clone(), o.clone()).expect("F* orders are preorders"))
    }
}

fn require_valid(q: &Qrt) -> Result<(), TranslateError> {
    let report = validate_qrt(q);
    if report.is_valid() {
        Ok(())
    } else {
        Err(TranslateError::InvalidSource(report.to_string()))
    }
}

fn atom_name(q: &Qrt, global: usize) -> String {
    if Some(global) == q.trivial_state() {
        P_C.to_owned()
    } else {
        q.qualified(global)
    }
}

/// `F(X)`: worlds are systems, `R` is channel existence, `D_w` the named
/// states of `w`, `I` marks free states, and `I(p_c) = 1`.
pub fn functor_f(q: &Qrt) -> Result<TranslationRecord, TranslateError> {
    require_valid(q)?;
    let n = q.systems().len();
    let maps = q.maps()?;
    let mut access = Relation::empty(n);
    for m in &maps {
        access.insert(m.from, m.to);
    }
    let free = free_states(q)?;
    let atoms: Vec<String> = (0..q.n_states()).map(|g| atom_name(q, g)).collect();
    let mut interp: Vec<bool> = (0..q.n_states()).map(|g| free.contains(&g)).collect();
    if let Some(t) = q.trivial_state() {
        interp[t] = true;
    }
    let domains = (0..n).map(|s| q.states_of(s).collect()).collect();
    let worlds: Vec<String> = q.systems().iter().map(|s| s.id.clone()).collect();
    let model = KripkeModel::from_indexed(worlds.clone(), access, atoms.clone(), domains, interp)?;
    debug_assert!(is_s4(&model), "{:?}", s4_counterexample(&model));
    let graph = state_graph(q)?;
    let edges = graph
        .edges
        .iter()
        .map(|e| RecordEdge {
            from: atoms[e.from].clone(),
            to: atoms[e.to].clone(),
            channel: q.channels()[e.channel].id.clone(),
        })
        .collect();
    Ok(TranslationRecord {
        model,
        order: None,
        world_of: worlds.iter().map(|w| (w.clone(), w.clone())).collect(),
        atom_of: (0..q.n_states()).map(|g| (q.qualified(g), atoms[g].clone())).collect(),
        c_world: q.trivial_id().map(str::to_owned),
        edges,
    })
}

/// `F*(X)`: `F(X)` with the convertibility preorder carried onto the atoms.
pub fn functor_f_star(q: &Qrt) -> Result<TranslationRecord, TranslateError> {
    let mut rec = functor_f(q)?;
    rec.order = Some(convertibility_preorder(q)?);
    Ok(rec)
}

/// Labeled view of a QRT: state counts, free flags, and function images per system pair.
struct Labeled {
    states: Vec<usize>,
    dims: Vec<usize>,
    free: Vec<Vec<bool>>,
    /// `images[(a, b)]`: image sets, as local indices of `b`, of the functions `a -> b`.
    images: BTreeMap<(usize, usize), BTreeSet<BTreeSet<usize>>>,
}

impl Labeled {
    fn new(q: &Qrt) -> Result<Self, TranslateError> {
        let free_set = free_states(q)?;
        let n = q.systems().len();
        let free = (0..n)
            .map(|s| {
                q.states_of(s)
                    .map(|g| free_set.contains(&g) || Some(g) == q.trivial_state())
                    .collect()
            })
            .collect();
        let mut images: BTreeMap<(usize, usize), BTreeSet<BTreeSet<usize>>> = BTreeMap::new();
        for m in q.function_set()? {
            images.entry((m.from, m.to)).or_default().insert(m.image_set());
        }
        Ok(Labeled {
            states: q.systems().iter().map(|s| s.states.len()).collect(),
            dims: q.systems().iter().map(|s| s.dim).collect(),
            free,
            images,
        })
    }

    fn free_count(&self, s: usize) -> usize {
        self.free[s].iter().filter(|f| **f).count()
    }

    fn images(&self, a: usize, b: usize) -> Option<&BTreeSet<BTreeSet<usize>>> {
        self.images.get(&(a, b))
    }
}

/// A nonempty subfamily of `family` has union exactly `target`.
fn covered(target: &BTreeSet<usize>, family: Option<&BTreeSet<BTreeSet<usize>>>) -> bool {
    let Some(family) = family else { return false };
    let mut union = BTreeSet::new();
    let mut any = false;
    for s in family.iter().filter(|s| s.is_subset(target)) {
        any = true;
        union.extend(s.iter().copied());
    }
    any && &union == target
}

/// Verdicts on the three conditions for `F(x) ≅ F(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm3Report {
    /// A system bijection matching named-state counts exists.
    pub i: bool,
    /// Some such bijection also matches free-state counts system by system.
    pub ii: bool,
    /// Some bijection satisfying (ii), with free-preserving state bijections,
    /// meets the image-cover condition in both directions.
    pub iii: bool,
    /// A bijection meeting (i)-(iii) that also preserves dimensions exists.
    pub dims_match: bool,
    /// System correspondence of the first bijection meeting (i)-(iii).
    pub witness: Option<Vec<(String, String)>>,
}

impl Thm3Report {
    pub fn all(&self) -> bool {
        self.i && self.ii && self.iii
    }
}

/// Whether target system `b` of `x` admits a free-preserving state bijection
/// onto `sigma[b]` under which every `x` function into `b` is covered by `y`
/// functions between the images, and vice versa.
fn cover_condition(x: &Labeled, y: &Labeled, sigma: &[usize], b: usize) -> bool {
    let n = sigma.len();
    let yb = sigma[b];
    let k = x.states[b];
    (0..k).permutations(k).any(|perm| {
        // perm[i] is the y-local index of x-local state i of b
        if (0..k).any(|i| x.free[b][i] != y.free[yb][perm[i]]) {
            return false;
        }
        let mut inverse = vec![0; k];
        for (i, &j) in perm.iter().enumerate() {
            inverse[j] = i;
        }
        (0..n).all(|a| {
            let forward = x.images(a, b).into_iter().flatten().all(|img| {
                let t: BTreeSet<usize> = img.iter().map(|&i| perm[i]).collect();
                covered(&t, y.images(sigma[a], yb))
            });
            let backward = y.images(sigma[a], yb).into_iter().flatten().all(|img| {
                let t: BTreeSet<usize> = img.iter().map(|&j| inverse[j]).collect();
                covered(&t, x.images(a, b))
            });
            forward && backward
        })
    })
}

/// Evaluates the three conditions of the `F(x) ≅ F(y)` characterization at
/// the labeled level. Condition (iii) is checked in both directions.
pub fn check_thm3_conditions(x: &Qrt, y: &Qrt) -> Result<Thm3Report, TranslateError> {
    let lx = Labeled::new(x)?;
    let ly = Labeled::new(y)?;
    let n = lx.states.len();
    let mut report = Thm3Report {
        i: false,
        ii: false,
        iii: false,
        dims_match: false,
        witness: None,
    };
    if n != ly.states.len() {
        return Ok(report);
    }
    for sigma in (0..n).permutations(n) {
        if (0..n).any(|s| lx.states[s] != ly.states[sigma[s]]) {
            continue;
        }
        report.i = true;
        if (0..n).any(|s| lx.free_count(s) != ly.free_count(sigma[s])) {
            continue;
        }
        report.ii = true;
        if !(0..n).all(|b| cover_condition(&lx, &ly, &sigma, b)) {
            continue;
        }
        let dims = (0..n).all(|s| lx.dims[s] == ly.dims[sigma[s]]);
        if !report.iii {
            report.iii = true;
            report.witness = Some(
                (0..n)
                    .map(|s| (x.systems()[s].id.clone(), y.systems()[sigma[s]].id.clone()))
                    .collect(),
            );
        }
        if dims {
            report.dims_match = true;
            break;
        }
    }
    Ok(report)
}

/// Verdicts on the necessary conditions for a model to be an `F`-image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm4Report {
    /// Truth never vanishes along `R`.
    pub i: bool,
    /// A singleton-domain world with an isolated domain sees every world with true atoms.
    pub ii: bool,
    pub c_world: Option<String>,
    /// First `(w, u)` in `R` with `T(w) ≠ ∅` and `T(u) = ∅`.
    pub violation_i: Option<(String, String)>,
}

pub fn check_thm4_conditions(m: &KripkeModel) -> Thm4Report {
    let n = m.worlds().len();
    let t: Vec<BTreeSet<usize>> = (0..n).map(|w| m.true_atoms(w)).collect();
    let violation_i = m
        .access()
        .pairs()
        .find(|&(w, u)| t[u].is_empty() && !t[w].is_empty())
        .map(|(w, u)| (m.worlds()[w].clone(), m.worlds()[u].clone()));
    let c_world = (0..n).find(|&c| {
        m.domain(c).len() == 1
            && (0..n).all(|w| w == c || m.domain(c).is_disjoint(m.domain(w)))
            && (0..n).all(|w| t[w].is_empty() || m.access().contains(c, w))
    });
    Thm4Report {
        i: violation_i.is_none(),
        ii: c_world.is_some(),
        c_world: c_world.map(|c| m.worlds()[c].clone()),
        violation_i,
    }
}

/// Outcome of one functoriality check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctorialityCheck {
    pub kind: &'static str,
    pub subject: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FunctorialityReport {
    pub checks: Vec<FunctorialityCheck>,
}

impl FunctorialityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, kind: &'static str, subject: String, passed: bool, detail: Option<String>) {
        self.checks.push(FunctorialityCheck {
            kind,
            subject,
            passed,
            detail,
        });
    }
}

fn identity_witness(m: &KripkeModel) -> ModelIsomorphism {
    ModelIsomorphism {
        worlds: m.worlds().iter().map(|w| (w.clone(), w.clone())).collect(),
        atoms: m.atoms().iter().map(|a| (a.clone(), a.clone())).collect(),
    }
}

/// Checks that `F` sends `1_X` to the identity, relabelings to isomorphic
/// models, and sub-QRT inclusions (and their composites) to sub-model inclusions.
pub fn verify_functoriality(
    x: &Qrt,
    relabelings: &[Qrt],
    sub_qrts: &[Qrt],
) -> Result<FunctorialityReport, TranslateError> {
    let cap = x.tolerances().max_iso_nodes;
    let fx = functor_f(x)?;
    let mut report = FunctorialityReport::default();
    let ident = identity_witness(&fx.model);
    report.push(
        "identity",
        "1_X".into(),
        check_isomorphism(&fx.model, &fx.model, None, &ident) && is_sub_model(&fx.model, &fx.model),
        None,
    );
    for (k, r) in relabelings.iter().enumerate() {
        let fr = functor_f(r)?;
        let iso = models_isomorphic(&fx.model, &fr.model, cap)?;
        let source_iso = qrt_isomorphic(x, r)?.is_some();
        let passed = iso.is_some();
        report.push(
            "relabeling",
            format!("relabeling {k}"),
            passed,
            (!passed).then(|| format!("F-images not isomorphic; sources labeled-isomorphic: {source_iso}")),
        );
    }
    let images: Vec<TranslationRecord> = sub_qrts.iter().map(functor_f).collect::<Result<_, _>>()?;
    for (k, (s, fs)) in sub_qrts.iter().zip(&images).enumerate() {
        let is_sub = is_sub_qrt(s, x)?;
        let passed = !is_sub || is_sub_model(&fs.model, &fx.model);
        let detail = if !is_sub {
            Some("not a sub-QRT of X; inclusion not applicable".to_owned())
        } else if !passed {
            Some("F-image is not a sub-model".to_owned())
        } else {
            None
        };
        report.push("inclusion", format!("sub-QRT {k}"), passed, detail);
    }
    for (i, (si, fi)) in sub_qrts.iter().zip(&images).enumerate() {
        for (j, (sj, fj)) in sub_qrts.iter().zip(&images).enumerate() {
            if i == j || !is_sub_qrt(si, sj)? || !is_sub_qrt(sj, x)? {
                continue;
            }
            let passed = is_sub_model(&fi.model, &fj.model) && is_sub_model(&fi.model, &fx.model);
            report.push(
                "composite",
                format!("sub-QRT {i} <= sub-QRT {j} <= X"),
                passed,
                (!passed).then(|| "composite inclusion does not map to a composite of sub-model inclusions".into()),
            );
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectivityStatus {
    Consistent,
    Falsified,
    Inconclusive,
}

/// One pair of the injectivity sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityEntry {
    pub label: String,
    pub starred_isomorphic: Option<bool>,
    pub labeled_isomorphic: Option<bool>,
    pub status: InjectivityStatus,
    pub model_witness: Option<ModelIsomorphism>,
    pub qrt_witness: Option<QrtIsomorphism>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub entries: Vec<InjectivityEntry>,
}

impl InjectivityReport {
    pub fn count(&self, status: InjectivityStatus) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }
}

/// For each pair: starred-isomorphic `F*`-images must come from labeled-isomorphic sources.
pub fn verify_fstar_injectivity(pairs: &[(String, Qrt, Qrt)]) -> Result<InjectivityReport, TranslateError> {
    let mut report = InjectivityReport::default();
    for (label, x, y) in pairs {
        let cap = x.tolerances().max_iso_nodes;
        let sx = functor_f_star(x)?.starred().expect("starred");
        let sy = functor_f_star(y)?.starred().expect("starred");
        let mut entry = InjectivityEntry {
            label: label.clone(),
            starred_isomorphic: None,
            labeled_isomorphic: None,
            status: InjectivityStatus::Inconclusive,
            model_witness: None,
            qrt_witness: None,
            note: None,
        };
        match starred_isomorphic(&sx, &sy, cap) {
            Ok(w) => {
                entry.starred_isomorphic = Some(w.is_some());
                entry.model_witness = w;
            }
            Err(KripkeError::ResourceLimit(msg)) => entry.note = Some(msg),
            Err(e) => return Err(e.into()),
        }
        match qrt_isomorphic(x, y) {
            Ok(w) => {
                entry.labeled_isomorphic = Some(w.is_some());
                entry.qrt_witness = w;
            }
            Err(QrtError::ResourceLimit(msg)) => entry.note = Some(msg),
            Err(e) => return Err(e.into()),
        }
        entry.status = match (entry.starred_isomorphic, entry.labeled_isomorphic) {
            (Some(true), Some(false)) => InjectivityStatus::Falsified,
            (Some(false), Some(true)) => {
                entry.note = Some("labeled-isomorphic sources with non-isomorphic F*-images".into());
                InjectivityStatus::Falsified
            }
            (Some(false), _) | (Some(true), Some(true)) => InjectivityStatus::Consistent,
            _ => InjectivityStatus::Inconclusive,
        };
        report.entries.push(entry);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linalg::{DensityMatrix, KrausChannel};
    use crate::qrt::QrtBuilder;

    fn order_pairs(rec: &TranslationRecord) -> BTreeSet<(String, String)> {
        let atoms = rec.model.atoms();
        rec.order
            .as_ref()
            .unwrap()
            .pairs()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (atoms[a].clone(), atoms[b].clone()))
            .collect()
    }

    fn false_atoms(rec: &TranslationRecord) -> Vec<&str> {
        let m = &rec.model;
        (0..m.atoms().len()).filter(|&a| !m.truth(a)).map(|a| m.atoms()[a].as_str()).collect()
    }

    fn identity_only() -> Qrt {
        QrtBuilder::new()
            .system("A", 2, vec![("zero", DensityMatrix::basis(2, 0))])
            .system("B", 2, vec![("zero", DensityMatrix::basis(2, 0)), ("one", DensityMatrix::basis(2, 1))])
            .build()
            .unwrap()
    }

    #[test]
    fn trivial_image() {
        let rec = functor_f(&corpus::trivial()).unwrap();
        assert_eq!(rec.model.worlds(), ["C"]);
        assert_eq!(rec.model.atoms(), [P_C]);
        assert!(rec.model.truth(0));
        assert_eq!(rec.model.access().pair_set(), BTreeSet::from([(0, 0)]));
        assert_eq!(rec.c_world.as_deref(), Some("C"));
        assert_eq!(rec.atom_of["C.one"], P_C);
    }

    #[test]
    fn identity_only_image_is_diagonal() {
        let q = identity_only();
        let rec = functor_f_star(&q).unwrap();
        assert_eq!(*rec.model.access(), Relation::diagonal(2));
        assert_eq!(*rec.order.as_ref().unwrap(), Relation::diagonal(3));
        assert_eq!(rec.c_world, None);
    }

    #[test]
    fn single_channel_adds_one_order_pair() {
        let q = QrtBuilder::new()
            .system("A", 2, vec![("a", DensityMatrix::basis(2, 0))])
            .system("B", 2, vec![("b", DensityMatrix::basis(2, 1))])
            .channel("phi", "A", "B", KrausChannel::replacement(2, &DensityMatrix::basis(2, 1)))
            .build_complete()
            .unwrap();
        let rec = functor_f_star(&q).unwrap();
        assert_eq!(order_pairs(&rec), BTreeSet::from([("A.a".into(), "B.b".into())]));
    }

    #[test]
    fn chain_order_contains_the_chain() {
        let rec = functor_f_star(&corpus::chain()).unwrap();
        let pairs = order_pairs(&rec);
        for (a, b) in [(P_C, "A.zero"), ("A.zero", "B.zero"), (P_C, "B.zero"), ("A.one", "B.one")] {
            assert!(pairs.contains(&(a.to_owned(), b.to_owned())), "{a} <= {b}");
        }
        assert!(!pairs.contains(&("B.zero".into(), "A.zero".into())));
    }

    #[test]
    fn entangled_atom_is_the_only_resource() {
        let rec = functor_f_star(&corpus::entanglement()).unwrap();
        assert_eq!(false_atoms(&rec), ["AB.phi"]);
        let pairs = order_pairs(&rec);
        assert!(pairs.contains(&("AB.phi".into(), "AB.zz".into())));
        assert!(!pairs.iter().any(|(_, b)| b == "AB.phi"));
        assert!(is_s4(&rec.model));
    }

    #[test]
    fn images_pass_thm4() {
        for (name, q) in corpus::examples() {
            let r = check_thm4_conditions(&functor_f(&q).unwrap().model);
            assert!(r.i && r.ii, "{name}: {r:?}");
            assert_eq!(r.c_world.as_deref(), Some("C"));
        }
    }

    #[test]
    fn broken_models_fail_thm4() {
        let r = check_thm4_conditions(&corpus::broken_thm4_i());
        assert!(!r.i && r.ii);
        assert_eq!(r.violation_i.map(|(_, u)| u).as_deref(), Some("u"));
        let r = check_thm4_conditions(&corpus::broken_thm4_ii());
        assert!(r.i && !r.ii);
    }

    #[test]
    fn invalid_sources_are_rejected() {
        assert!(matches!(functor_f(&corpus::broken_tp()), Err(TranslateError::InvalidSource(_))));
    }

    #[test]
    fn thm3_self_pairs() {
        for (name, q) in corpus::examples() {
            let r = check_thm3_conditions(&q, &q).unwrap();
            assert!(r.all() && r.dims_match, "{name}");
        }
    }

    #[test]
    fn thm3_free_set_mismatch() {
        let chain = corpus::chain();
        let unprepared = QrtBuilder::new()
            .trivial("C")
            .system("A", 2, vec![("zero", DensityMatrix::basis(2, 0)), ("one", DensityMatrix::basis(2, 1))])
            .system("B", 2, vec![("zero", DensityMatrix::basis(2, 0)), ("one", DensityMatrix::basis(2, 1))])
            .channel("move", "A", "B", KrausChannel::identity(2))
            .build_complete()
            .unwrap();
        let r = check_thm3_conditions(&chain, &unprepared).unwrap();
        assert!(r.i && !r.ii && !r.iii);
        assert!(models_isomorphic(&functor_f(&chain).unwrap().model, &functor_f(&unprepared).unwrap().model, 1 << 20)
            .unwrap()
            .is_none());
    }

    #[test]
    fn thm3_xi_pair() {
        let (x, y) = (corpus::xi_pair_x(), corpus::xi_pair_y());
        let r = check_thm3_conditions(&x, &y).unwrap();
        assert!(r.all() && r.dims_match);
        assert_ne!(x.function_set().unwrap(), y.function_set().unwrap());
        let fx = functor_f(&x).unwrap();
        let fy = functor_f(&y).unwrap();
        assert!(models_isomorphic(&fx.model, &fy.model, 1 << 20).unwrap().is_some());
    }

    #[test]
    fn thm3_necessity_gap() {
        let (x, y) = corpus::thm3_gap();
        let fx = functor_f(&x).unwrap();
        let fy = functor_f(&y).unwrap();
        assert!(models_isomorphic(&fx.model, &fy.model, 1 << 20).unwrap().is_some());
        let r = check_thm3_conditions(&x, &y).unwrap();
        assert!(r.i && r.ii && !r.iii);
    }

    #[test]
    fn functoriality_on_entanglement() {
        let e = corpus::entanglement();
        let renamed = e
            .relabel(&[2, 0, 3, 1], &|id| format!("{id}2"), &e.systems().iter().map(|s| (0..s.states.len()).collect()).collect::<Vec<_>>())
            .unwrap();
        let subs = vec![
            e.restrict(&["C", "A", "B"]).unwrap(),
            e.restrict(&["C", "A"]).unwrap(),
            e.restrict(&["A", "AB"]).unwrap(),
        ];
        let r = verify_functoriality(&e, &[renamed], &subs).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.checks.iter().any(|c| c.kind == "composite"));
        assert_eq!(r.checks.iter().filter(|c| c.kind == "inclusion").count(), 3);
    }

    #[test]
    fn injectivity_examples() {
        let e = corpus::entanglement();
        let renamed = e
            .relabel(&[0, 1, 2, 3], &|id| format!("Z{id}"), &e.systems().iter().map(|s| (0..s.states.len()).rev().collect()).collect::<Vec<_>>())
            .unwrap();
        let pairs = vec![
            ("renamed".to_owned(), e.clone(), renamed),
            ("free sizes differ".to_owned(), corpus::chain(), corpus::non_convex()),
        ];
        let r = verify_fstar_injectivity(&pairs).unwrap();
        assert_eq!(r.entries[0].starred_isomorphic, Some(true));
        assert_eq!(r.entries[0].labeled_isomorphic, Some(true));
        assert_eq!(r.entries[1].starred_isomorphic, Some(false));
        assert_eq!(r.count(InjectivityStatus::Consistent), 2);
    }

    #[test]
    fn xi_sweep_is_consistent() {
        let r = verify_fstar_injectivity(&corpus::xi_sweep()).unwrap();
        assert_eq!(r.entries.len(), 6);
        assert_eq!(r.count(InjectivityStatus::Falsified), 0);
    }

    #[test]
    fn fstar_collision_is_flagged() {
        let (x, y) = corpus::fstar_collision();
        let r = verify_fstar_injectivity(&[("collision".into(), x, y)]).unwrap();
        let e = &r.entries[0];
        assert_eq!((e.starred_isomorphic, e.labeled_isomorphic), (Some(true), Some(false)));
        assert_eq!(e.status, InjectivityStatus::Falsified);
        assert!(e.model_witness.is_some());
    }

    #[test]
    fn injectivity_search_cap_gives_inconclusive() {
        let e = corpus::entanglement();
        let tol = crate::config::Tolerances { max_iso_nodes: 1, ..*e.tolerances() };
        let capped = Qrt::new_raw(e.systems().to_vec(), e.channels().to_vec(), e.trivial_id().map(str::to_owned), tol).unwrap();
        let r = verify_fstar_injectivity(&[("capped".into(), capped.clone(), capped)]).unwrap();
        assert_eq!(r.entries[0].status, InjectivityStatus::Inconclusive);
        assert!(r.entries[0].note.is_some());
    }
}
