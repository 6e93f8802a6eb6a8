//! Variable-domain Kripke models `<W, R, D, Q, I>` and their starred
//! (preordered-domain) variant.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::relation::{PreorderViolation, Relation};

#[derive(Debug, Error)]
pub enum KripkeError {
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("unknown world {0}")]
    UnknownWorld(String),
    #[error("unknown atom {0}")]
    UnknownAtom(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

/// A VDML model. World and atom ids are opaque; internally both are indexed
/// in declaration order.
#[derive(Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: Vec<String>,
    access: Relation,
    atoms: Vec<String>,
    domains: Vec<BTreeSet<usize>>,
    interp: Vec<bool>,
    world_index: HashMap<String, usize>,
    atom_index: HashMap<String, usize>,
}

fn index(ids: &[String], what: &str) -> Result<HashMap<String, usize>, KripkeError> {
    let mut map = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if map.insert(id.clone(), i).is_some() {
            return Err(KripkeError::Malformed(format!("duplicate {what} {id}")));
        }
    }
    Ok(map)
}

impl KripkeModel {
    /// Builds a model from ids. Worlds absent from `domains` get an empty domain.
    pub fn new(
        worlds: Vec<String>,
        access: Vec<(String, String)>,
        atoms: Vec<String>,
        domains: BTreeMap<String, Vec<String>>,
        interp: BTreeMap<String, bool>,
    ) -> Result<Self, KripkeError> {
        let world_index = index(&worlds, "world")?;
        let atom_index = index(&atoms, "atom")?;
        let w = |id: &String| {
            world_index
                .get(id)
                .copied()
                .ok_or_else(|| KripkeError::Malformed(format!("access pair names unknown world {id}")))
        };
        let mut rel = Relation::empty(worlds.len());
        for (a, b) in &access {
            rel.insert(w(a)?, w(b)?);
        }
        let mut doms = vec![BTreeSet::new(); worlds.len()];
        for (world, members) in &domains {
            let wi = world_index
                .get(world)
                .ok_or_else(|| KripkeError::Malformed(format!("domain given for unknown world {world}")))?;
            for m in members {
                let ai = atom_index.get(m).ok_or_else(|| {
                    KripkeError::Malformed(format!("domain of {world} contains {m}, which is not in D"))
                })?;
                doms[*wi].insert(*ai);
            }
        }
        let mut truth = vec![None; atoms.len()];
        for (a, v) in &interp {
            let ai = atom_index
                .get(a)
                .ok_or_else(|| KripkeError::Malformed(format!("interpretation of unknown atom {a}")))?;
            truth[*ai] = Some(*v);
        }
        let interp = truth
            .iter()
            .zip(&atoms)
            .map(|(t, a)| t.ok_or_else(|| KripkeError::Malformed(format!("interpretation missing for atom {a}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_indexed(worlds, rel, atoms, doms, interp)
    }

    /// Builds a model from index-level data.
    pub fn from_indexed(
        worlds: Vec<String>,
        access: Relation,
        atoms: Vec<String>,
        domains: Vec<BTreeSet<usize>>,
        interp: Vec<bool>,
    ) -> Result<Self, KripkeError> {
        if worlds.is_empty() {
            return Err(KripkeError::Malformed("W is empty".into()));
        }
        if atoms.is_empty() {
            return Err(KripkeError::Malformed("D is empty".into()));
        }
        if access.size() != worlds.len() || domains.len() != worlds.len() || interp.len() != atoms.len() {
            return Err(KripkeError::Malformed("component sizes disagree".into()));
        }
        if domains.iter().flatten().any(|&a| a >= atoms.len()) {
            return Err(KripkeError::Malformed("a domain refers to an atom outside D".into()));
        }
        let world_index = index(&worlds, "world")?;
        let atom_index = index(&atoms, "atom")?;
        Ok(KripkeModel {
            worlds,
            access,
            atoms,
            domains,
            interp,
            world_index,
            atom_index,
        })
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn access(&self) -> &Relation {
        &self.access
    }

    /// `Q(w)` as atom indices.
    pub fn domain(&self, world: usize) -> &BTreeSet<usize> {
        &self.domains[world]
    }

    pub fn truth(&self, atom: usize) -> bool {
        self.interp[atom]
    }

    pub fn interp(&self) -> &[bool] {
        &self.interp
    }

    pub fn world_index(&self, id: &str) -> Option<usize> {
        self.world_index.get(id).copied()
    }

    pub fn atom_index(&self, id: &str) -> Option<usize> {
        self.atom_index.get(id).copied()
    }

    /// `T(w)`: atoms of `Q(w)` that are true.
    pub fn true_atoms(&self, world: usize) -> BTreeSet<usize> {
        self.domains[world].iter().copied().filter(|&a| self.interp[a]).collect()
    }

    /// Worlds whose domain contains the atom.
    pub fn membership(&self, atom: usize) -> BTreeSet<usize> {
        (0..self.worlds.len()).filter(|&w| self.domains[w].contains(&atom)).collect()
    }

    /// The same model with one truth value replaced.
    pub fn with_truth(&self, atom: usize, value: bool) -> Self {
        let mut m = self.clone();
        m.interp[atom] = value;
        m
    }

    /// Renames worlds and atoms; the structure is unchanged.
    pub fn relabeled(&self, world: &dyn Fn(&str) -> String, atom: &dyn Fn(&str) -> String) -> Result<Self, KripkeError> {
        Self::from_indexed(
            self.worlds.iter().map(|w| world(w)).collect(),
            self.access.clone(),
            self.atoms.iter().map(|a| atom(a)).collect(),
            self.domains.clone(),
            self.interp.clone(),
        )
    }
}

impl fmt::Debug for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let access: Vec<(&str, &str)> = self
            .access
            .pairs()
            .map(|(a, b)| (self.worlds[a].as_str(), self.worlds[b].as_str()))
            .collect();
        let domains: BTreeMap<&str, Vec<&str>> = self
            .worlds
            .iter()
            .enumerate()
            .map(|(w, id)| (id.as_str(), self.domains[w].iter().map(|&a| self.atoms[a].as_str()).collect()))
            .collect();
        f.debug_struct("KripkeModel")
            .field("worlds", &self.worlds)
            .field("access", &access)
            .field("domains", &domains)
            .field("interp", &self.atoms.iter().zip(&self.interp).collect::<Vec<_>>())
            .finish()
    }
}

/// A model together with a preorder on its global domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarredModel {
    model: KripkeModel,
    order: Relation,
}

impl StarredModel {
    pub fn new(model: KripkeModel, order: Relation) -> Result<Self, KripkeError> {
        if order.size() != model.atoms().len() {
            return Err(KripkeError::Malformed("order is not a relation on D".into()));
        }
        match order.preorder_violation() {
            None => Ok(StarredModel { model, order }),
            Some(PreorderViolation::NotReflexive(a)) => Err(KripkeError::Malformed(format!(
                "order is not reflexive at {}",
                model.atoms()[a]
            ))),
            Some(PreorderViolation::NotTransitive(a, b, c)) => Err(KripkeError::Malformed(format!(
                "order is not transitive: {} <= {} <= {}",
                model.atoms()[a],
                model.atoms()[b],
                model.atoms()[c]
            ))),
        }
    }

    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    pub fn order(&self) -> &Relation {
        &self.order
    }
}

/// Why the accessibility relation is not a preorder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum S4Violation {
    NotReflexive { world: String },
    NotTransitive { w: String, u: String, v: String },
}

impl fmt::Display for S4Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            S4Violation::NotReflexive { world } => write!(f, "({world}, {world}) missing from R"),
            S4Violation::NotTransitive { w, u, v } => {
                write!(f, "({w}, {u}) and ({u}, {v}) in R but ({w}, {v}) is not")
            }
        }
    }
}

/// The first reflexivity or transitivity failure of `R`, if any.
pub fn s4_counterexample(m: &KripkeModel) -> Option<S4Violation> {
    let name = |i: usize| m.worlds[i].clone();
    m.access.preorder_violation().map(|v| match v {
        PreorderViolation::NotReflexive(w) => S4Violation::NotReflexive { world: name(w) },
        PreorderViolation::NotTransitive(a, b, c) => S4Violation::NotTransitive {
            w: name(a),
            u: name(b),
            v: name(c),
        },
    })
}

pub fn is_s4(m: &KripkeModel) -> bool {
    s4_counterexample(m).is_none()
}

/// `sub` is a sub-model of `m`: its worlds are worlds of `m`, its access is
/// `m`'s restricted to them, domains agree, and truth in `sub` implies truth in `m`.
pub fn is_sub_model(sub: &KripkeModel, m: &KripkeModel) -> bool {
    let Some(worlds) = sub
        .worlds
        .iter()
        .map(|w| m.world_index(w))
        .collect::<Option<Vec<usize>>>()
    else {
        return false;
    };
    let Some(atoms) = sub
        .atoms
        .iter()
        .map(|a| m.atom_index(a))
        .collect::<Option<Vec<usize>>>()
    else {
        return false;
    };
    if m.access.restrict(&worlds) != sub.access {
        return false;
    }
    for (i, &w) in worlds.iter().enumerate() {
        let mapped: BTreeSet<usize> = sub.domains[i].iter().map(|&a| atoms[a]).collect();
        if mapped != m.domains[w] {
            return false;
        }
    }
    atoms.iter().enumerate().all(|(i, &a)| !sub.interp[i] || m.interp[a])
}

/// World and atom correspondences, by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelIsomorphism {
    pub worlds: Vec<(String, String)>,
    pub atoms: Vec<(String, String)>,
}

type WorldSignature = (usize, usize, usize, usize, bool);

fn world_signature(m: &KripkeModel, w: usize) -> WorldSignature {
    (
        m.access.in_degree(w),
        m.access.out_degree(w),
        m.domains[w].len(),
        m.true_atoms(w).len(),
        m.access.contains(w, w),
    )
}

struct IsoSearch<'a> {
    a: &'a KripkeModel,
    b: &'a KripkeModel,
    orders: Option<(&'a Relation, &'a Relation)>,
    a_sig: Vec<WorldSignature>,
    b_sig: Vec<WorldSignature>,
    a_members: Vec<BTreeSet<usize>>,
    b_members: Vec<BTreeSet<usize>>,
    world_map: Vec<usize>,
    world_used: Vec<bool>,
    atom_map: Vec<usize>,
    atom_used: Vec<bool>,
    nodes: u64,
    cap: u64,
}

const UNSET: usize = usize::MAX;

impl IsoSearch<'_> {
    fn tick(&mut self) -> Result<(), KripkeError> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(KripkeError::ResourceLimit(format!(
                "model isomorphism search exceeded {} nodes",
                self.cap
            )));
        }
        Ok(())
    }

    fn worlds(&mut self, i: usize) -> Result<bool, KripkeError> {
        let n = self.a.worlds.len();
        if i == n {
            return self.atoms_start();
        }
        for cand in 0..n {
            if self.world_used[cand] || self.a_sig[i] != self.b_sig[cand] {
                continue;
            }
            self.tick()?;
            let consistent = (0..i).all(|j| {
                let cj = self.world_map[j];
                self.a.access.contains(i, j) == self.b.access.contains(cand, cj)
                    && self.a.access.contains(j, i) == self.b.access.contains(cj, cand)
            });
            if !consistent {
                continue;
            }
            self.world_map[i] = cand;
            self.world_used[cand] = true;
            if self.worlds(i + 1)? {
                return Ok(true);
            }
            self.world_map[i] = UNSET;
            self.world_used[cand] = false;
        }
        Ok(false)
    }

    fn atom_key(&self, atom: usize) -> (bool, BTreeSet<usize>, usize, usize) {
        let (ia, ib) = match self.orders {
            Some((oa, _)) => (oa.in_degree(atom), oa.out_degree(atom)),
            None => (0, 0),
        };
        let mapped = self.a_members[atom].iter().map(|&w| self.world_map[w]).collect();
        (self.a.interp[atom], mapped, ia, ib)
    }

    fn target_key(&self, atom: usize) -> (bool, BTreeSet<usize>, usize, usize) {
        let (ia, ib) = match self.orders {
            Some((_, ob)) => (ob.in_degree(atom), ob.out_degree(atom)),
            None => (0, 0),
        };
        (self.b.interp[atom], self.b_members[atom].clone(), ia, ib)
    }

    /// With the worlds fixed, atoms must map within classes of equal
    /// (truth, mapped membership) and, for starred models, respect the order.
    fn atoms_start(&mut self) -> Result<bool, KripkeError> {
        let n = self.a.atoms.len();
        let a_keys: Vec<_> = (0..n).map(|x| self.atom_key(x)).collect();
        let b_keys: Vec<_> = (0..n).map(|y| self.target_key(y)).collect();
        let mut sa = a_keys.clone();
        let mut sb = b_keys.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(false);
        }
        if self.orders.is_none() {
            let mut pools: BTreeMap<_, Vec<usize>> = BTreeMap::new();
            for (y, k) in b_keys.into_iter().enumerate().rev() {
                pools.entry(k).or_default().push(y);
            }
            for (x, k) in a_keys.iter().enumerate() {
                self.atom_map[x] = pools.get_mut(k).and_then(Vec::pop).expect("classes have equal sizes");
            }
            return Ok(true);
        }
        self.atoms(0, &a_keys, &b_keys)
    }

    fn atoms(
        &mut self,
        x: usize,
        a_keys: &[(bool, BTreeSet<usize>, usize, usize)],
        b_keys: &[(bool, BTreeSet<usize>, usize, usize)],
    ) -> Result<bool, KripkeError> {
        let n = self.a.atoms.len();
        if x == n {
            return Ok(true);
        }
        let (oa, ob) = self.orders.expect("starred search");
        for y in 0..n {
            if self.atom_used[y] || a_keys[x] != b_keys[y] {
                continue;
            }
            self.tick()?;
            let consistent = (0..x).all(|z| {
                let yz = self.atom_map[z];
                oa.contains(x, z) == ob.contains(y, yz) && oa.contains(z, x) == ob.contains(yz, y)
            }) && oa.contains(x, x) == ob.contains(y, y);
            if !consistent {
                continue;
            }
            self.atom_map[x] = y;
            self.atom_used[y] = true;
            if self.atoms(x + 1, a_keys, b_keys)? {
                return Ok(true);
            }
            self.atom_map[x] = UNSET;
            self.atom_used[y] = false;
        }
        Ok(false)
    }
}

fn search(
    a: &KripkeModel,
    b: &KripkeModel,
    orders: Option<(&Relation, &Relation)>,
    cap: u64,
) -> Result<Option<ModelIsomorphism>, KripkeError> {
    if a.worlds.len() != b.worlds.len()
        || a.atoms.len() != b.atoms.len()
        || a.access.len() != b.access.len()
        || a.interp.iter().filter(|t| **t).count() != b.interp.iter().filter(|t| **t).count()
    {
        return Ok(None);
    }
    if let Some((oa, ob)) = orders {
        if oa.len() != ob.len() {
            return Ok(None);
        }
    }
    let a_sig: Vec<_> = (0..a.worlds.len()).map(|w| world_signature(a, w)).collect();
    let b_sig: Vec<_> = (0..b.worlds.len()).map(|w| world_signature(b, w)).collect();
    let mut sa = a_sig.clone();
    let mut sb = b_sig.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    let mut s = IsoSearch {
        a,
        b,
        orders,
        a_sig,
        b_sig,
        a_members: (0..a.atoms.len()).map(|x| a.membership(x)).collect(),
        b_members: (0..b.atoms.len()).map(|x| b.membership(x)).collect(),
        world_map: vec![UNSET; a.worlds.len()],
        world_used: vec![false; b.worlds.len()],
        atom_map: vec![UNSET; a.atoms.len()],
        atom_used: vec![false; b.atoms.len()],
        nodes: 0,
        cap,
    };
    if !s.worlds(0)? {
        return Ok(None);
    }
    Ok(Some(ModelIsomorphism {
        worlds: (0..a.worlds.len())
            .map(|w| (a.worlds[w].clone(), b.worlds[s.world_map[w]].clone()))
            .collect(),
        atoms: (0..a.atoms.len())
            .map(|x| (a.atoms[x].clone(), b.atoms[s.atom_map[x]].clone()))
            .collect(),
    }))
}

/// Backtracking search for `(φ_W, φ_D)`; `Ok(None)` means the models are not isomorphic.
pub fn models_isomorphic(a: &KripkeModel, b: &KripkeModel, cap: u64) -> Result<Option<ModelIsomorphism>, KripkeError> {
    search(a, b, None, cap)
}

/// As [`models_isomorphic`], additionally requiring `x ⪯ y ⇔ φ_D(x) ⪯ φ_D(y)`.
pub fn starred_isomorphic(
    a: &StarredModel,
    b: &StarredModel,
    cap: u64,
) -> Result<Option<ModelIsomorphism>, KripkeError> {
    search(&a.model, &b.model, Some((&a.order, &b.order)), cap)
}

/// Checks that a claimed witness satisfies every isomorphism clause.
pub fn check_isomorphism(
    a: &KripkeModel,
    b: &KripkeModel,
    orders: Option<(&Relation, &Relation)>,
    witness: &ModelIsomorphism,
) -> bool {
    let lookup = |pairs: &[(String, String)], ia: &dyn Fn(&str) -> Option<usize>, ib: &dyn Fn(&str) -> Option<usize>| {
        let mut map = vec![UNSET; pairs.len()];
        let mut used = vec![false; pairs.len()];
        for (x, y) in pairs {
            let (Some(x), Some(y)) = (ia(x), ib(y)) else { return None };
            if x >= map.len() || y >= used.len() || map[x] != UNSET || used[y] {
                return None;
            }
            map[x] = y;
            used[y] = true;
        }
        Some(map)
    };
    if witness.worlds.len() != a.worlds.len()
        || witness.atoms.len() != a.atoms.len()
        || a.worlds.len() != b.worlds.len()
        || a.atoms.len() != b.atoms.len()
    {
        return false;
    }
    let Some(fw) = lookup(&witness.worlds, &|s| a.world_index(s), &|s| b.world_index(s)) else {
        return false;
    };
    let Some(fd) = lookup(&witness.atoms, &|s| a.atom_index(s), &|s| b.atom_index(s)) else {
        return false;
    };
    let n = a.worlds.len();
    for w in 0..n {
        for u in 0..n {
            if a.access.contains(w, u) != b.access.contains(fw[w], fw[u]) {
                return false;
            }
        }
        let mapped: BTreeSet<usize> = a.domains[w].iter().map(|&x| fd[x]).collect();
        if mapped != b.domains[fw[w]] {
            return false;
        }
    }
    if (0..a.atoms.len()).any(|x| a.interp[x] != b.interp[fd[x]]) {
        return false;
    }
    if let Some((oa, ob)) = orders {
        for x in 0..a.atoms.len() {
            for y in 0..a.atoms.len() {
                if oa.contains(x, y) != ob.contains(fd[x], fd[y]) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_owned()
    }

    pub(crate) fn model(
        worlds: &[&str],
        access: &[(&str, &str)],
        domains: &[(&str, &[&str])],
        interp: &[(&str, bool)],
    ) -> KripkeModel {
        KripkeModel::new(
            worlds.iter().map(|w| s(w)).collect(),
            access.iter().map(|(a, b)| (s(a), s(b))).collect(),
            interp.iter().map(|(a, _)| s(a)).collect(),
            domains
                .iter()
                .map(|(w, ds)| (s(w), ds.iter().map(|d| s(d)).collect()))
                .collect(),
            interp.iter().map(|(a, v)| (s(a), *v)).collect(),
        )
        .unwrap()
    }

    fn sample() -> KripkeModel {
        model(
            &["c", "a", "b"],
            &[("c", "c"), ("a", "a"), ("b", "b"), ("c", "a"), ("c", "b"), ("a", "b")],
            &[("c", &["p"]), ("a", &["x", "y"]), ("b", &["z"])],
            &[("p", true), ("x", true), ("y", false), ("z", true)],
        )
    }

    #[test]
    fn s4_examples() {
        let one = model(&["w"], &[("w", "w")], &[("w", &["p"])], &[("p", true)]);
        assert!(is_s4(&one));
        let m = model(&["w", "u"], &[("w", "u")], &[], &[("p", true)]);
        assert_eq!(s4_counterexample(&m), Some(S4Violation::NotReflexive { world: s("w") }));
        let m = model(
            &["w", "u", "v"],
            &[("w", "w"), ("u", "u"), ("w", "u"), ("u", "v"), ("v", "v")],
            &[],
            &[("p", true)],
        );
        assert_eq!(
            s4_counterexample(&m),
            Some(S4Violation::NotTransitive {
                w: s("w"),
                u: s("u"),
                v: s("v")
            })
        );
    }

    #[test]
    fn sub_model_truth_condition_is_one_directional() {
        let m = sample();
        assert!(is_sub_model(&m, &m));
        let x = m.atom_index("x").unwrap();
        assert!(is_sub_model(&m.with_truth(x, false), &m));
        let y = m.atom_index("y").unwrap();
        assert!(!is_sub_model(&m.with_truth(y, true), &m));
    }

    #[test]
    fn sub_model_requires_restricted_access_and_equal_domains() {
        let m = sample();
        let sub = model(
            &["a", "b"],
            &[("a", "a"), ("b", "b"), ("a", "b")],
            &[("a", &["x", "y"]), ("b", &["z"])],
            &[("x", true), ("y", false), ("z", true)],
        );
        assert!(is_sub_model(&sub, &m));
        let missing_edge = model(
            &["a", "b"],
            &[("a", "a"), ("b", "b")],
            &[("a", &["x", "y"]), ("b", &["z"])],
            &[("x", true), ("y", false), ("z", true)],
        );
        assert!(!is_sub_model(&missing_edge, &m));
        let shrunk = model(
            &["a", "b"],
            &[("a", "a"), ("b", "b"), ("a", "b")],
            &[("a", &["x"]), ("b", &["z"])],
            &[("x", true), ("z", true)],
        );
        assert!(!is_sub_model(&shrunk, &m));
    }

    #[test]
    fn relabeled_model_is_isomorphic_with_the_relabeling() {
        let m = sample();
        let r = m
            .relabeled(&|w| format!("W{w}"), &|a| format!("{a}'"))
            .unwrap();
        let iso = models_isomorphic(&m, &r, 1_000).unwrap().expect("isomorphic");
        assert!(check_isomorphism(&m, &r, None, &iso));
        assert!(iso.worlds.contains(&(s("a"), s("Wa"))));
    }

    #[test]
    fn different_world_counts_or_one_truth_value_differ() {
        let m = sample();
        let one = model(&["w"], &[("w", "w")], &[("w", &["p"])], &[("p", true)]);
        assert!(models_isomorphic(&m, &one, 10).unwrap().is_none());
        let y = m.atom_index("y").unwrap();
        assert!(models_isomorphic(&m, &m.with_truth(y, true), 1_000).unwrap().is_none());
    }

    #[test]
    fn starred_examples() {
        let m = model(
            &["w"],
            &[("w", "w")],
            &[("w", &["a", "b", "c"])],
            &[("a", false), ("b", false), ("c", false)],
        );
        let chain = Relation::from_pairs(3, [(0, 1), (1, 2)]).reflexive_transitive_closure();
        let anti = Relation::diagonal(3);
        let sc = StarredModel::new(m.clone(), chain).unwrap();
        let sa = StarredModel::new(m, anti).unwrap();
        assert!(starred_isomorphic(&sc, &sc, 1_000).unwrap().is_some());
        assert!(starred_isomorphic(&sc, &sa, 1_000).unwrap().is_none());
        assert!(models_isomorphic(sc.model(), sa.model(), 1_000).unwrap().is_some());
    }

    #[test]
    fn starred_search_needs_backtracking_within_a_class() {
        let m = model(
            &["w"],
            &[("w", "w")],
            &[("w", &["a", "b", "c", "d"])],
            &[("a", false), ("b", false), ("c", false), ("d", false)],
        );
        let x = Relation::from_pairs(4, [(0, 1), (2, 3)]).reflexive_transitive_closure();
        let y = Relation::from_pairs(4, [(3, 0), (1, 2)]).reflexive_transitive_closure();
        let sx = StarredModel::new(m.clone(), x).unwrap();
        let sy = StarredModel::new(m, y).unwrap();
        let iso = starred_isomorphic(&sx, &sy, 1_000).unwrap().expect("isomorphic");
        assert!(check_isomorphism(sx.model(), sy.model(), Some((sx.order(), sy.order())), &iso));
    }

    #[test]
    fn non_preorder_is_rejected() {
        let m = sample();
        assert!(StarredModel::new(m, Relation::empty(4)).is_err());
    }

    #[test]
    fn node_cap_is_a_resource_limit() {
        let worlds: Vec<String> = (0..6).map(|i| format!("w{i}")).collect();
        let m = KripkeModel::from_indexed(
            worlds.clone(),
            Relation::diagonal(6),
            vec![s("p")],
            vec![BTreeSet::new(); 6],
            vec![true],
        )
        .unwrap();
        let m2 = m.with_truth(0, true);
        // identical models, but a cap of 2 cannot place six interchangeable worlds
        assert!(matches!(models_isomorphic(&m, &m2, 2), Err(KripkeError::ResourceLimit(_))));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(KripkeModel::new(vec![], vec![], vec![s("p")], BTreeMap::new(), BTreeMap::new()).is_err());
        let err = KripkeModel::new(
            vec![s("w")],
            vec![(s("w"), s("u"))],
            vec![s("p")],
            BTreeMap::new(),
            [(s("p"), true)].into(),
        );
        assert!(err.is_err());
        let missing = KripkeModel::new(vec![s("w")], vec![], vec![s("p")], BTreeMap::new(), BTreeMap::new());
        assert!(missing.is_err());
    }
}
