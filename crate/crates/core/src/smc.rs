//! The strict symmetric monoidal category built on a starred model with a
//! c-world: objects are finite atom sets with `p_c` absorbed, `⊗` is union,
//! the unit is the empty set, and morphisms are componentwise arrows.
//!
//! A morphism `x -> y` sends every atom of `x` to an atom of `y` or to the
//! unit, and feeds every atom of `y` it does not hit from the unit. Morphisms
//! out of the unit into tensors are this componentwise extension; the
//! underlying construction only fixes arrows between atoms.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::kripke::StarredModel;
use crate::translate::check_thm4_conditions;

pub const DEFAULT_OBJECT_CAP: usize = 5;
/// Largest number of object triples visited by the exhaustive law checks.
pub const DEFAULT_TRIPLE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Error)]
pub enum SmcError {
    #[error("structural error: {0}")]
    Structure(String),
}

/// A normalized atom set, as a bit mask over [`Smc::atoms`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmcObject(pub u64);

impl SmcObject {
    pub const UNIT: SmcObject = SmcObject(0);

    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_unit(self) -> bool {
        self.0 == 0
    }

    pub fn tensor(self, other: SmcObject) -> SmcObject {
        SmcObject(self.0 | other.0)
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.0 >> i & 1 == 1)
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }
}

/// Componentwise morphism. `assign[i] = (x, Some(y))` sends source atom `x`
/// to target atom `y`; `None` sends it to the unit. `unit_fed` lists target
/// atoms fed from the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmcMorphism {
    pub source: SmcObject,
    pub target: SmcObject,
    pub assign: Vec<(usize, Option<usize>)>,
    pub unit_fed: Vec<usize>,
}

/// The category: atoms other than `p_c`, objects up to the size cap, and
/// the arrow relation on atoms.
#[derive(Debug, Clone)]
pub struct Smc {
    atoms: Vec<String>,
    truth: Vec<bool>,
    p_c: String,
    /// `arrow[x][y]` over atom indices, `k` (= atoms.len()) standing for `p_c`.
    arrow: Vec<Vec<bool>>,
    objects: Vec<SmcObject>,
    cap: usize,
}

impl Smc {
    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn objects(&self) -> &[SmcObject] {
        &self.objects
    }

    pub fn object_cap(&self) -> usize {
        self.cap
    }

    pub fn p_c(&self) -> &str {
        &self.p_c
    }

    fn unit_index(&self) -> usize {
        self.atoms.len()
    }

    pub fn truth(&self, atom: usize) -> bool {
        self.truth[atom]
    }

    /// Arrow between atoms; `None` stands for `p_c`.
    pub fn arrow(&self, x: Option<usize>, y: Option<usize>) -> bool {
        let u = self.unit_index();
        self.arrow[x.unwrap_or(u)][y.unwrap_or(u)]
    }

    pub fn object_names(&self, x: SmcObject) -> Vec<&str> {
        x.members().map(|a| self.atoms[a].as_str()).collect()
    }

    pub fn object_from_names(&self, names: &[&str]) -> Option<SmcObject> {
        let mut mask = 0u64;
        for n in names {
            if *n == self.p_c {
                continue;
            }
            mask |= 1 << self.atoms.iter().position(|a| a == n)?;
        }
        Some(SmcObject(mask))
    }

    /// A morphism `x -> y`, if any: a matching covers the targets the unit
    /// cannot feed, and every remaining source atom picks its first option.
    pub fn hom(&self, x: SmcObject, y: SmcObject) -> Option<SmcMorphism> {
        let sources: Vec<usize> = x.members().collect();
        let targets: Vec<usize> = y.members().collect();
        let needy: Vec<usize> = targets
            .iter()
            .copied()
            .filter(|&t| !self.arrow(None, Some(t)))
            .collect();
        let mut matched_source: Vec<Option<usize>> = vec![None; needy.len()];
        let mut source_taken: Vec<Option<usize>> = vec![None; sources.len()];
        for j in 0..needy.len() {
            let mut seen = vec![false; sources.len()];
            if !self.augment(j, &sources, &needy, &mut seen, &mut matched_source, &mut source_taken) {
                return None;
            }
        }
        let mut assign = Vec::with_capacity(sources.len());
        for (i, &s) in sources.iter().enumerate() {
            let choice = match source_taken[i] {
                Some(j) => Some(needy[j]),
                None => {
                    if let Some(&t) = targets.iter().find(|&&t| self.arrow(Some(s), Some(t))) {
                        Some(t)
                    } else if self.arrow(Some(s), None) {
                        None
                    } else {
                        return None;
                    }
                }
            };
            assign.push((s, choice));
        }
        let hit: BTreeSet<usize> = assign.iter().filter_map(|(_, t)| *t).collect();
        let unit_fed = targets.iter().copied().filter(|t| !hit.contains(t)).collect();
        Some(SmcMorphism {
            source: x,
            target: y,
            assign,
            unit_fed,
        })
    }

    fn augment(
        &self,
        j: usize,
        sources: &[usize],
        needy: &[usize],
        seen: &mut [bool],
        matched_source: &mut [Option<usize>],
        source_taken: &mut [Option<usize>],
    ) -> bool {
        for (i, &s) in sources.iter().enumerate() {
            if seen[i] || !self.arrow(Some(s), Some(needy[j])) {
                continue;
            }
            seen[i] = true;
            let free = match source_taken[i] {
                None => true,
                Some(other) => self.augment(other, sources, needy, seen, matched_source, source_taken),
            };
            if free {
                source_taken[i] = Some(j);
                matched_source[j] = Some(i);
                return true;
            }
        }
        false
    }

    pub fn identity(&self, x: SmcObject) -> SmcMorphism {
        SmcMorphism {
            source: x,
            target: x,
            assign: x.members().map(|a| (a, Some(a))).collect(),
            unit_fed: Vec::new(),
        }
    }

    /// Every component satisfies the arrow condition, every source atom is
    /// assigned once, and every target atom is hit or fed from the unit.
    pub fn is_morphism(&self, f: &SmcMorphism) -> bool {
        let sources: BTreeSet<usize> = f.assign.iter().map(|(s, _)| *s).collect();
        if sources.len() != f.assign.len() || sources != f.source.members().collect() {
            return false;
        }
        let mut covered: BTreeSet<usize> = BTreeSet::new();
        for &(s, t) in &f.assign {
            if let Some(t) = t {
                if !f.target.contains(t) {
                    return false;
                }
                covered.insert(t);
            }
            if !self.arrow(Some(s), t) {
                return false;
            }
        }
        for &t in &f.unit_fed {
            if !f.target.contains(t) || !self.arrow(None, Some(t)) {
                return false;
            }
            covered.insert(t);
        }
        covered == f.target.members().collect()
    }

    /// `g ∘ f`, componentwise. Target atoms of `g` fed by a unit-fed atom of
    /// `f`'s target become unit-fed.
    pub fn compose(&self, g: &SmcMorphism, f: &SmcMorphism) -> Option<SmcMorphism> {
        if f.target != g.source {
            return None;
        }
        let g_of = |y: usize| g.assign.iter().find(|(s, _)| *s == y).map(|(_, t)| *t);
        let mut assign = Vec::with_capacity(f.assign.len());
        for &(x, t) in &f.assign {
            assign.push((x, t.and_then(|y| g_of(y).expect("g covers its source"))));
        }
        let hit: BTreeSet<usize> = assign.iter().filter_map(|(_, t)| *t).collect();
        let unit_fed = g.target.members().filter(|z| !hit.contains(z)).collect();
        Some(SmcMorphism {
            source: f.source,
            target: g.target,
            assign,
            unit_fed,
        })
    }
}

/// Builds the category on a starred model that has a c-world whose atom is true.
pub fn build_smc(sm: &StarredModel, cap: usize) -> Result<Smc, SmcError> {
    let m = sm.model();
    let thm4 = check_thm4_conditions(m);
    let c = thm4
        .c_world
        .as_deref()
        .and_then(|c| m.world_index(c))
        .ok_or_else(|| SmcError::Structure("model has no c-world".into()))?;
    let pc = *m.domain(c).iter().next().expect("c-world domain is a singleton");
    if !m.truth(pc) {
        return Err(SmcError::Structure(format!("I({}) = 0 violates ⊢ p_c", m.atoms()[pc])));
    }
    let others: Vec<usize> = (0..m.atoms().len()).filter(|&a| a != pc).collect();
    if others.len() > 63 {
        return Err(SmcError::Structure(format!(
            "{} atoms exceed the 63 representable in an object",
            others.len()
        )));
    }
    let indices: Vec<usize> = others.iter().copied().chain([pc]).collect();
    let membership: Vec<BTreeSet<usize>> = (0..m.atoms().len()).map(|a| m.membership(a)).collect();
    let arrow = indices
        .iter()
        .map(|&x| {
            indices
                .iter()
                .map(|&y| {
                    sm.order().contains(x, y)
                        && membership[x]
                            .iter()
                            .any(|&w| membership[y].iter().any(|&u| m.access().contains(w, u)))
                })
                .collect()
        })
        .collect();
    let k = others.len();
    let cap = cap.min(k);
    let objects = (0u64..1 << k)
        .filter(|mask| mask.count_ones() as usize <= cap)
        .map(SmcObject)
        .collect();
    Ok(Smc {
        atoms: others.iter().map(|&a| m.atoms()[a].clone()).collect(),
        truth: others.iter().map(|&a| m.truth(a)).collect(),
        p_c: m.atoms()[pc].clone(),
        arrow,
        objects,
        cap,
    })
}

/// Objects with a morphism from the unit.
pub fn free_objects(smc: &Smc) -> Vec<SmcObject> {
    smc.objects
        .iter()
        .copied()
        .filter(|&x| smc.hom(SmcObject::UNIT, x).is_some())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawStatus {
    Passed,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub law: &'static str,
    pub checked: u64,
    pub violations: u64,
    pub status: LawStatus,
    pub example: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmcReport {
    pub objects: usize,
    pub object_cap: usize,
    pub free_objects: usize,
    pub laws: Vec<LawCheck>,
    pub note: &'static str,
}

impl SmcReport {
    pub fn status(&self) -> LawStatus {
        if self.laws.iter().any(|l| l.status == LawStatus::Failed) {
            LawStatus::Failed
        } else if self.laws.iter().any(|l| l.status == LawStatus::Inconclusive) {
            LawStatus::Inconclusive
        } else {
            LawStatus::Passed
        }
    }

    pub fn law(&self, name: &str) -> Option<&LawCheck> {
        self.laws.iter().find(|l| l.law == name)
    }
}

struct Tally {
    law: &'static str,
    checked: u64,
    violations: u64,
    example: Option<String>,
    truncated: bool,
}

impl Tally {
    fn new(law: &'static str) -> Self {
        Tally {
            law,
            checked: 0,
            violations: 0,
            example: None,
            truncated: false,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.example.is_none() {
                self.example = Some(describe());
            }
        }
    }

    fn finish(self) -> LawCheck {
        let status = if self.violations > 0 {
            LawStatus::Failed
        } else if self.truncated {
            LawStatus::Inconclusive
        } else {
            LawStatus::Passed
        };
        LawCheck {
            law: self.law,
            checked: self.checked,
            violations: self.violations,
            status,
            example: self.example,
        }
    }
}

/// Exhaustively checks the monoidal laws over all objects up to the cap,
/// hom-transitivity and composition closure over all object triples, and
/// identity laws on one morphism per nonempty hom-set. Associativity of `∘`
/// is checked on one continuation per composable pair. Triple-indexed checks
/// stop at `triple_budget` and are then reported inconclusive.
pub fn verify_smc_laws(smc: &Smc, triple_budget: u64) -> SmcReport {
    let objs = &smc.objects;
    let n = objs.len();
    let name = |x: SmcObject| format!("{{{}}}", smc.object_names(x).join(", "));
    let within = |x: SmcObject| x.size() <= smc.cap;

    let mut unit = Tally::new("unit");
    let mut symmetry = Tally::new("symmetry");
    let mut idempotence = Tally::new("idempotence");
    let mut identity = Tally::new("identity");
    for &x in objs {
        unit.record(x.tensor(SmcObject::UNIT) == x && SmcObject::UNIT.tensor(x) == x, || name(x));
        idempotence.record(x.tensor(x) == x, || name(x));
        let id = smc.identity(x);
        identity.record(smc.is_morphism(&id), || name(x));
        for &y in objs {
            symmetry.record(x.tensor(y) == y.tensor(x), || format!("{} ⊗ {}", name(x), name(y)));
        }
    }

    let homs: Vec<Vec<Option<SmcMorphism>>> = objs
        .iter()
        .map(|&x| objs.iter().map(|&y| smc.hom(x, y)).collect())
        .collect();
    let mut hom_valid = Tally::new("hom_witness_valid");
    for (i, row) in homs.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            if let Some(f) = f {
                hom_valid.record(smc.is_morphism(f), || format!("{} -> {}", name(objs[i]), name(objs[j])));
                identity.record(
                    smc.compose(f, &smc.identity(objs[i])).as_ref() == Some(f)
                        && smc.compose(&smc.identity(objs[j]), f).as_ref() == Some(f),
                    || format!("identity law at {} -> {}", name(objs[i]), name(objs[j])),
                );
            }
        }
    }

    let mut associativity = Tally::new("associativity");
    let mut transitivity = Tally::new("hom_transitivity");
    let mut closure = Tally::new("composition_closure");
    let mut visited = 0u64;
    'triples: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                visited += 1;
                if visited > triple_budget {
                    associativity.truncated = true;
                    transitivity.truncated = true;
                    closure.truncated = true;
                    break 'triples;
                }
                let (x, y, z) = (objs[a], objs[b], objs[c]);
                let left = x.tensor(y);
                let right = y.tensor(z);
                if within(left) && within(right) && within(left.tensor(z)) {
                    associativity.record(left.tensor(z) == x.tensor(right), || {
                        format!("{} ⊗ {} ⊗ {}", name(x), name(y), name(z))
                    });
                }
                if let (Some(f), Some(g)) = (&homs[a][b], &homs[b][c]) {
                    transitivity.record(homs[a][c].is_some(), || {
                        format!("{} -> {} -> {}", name(x), name(y), name(z))
                    });
                    let gf = smc.compose(g, f);
                    closure.record(gf.as_ref().is_some_and(|h| smc.is_morphism(h)), || {
                        format!("composite {} -> {}", name(x), name(z))
                    });
                }
            }
        }
    }

    // one continuation h per composable (f, g), chosen by index
    let outgoing: Vec<Vec<usize>> = homs
        .iter()
        .map(|row| (0..n).filter(|&d| row[d].is_some()).collect())
        .collect();
    let mut comp_assoc = Tally::new("composition_associativity");
    for a in 0..n {
        for b in 0..n {
            let Some(f) = &homs[a][b] else { continue };
            for c in 0..n {
                let Some(g) = &homs[b][c] else { continue };
                let Some(gf) = smc.compose(g, f) else { continue };
                let Some(&d) = outgoing[c].get((a + b) % outgoing[c].len().max(1)) else { continue };
                let h = homs[c][d].as_ref().expect("outgoing lists nonempty homs");
                let left = smc.compose(h, &gf);
                let right = smc.compose(h, g).and_then(|hg| smc.compose(&hg, f));
                comp_assoc.record(left.is_some() && left == right, || {
                    format!("{} -> {} -> {} -> {}", name(objs[a]), name(objs[b]), name(objs[c]), name(objs[d]))
                });
            }
        }
    }

    let free: Vec<SmcObject> = free_objects(smc);
    let free_set: BTreeSet<SmcObject> = free.iter().copied().collect();
    let mut free_atoms = Tally::new("free_atoms_are_true_atoms");
    for a in 0..smc.atoms.len() {
        let x = SmcObject(1 << a);
        free_atoms.record(free_set.contains(&x) == smc.truth[a], || smc.atoms[a].clone());
    }
    free_atoms.record(free_set.contains(&SmcObject::UNIT), || "unit".into());
    let mut free_componentwise = Tally::new("free_iff_atoms_free");
    for &x in objs {
        let all = x.members().all(|a| free_set.contains(&SmcObject(1 << a)));
        free_componentwise.record(free_set.contains(&x) == all, || name(x));
    }

    SmcReport {
        objects: n,
        object_cap: smc.cap,
        free_objects: free.len(),
        laws: vec![
            associativity.finish(),
            unit.finish(),
            symmetry.finish(),
            idempotence.finish(),
            identity.finish(),
            hom_valid.finish(),
            transitivity.finish(),
            closure.finish(),
            comp_assoc.finish(),
            free_atoms.finish(),
            free_componentwise.finish(),
        ],
        note: "morphisms out of the unit into tensors are the componentwise extension",
    }
}
