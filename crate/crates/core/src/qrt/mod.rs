//! Finite quantum resource theories over a named state universe.
//!
//! Each system declares finitely many named states and every channel must send
//! each named state of its source onto exactly one named state of its target.
//! All state-level analysis works with the induced functions ([`StateMap`]),
//! never with Kraus-matrix identity.

mod builder;
mod iso;
mod validate;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use thiserror::Error;

use crate::config::Tolerances;
use crate::linalg::{self, CptpViolation, DensityMatrix, KrausChannel, LinalgError, Verdict};
use crate::relation::Relation;

pub use builder::QrtBuilder;
pub use iso::{qrt_isomorphic, QrtIsomorphism};
pub use validate::{validate_qrt, ValidationIssue, ValidationReport};

#[derive(Debug, Error)]
pub enum QrtError {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("QRT is not valid: {0}")]
    Invalid(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("numerical drift: {0}")]
    NumericalDrift(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A system (Hilbert space) with its named states of interest.
#[derive(Debug, Clone)]
pub struct SystemDecl {
    pub id: String,
    pub dim: usize,
    pub states: Vec<(String, DensityMatrix)>,
}

/// A permitted channel between two declared systems.
#[derive(Debug, Clone)]
pub struct ChannelDecl {
    pub id: String,
    pub from: String,
    pub to: String,
    pub channel: KrausChannel,
}

/// The function a channel induces on the named universe: named state
/// `i` of system `from` goes to named state `image[i]` of system `to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateMap {
    pub from: usize,
    pub to: usize,
    pub image: Vec<usize>,
}

impl StateMap {
    pub fn identity(system: usize, n_states: usize) -> Self {
        StateMap {
            from: system,
            to: system,
            image: (0..n_states).collect(),
        }
    }

    /// `next ∘ self`, when the systems line up.
    pub fn then(&self, next: &StateMap) -> Option<StateMap> {
        (self.to == next.from).then(|| StateMap {
            from: self.from,
            to: next.to,
            image: self.image.iter().map(|&s| next.image[s]).collect(),
        })
    }

    pub fn image_set(&self) -> BTreeSet<usize> {
        self.image.iter().copied().collect()
    }
}

/// One edge of the state graph: `channel` sends global state `from` to global state `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct StateEdge {
    pub from: usize,
    pub to: usize,
    pub channel: usize,
}

/// Named states as nodes, channel actions as labeled edges.
#[derive(Debug, Clone)]
pub struct StateGraph {
    pub n_states: usize,
    pub edges: Vec<StateEdge>,
}

impl StateGraph {
    /// Reflexive-transitive reachability.
    pub fn reachability(&self) -> Relation {
        let mut adj = vec![Vec::new(); self.n_states];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        let mut r = Relation::empty(self.n_states);
        for start in 0..self.n_states {
            let mut seen = vec![false; self.n_states];
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(s) = queue.pop_front() {
                r.insert(start, s);
                for &t in &adj[s] {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        r
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ChannelSemantics {
    pub(crate) cptp: Option<CptpViolation>,
    pub(crate) image: Result<Vec<usize>, Vec<ValidationIssue>>,
}

/// A finite QRT `<H, O, F>`; `F` is derived from `O`, never stored.
#[derive(Debug, Clone)]
pub struct Qrt {
    systems: Vec<SystemDecl>,
    channels: Vec<ChannelDecl>,
    trivial: Option<usize>,
    tol: Tolerances,
    system_index: HashMap<String, usize>,
    offsets: Vec<usize>,
    semantics: OnceLock<Vec<ChannelSemantics>>,
}

impl Qrt {
    /// Builds a QRT, inserting an identity channel for every system that lacks one.
    pub fn new(
        systems: Vec<SystemDecl>,
        channels: Vec<ChannelDecl>,
        trivial: Option<String>,
        tol: Tolerances,
    ) -> Result<Self, QrtError> {
        let mut q = Self::new_raw(systems, channels, trivial, tol)?;
        let mut extra = Vec::new();
        for s in &q.systems {
            let ident = KrausChannel::identity(s.dim).choi_matrix();
            let present = q.channels.iter().any(|c| {
                c.from == s.id
                    && c.to == s.id
                    && c.channel.choi_matrix().max_abs_diff(&ident) <= tol.eps_tp
            });
            if !present {
                let mut id = format!("1_{}", s.id);
                while q.channels.iter().any(|c| c.id == id) {
                    id.push('\'');
                }
                extra.push(ChannelDecl {
                    id,
                    from: s.id.clone(),
                    to: s.id.clone(),
                    channel: KrausChannel::identity(s.dim),
                });
            }
        }
        // identities first keeps channel order readable in reports
        extra.append(&mut q.channels);
        q.channels = extra;
        Ok(q)
    }

    /// Builds a QRT exactly as declared, without identity insertion.
    pub fn new_raw(
        systems: Vec<SystemDecl>,
        channels: Vec<ChannelDecl>,
        trivial: Option<String>,
        tol: Tolerances,
    ) -> Result<Self, QrtError> {
        let mut system_index = HashMap::new();
        let mut offsets = Vec::with_capacity(systems.len());
        let mut total = 0;
        for (i, s) in systems.iter().enumerate() {
            if !is_identifier(&s.id) {
                return Err(QrtError::Structure(format!("system id {:?} is not an identifier", s.id)));
            }
            if system_index.insert(s.id.clone(), i).is_some() {
                return Err(QrtError::Structure(format!("duplicate system id {}", s.id)));
            }
            if s.dim == 0 {
                return Err(QrtError::Structure(format!("system {} has dimension 0", s.id)));
            }
            if s.dim > tol.max_dim {
                return Err(LinalgError::DimensionCap {
                    dim: s.dim,
                    cap: tol.max_dim,
                }
                .into());
            }
            let mut seen = HashSet::new();
            for (name, rho) in &s.states {
                if !is_identifier(name) {
                    return Err(QrtError::Structure(format!(
                        "state id {:?} of {} is not an identifier",
                        name, s.id
                    )));
                }
                if !seen.insert(name.as_str()) {
                    return Err(QrtError::Structure(format!("duplicate state {}.{}", s.id, name)));
                }
                if rho.dim() != s.dim {
                    return Err(QrtError::Structure(format!(
                        "state {}.{} has dimension {}, system has {}",
                        s.id,
                        name,
                        rho.dim(),
                        s.dim
                    )));
                }
            }
            if s.dim == 1 && s.states.len() != 1 {
                return Err(QrtError::Structure(format!(
                    "dimension-1 system {} must have exactly one state",
                    s.id
                )));
            }
            offsets.push(total);
            total += s.states.len();
        }
        let trivial = match trivial {
            Some(t) => {
                let i = *system_index
                    .get(&t)
                    .ok_or_else(|| QrtError::Structure(format!("trivial system {t} is not declared")))?;
                if systems[i].dim != 1 {
                    return Err(QrtError::Structure(format!("trivial system {t} must have dimension 1")));
                }
                Some(i)
            }
            None => None,
        };
        if let Some(s) = systems
            .iter()
            .enumerate()
            .find(|(i, s)| s.dim == 1 && Some(*i) != trivial)
            .map(|(_, s)| s)
        {
            return Err(QrtError::Structure(format!(
                "dimension-1 system {} is not the declared trivial system; preparations need a trivial system",
                s.id
            )));
        }
        let mut channel_ids = HashSet::new();
        for c in &channels {
            if !channel_ids.insert(c.id.as_str()) {
                return Err(QrtError::Structure(format!("duplicate channel id {}", c.id)));
            }
            let from = system_index
                .get(&c.from)
                .ok_or_else(|| QrtError::Structure(format!("channel {} leaves unknown system {}", c.id, c.from)))?;
            let to = system_index
                .get(&c.to)
                .ok_or_else(|| QrtError::Structure(format!("channel {} enters unknown system {}", c.id, c.to)))?;
            if c.channel.in_dim() != systems[*from].dim || c.channel.out_dim() != systems[*to].dim {
                return Err(QrtError::Structure(format!(
                    "channel {} is {}->{} but connects dimensions {}->{}",
                    c.id,
                    c.channel.in_dim(),
                    c.channel.out_dim(),
                    systems[*from].dim,
                    systems[*to].dim
                )));
            }
        }
        Ok(Qrt {
            systems,
            channels,
            trivial,
            tol,
            system_index,
            offsets,
            semantics: OnceLock::new(),
        })
    }

    pub fn systems(&self) -> &[SystemDecl] {
        &self.systems
    }

    pub fn channels(&self) -> &[ChannelDecl] {
        &self.channels
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Index of the trivial system, if declared.
    pub fn trivial(&self) -> Option<usize> {
        self.trivial
    }

    pub fn trivial_id(&self) -> Option<&str> {
        self.trivial.map(|i| self.systems[i].id.as_str())
    }

    /// Global index of the trivial state.
    pub fn trivial_state(&self) -> Option<usize> {
        self.trivial.map(|i| self.offsets[i])
    }

    pub fn system_index(&self, id: &str) -> Option<usize> {
        self.system_index.get(id).copied()
    }

    pub fn n_states(&self) -> usize {
        self.systems.iter().map(|s| s.states.len()).sum()
    }

    /// Global index of the `local`-th state of system `system`.
    pub fn global(&self, system: usize, local: usize) -> usize {
        self.offsets[system] + local
    }

    /// Inverse of [`Qrt::global`].
    pub fn locate(&self, global: usize) -> (usize, usize) {
        let sys = self.offsets.partition_point(|&o| o <= global) - 1;
        (sys, global - self.offsets[sys])
    }

    /// Global indices of the states of one system.
    pub fn states_of(&self, system: usize) -> std::ops::Range<usize> {
        let start = self.offsets[system];
        start..start + self.systems[system].states.len()
    }

    /// `"system.state"`.
    pub fn qualified(&self, global: usize) -> String {
        let (s, l) = self.locate(global);
        format!("{}.{}", self.systems[s].id, self.systems[s].states[l].0)
    }

    pub fn find_state(&self, qualified: &str) -> Option<usize> {
        let (sys, st) = qualified.split_once('.')?;
        let s = self.system_index(sys)?;
        let l = self.systems[s].states.iter().position(|(n, _)| n == st)?;
        Some(self.global(s, l))
    }

    pub fn state(&self, global: usize) -> &DensityMatrix {
        let (s, l) = self.locate(global);
        &self.systems[s].states[l].1
    }

    fn semantics(&self) -> &[ChannelSemantics] {
        self.semantics.get_or_init(|| {
            self.channels
                .iter()
                .map(|c| validate::analyze_channel(self, c))
                .collect()
        })
    }

    /// Induced state map of every channel, aligned with [`Qrt::channels`].
    /// Fails when any channel is not CPTP or breaks closure on the named universe.
    pub fn maps(&self) -> Result<Vec<StateMap>, QrtError> {
        self.semantics()
            .iter()
            .zip(&self.channels)
            .map(|(sem, c)| {
                if let Some(v) = &sem.cptp {
                    return Err(QrtError::Invalid(format!("channel {} is {v}", c.id)));
                }
                match &sem.image {
                    Ok(image) => Ok(StateMap {
                        from: self.system_index[&c.from],
                        to: self.system_index[&c.to],
                        image: image.clone(),
                    }),
                    Err(issues) => Err(QrtError::Invalid(format!(
                        "channel {} breaks closure: {}",
                        c.id,
                        issues
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join("; ")
                    ))),
                }
            })
            .collect()
    }

    /// The deduplicated set of induced state maps.
    pub fn function_set(&self) -> Result<BTreeSet<StateMap>, QrtError> {
        Ok(self.maps()?.into_iter().collect())
    }

    /// Sub-theory on the given systems with every channel between them.
    pub fn restrict(&self, keep: &[&str]) -> Result<Qrt, QrtError> {
        let keep: BTreeSet<&str> = keep.iter().copied().collect();
        for k in &keep {
            if self.system_index(k).is_none() {
                return Err(QrtError::Structure(format!("cannot keep unknown system {k}")));
            }
        }
        let systems = self
            .systems
            .iter()
            .filter(|s| keep.contains(s.id.as_str()))
            .cloned()
            .collect();
        let channels = self
            .channels
            .iter()
            .filter(|c| keep.contains(c.from.as_str()) && keep.contains(c.to.as_str()))
            .cloned()
            .collect();
        let trivial = self
            .trivial_id()
            .filter(|t| keep.contains(t))
            .map(str::to_owned);
        Qrt::new(systems, channels, trivial, self.tol)
    }

    /// Renames systems and states and reorders both. `system_order` lists old
    /// system ids in their new order; `rename` maps old system ids to new ones;
    /// `state_order[s]` lists the old local state indices of old system `s` in new order.
    pub fn relabel(
        &self,
        system_order: &[usize],
        rename: &dyn Fn(&str) -> String,
        state_order: &[Vec<usize>],
    ) -> Result<Qrt, QrtError> {
        let mut systems = Vec::new();
        for &s in system_order {
            let decl = &self.systems[s];
            systems.push(SystemDecl {
                id: rename(&decl.id),
                dim: decl.dim,
                states: state_order[s]
                    .iter()
                    .map(|&l| decl.states[l].clone())
                    .collect(),
            });
        }
        let channels = self
            .channels
            .iter()
            .map(|c| ChannelDecl {
                id: c.id.clone(),
                from: rename(&c.from),
                to: rename(&c.to),
                channel: c.channel.clone(),
            })
            .collect();
        Qrt::new(
            systems,
            channels,
            self.trivial_id().map(rename),
            self.tol,
        )
    }

    /// A copy with one more channel.
    pub fn with_channel(&self, channel: ChannelDecl) -> Result<Qrt, QrtError> {
        let mut channels = self.channels.clone();
        channels.push(channel);
        Qrt::new_raw(
            self.systems.clone(),
            channels,
            self.trivial_id().map(str::to_owned),
            self.tol,
        )
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Closes the induced state-function set under composition, synthesizing each
/// new function's channel by Kraus composition.
pub fn complete_composition(q: &Qrt) -> Result<Qrt, QrtError> {
    let maps = q.maps()?;
    let tol = *q.tolerances();
    let mut known: HashMap<StateMap, usize> = HashMap::new();
    let mut entries: Vec<(StateMap, ChannelDecl)> = Vec::new();
    for (m, c) in maps.iter().zip(q.channels()) {
        if !known.contains_key(m) {
            known.insert(m.clone(), entries.len());
            entries.push((m.clone(), c.clone()));
        }
    }
    let mut synthesized = Vec::new();
    let mut used_ids: HashSet<String> = q.channels().iter().map(|c| c.id.clone()).collect();
    let mut i = 0;
    while i < entries.len() {
        for j in 0..=i {
            for (first, second) in [(i, j), (j, i)] {
                let Some(m) = entries[first].0.then(&entries[second].0) else {
                    continue;
                };
                if known.contains_key(&m) {
                    continue;
                }
                if known.len() >= tol.max_channels {
                    return Err(QrtError::ResourceLimit(format!(
                        "composition closure exceeds {} induced functions",
                        tol.max_channels
                    )));
                }
                let f = &entries[first].1;
                let g = &entries[second].1;
                let channel = linalg::compose(&g.channel, &f.channel)?.compressed()?;
                let mut id = format!("{}*{}", g.id, f.id);
                while used_ids.contains(&id) {
                    id.push('\'');
                }
                used_ids.insert(id.clone());
                let decl = ChannelDecl {
                    id,
                    from: f.from.clone(),
                    to: g.to.clone(),
                    channel,
                };
                let sem = validate::analyze_channel(q, &decl);
                match sem.image {
                    Ok(image) if image == m.image && sem.cptp.is_none() => {}
                    _ => {
                        return Err(QrtError::NumericalDrift(format!(
                            "synthesized channel {} does not realize the composed state map",
                            decl.id
                        )))
                    }
                }
                known.insert(m.clone(), entries.len());
                entries.push((m, decl.clone()));
                synthesized.push(decl);
            }
        }
        i += 1;
    }
    if synthesized.is_empty() {
        return Ok(q.clone());
    }
    let mut channels = q.channels().to_vec();
    channels.extend(synthesized);
    Qrt::new_raw(
        q.systems().to_vec(),
        channels,
        q.trivial_id().map(str::to_owned),
        tol,
    )
}

/// Nodes are global state indices; one edge per channel and source state.
pub fn state_graph(q: &Qrt) -> Result<StateGraph, QrtError> {
    let maps = q.maps()?;
    let mut edges = Vec::new();
    for (ci, m) in maps.iter().enumerate() {
        for (local, &target) in m.image.iter().enumerate() {
            edges.push(StateEdge {
                from: q.global(m.from, local),
                to: q.global(m.to, target),
                channel: ci,
            });
        }
    }
    Ok(StateGraph {
        n_states: q.n_states(),
        edges,
    })
}

/// States reachable from the trivial state; the trivial state itself is excluded.
pub fn free_states(q: &Qrt) -> Result<BTreeSet<usize>, QrtError> {
    let graph = state_graph(q)?;
    let Some(root) = q.trivial_state() else {
        return Ok(BTreeSet::new());
    };
    let reach = graph.reachability();
    Ok(reach.successors(root).filter(|&s| s != root).collect())
}

/// Named states that are neither free nor the trivial state.
pub fn resource_states(q: &Qrt) -> Result<BTreeSet<usize>, QrtError> {
    let free = free_states(q)?;
    let trivial = q.trivial_state();
    Ok((0..q.n_states())
        .filter(|s| !free.contains(s) && Some(*s) != trivial)
        .collect())
}

/// `rho ⪯ sigma` iff `sigma` is reachable from `rho` in the state graph.
pub fn convertibility_preorder(q: &Qrt) -> Result<Relation, QrtError> {
    Ok(state_graph(q)?.reachability())
}

/// `x`'s systems embed into `y`'s by id (same dimension and named states) and
/// `x`'s function set equals `y`'s restricted to those systems.
pub fn is_sub_qrt(x: &Qrt, y: &Qrt) -> Result<bool, QrtError> {
    let eps = x.tolerances().eps_match;
    for s in x.systems() {
        let Some(yi) = y.system_index(&s.id) else {
            return Ok(false);
        };
        let ys = &y.systems()[yi];
        if ys.dim != s.dim || ys.states.len() != s.states.len() {
            return Ok(false);
        }
        for (name, rho) in &s.states {
            let Some((_, other)) = ys.states.iter().find(|(n, _)| n == name) else {
                return Ok(false);
            };
            if linalg::trace_distance(rho, other)? > eps {
                return Ok(false);
            }
        }
    }
    if x.trivial_id().is_some() && x.trivial_id() != y.trivial_id() {
        return Ok(false);
    }
    let xs: BTreeSet<_> = x.function_set()?.iter().map(|m| named_map(x, m)).collect();
    let ys: BTreeSet<_> = y
        .function_set()?
        .iter()
        .filter(|m| {
            x.system_index(&y.systems()[m.from].id).is_some()
                && x.system_index(&y.systems()[m.to].id).is_some()
        })
        .map(|m| named_map(y, m))
        .collect();
    Ok(xs == ys)
}

type NamedMap = (String, String, BTreeSet<(String, String)>);

/// A state map keyed by names, independent of declaration order.
fn named_map(q: &Qrt, m: &StateMap) -> NamedMap {
    let from = &q.systems()[m.from];
    let to = &q.systems()[m.to];
    (
        from.id.clone(),
        to.id.clone(),
        m.image
            .iter()
            .enumerate()
            .map(|(i, &t)| (from.states[i].0.clone(), to.states[t].0.clone()))
            .collect(),
    )
}

/// The CPTP violation, if any.
pub(crate) fn channel_is_cptp(c: &KrausChannel, tol: &Tolerances) -> Result<Option<CptpViolation>, LinalgError> {
    Ok(match linalg::is_cptp(c, tol)? {
        Verdict::Pass => None,
        Verdict::Fail(v) => Some(v),
    })
}

#[cfg(test)]
mod tests;
