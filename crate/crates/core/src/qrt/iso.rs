//! Labeled isomorphism search between finite QRTs.
//!
//! A witness is a bijection of systems (equal dimensions) and, per system, a
//! bijection of named states that carries the induced function set and the
//! free set of one theory onto the other. This certifies isomorphism of the
//! labeled structures only; it does not construct intertwining unitaries.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{free_states, convertibility_preorder, Qrt, QrtError, StateMap};
use crate::relation::Relation;

/// System and state correspondences, by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QrtIsomorphism {
    pub systems: Vec<(String, String)>,
    pub states: Vec<(String, String)>,
}

struct Side<'a> {
    q: &'a Qrt,
    functions: BTreeSet<StateMap>,
    truth: Vec<bool>,
    order: Relation,
    counts: Vec<Vec<usize>>,
}

impl<'a> Side<'a> {
    fn new(q: &'a Qrt) -> Result<Self, QrtError> {
        let functions = q.function_set()?;
        let free = free_states(q)?;
        let mut truth: Vec<bool> = (0..q.n_states()).map(|s| free.contains(&s)).collect();
        if let Some(t) = q.trivial_state() {
            truth[t] = true;
        }
        let n = q.systems().len();
        let mut counts = vec![vec![0; n]; n];
        for f in &functions {
            counts[f.from][f.to] += 1;
        }
        Ok(Side {
            q,
            functions,
            truth,
            order: convertibility_preorder(q)?,
            counts,
        })
    }

    fn system_signature(&self, s: usize) -> (usize, usize, usize, bool, Vec<usize>, Vec<usize>) {
        let decl = &self.q.systems()[s];
        let n_free = self.q.states_of(s).filter(|&g| self.truth[g]).count();
        let mut out: Vec<usize> = self.counts[s].clone();
        let mut inc: Vec<usize> = self.counts.iter().map(|row| row[s]).collect();
        out.sort_unstable();
        inc.sort_unstable();
        (
            decl.dim,
            decl.states.len(),
            n_free,
            self.q.trivial() == Some(s),
            out,
            inc,
        )
    }

    fn state_signature(&self, g: usize) -> (bool, usize, usize) {
        (self.truth[g], self.order.in_degree(g), self.order.out_degree(g))
    }
}

struct Search<'a> {
    x: Side<'a>,
    y: Side<'a>,
    sys_map: Vec<Option<usize>>,
    sys_used: Vec<bool>,
    state_map: Vec<Option<usize>>,
    state_used: Vec<bool>,
    y_functions: HashSet<StateMap>,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), QrtError> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(QrtError::ResourceLimit(format!(
                "QRT isomorphism search exceeded {} nodes",
                self.cap
            )));
        }
        Ok(())
    }

    fn systems(&mut self, i: usize) -> Result<bool, QrtError> {
        let n = self.x.q.systems().len();
        if i == n {
            return self.states(0);
        }
        let sig = self.x.system_signature(i);
        for cand in 0..n {
            if self.sys_used[cand] || self.y.system_signature(cand) != sig {
                continue;
            }
            self.tick()?;
            let consistent = (0..i).all(|a| {
                let b = self.sys_map[a].expect("assigned");
                self.x.counts[a][i] == self.y.counts[b][cand] && self.x.counts[i][a] == self.y.counts[cand][b]
            });
            if !consistent {
                continue;
            }
            self.sys_map[i] = Some(cand);
            self.sys_used[cand] = true;
            if self.systems(i + 1)? {
                return Ok(true);
            }
            self.sys_map[i] = None;
            self.sys_used[cand] = false;
        }
        Ok(false)
    }

    fn states(&mut self, g: usize) -> Result<bool, QrtError> {
        if g == self.x.q.n_states() {
            return Ok(true);
        }
        let (sx, _) = self.x.q.locate(g);
        let sy = self.sys_map[sx].expect("systems assigned first");
        let sig = self.x.state_signature(g);
        for t in self.y.q.states_of(sy) {
            if self.state_used[t] || self.y.state_signature(t) != sig {
                continue;
            }
            self.tick()?;
            let consistent = (0..g).all(|h| {
                let u = self.state_map[h].expect("assigned in order");
                self.x.order.contains(g, h) == self.y.order.contains(t, u)
                    && self.x.order.contains(h, g) == self.y.order.contains(u, t)
            });
            if !consistent {
                continue;
            }
            self.state_map[g] = Some(t);
            self.state_used[t] = true;
            let system_done = g + 1 == self.x.q.states_of(sx).end;
            if (!system_done || self.functions_agree(sx)) && self.states(g + 1)? {
                return Ok(true);
            }
            self.state_map[g] = None;
            self.state_used[t] = false;
        }
        Ok(false)
    }

    /// Functions between `done` and every earlier system map into `y`'s set.
    /// Equal per-pair counts make the inclusion a bijection.
    fn functions_agree(&self, done: usize) -> bool {
        self.x
            .functions
            .iter()
            .filter(|f| (f.from == done && f.to <= done) || (f.to == done && f.from <= done))
            .all(|f| self.y_functions.contains(&self.transport(f)))
    }

    fn transport(&self, f: &StateMap) -> StateMap {
        let from = self.sys_map[f.from].expect("assigned");
        let to = self.sys_map[f.to].expect("assigned");
        let mut image = vec![0; self.y.q.systems()[from].states.len()];
        for (i, &t) in f.image.iter().enumerate() {
            let src = self.state_map[self.x.q.global(f.from, i)].expect("assigned");
            let dst = self.state_map[self.x.q.global(f.to, t)].expect("assigned");
            image[self.y.q.locate(src).1] = self.y.q.locate(dst).1;
        }
        StateMap { from, to, image }
    }
}

/// Searches for a labeled isomorphism; `Ok(None)` means none exists.
pub fn qrt_isomorphic(x: &Qrt, y: &Qrt) -> Result<Option<QrtIsomorphism>, QrtError> {
    if x.systems().len() != y.systems().len() || x.n_states() != y.n_states() {
        return Ok(None);
    }
    let mut x_dims: Vec<usize> = x.systems().iter().map(|s| s.dim).collect();
    let mut y_dims: Vec<usize> = y.systems().iter().map(|s| s.dim).collect();
    x_dims.sort_unstable();
    y_dims.sort_unstable();
    if x_dims != y_dims {
        return Ok(None);
    }
    let xs = Side::new(x)?;
    let ys = Side::new(y)?;
    if xs.functions.len() != ys.functions.len() {
        return Ok(None);
    }
    let y_functions = ys.functions.iter().cloned().collect();
    let mut search = Search {
        sys_map: vec![None; x.systems().len()],
        sys_used: vec![false; y.systems().len()],
        state_map: vec![None; x.n_states()],
        state_used: vec![false; y.n_states()],
        y_functions,
        nodes: 0,
        cap: x.tolerances().max_iso_nodes,
        x: xs,
        y: ys,
    };
    if !search.systems(0)? {
        return Ok(None);
    }
    let systems = (0..x.systems().len())
        .map(|i| {
            (
                x.systems()[i].id.clone(),
                y.systems()[search.sys_map[i].expect("complete")].id.clone(),
            )
        })
        .collect();
    let states = (0..x.n_states())
        .map(|g| (x.qualified(g), y.qualified(search.state_map[g].expect("complete"))))
        .collect();
    Ok(Some(QrtIsomorphism { systems, states }))
}
