//! Checks over translation records: free-to-free transfer along channel
//! edges, resource destruction, and the convexity schema `C_p`.

use std::collections::HashMap;

use serde::Serialize;

use super::{is_valid, Formula, LogicError};
use crate::linalg::{trace_distance, DensityMatrix};
use crate::qrt::Qrt;
use crate::translate::{RecordEdge, TranslationRecord};

/// Probabilities at which `C_p` is sampled when none are given.
pub const DEFAULT_P_SAMPLES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// One state-graph edge `ρ -> σ` and the two formulas checked on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeInstance {
    pub edge: RecordEdge,
    /// `(ρ -> <>σ)`
    pub formula: String,
    pub valid: bool,
    pub failing_world: Option<String>,
    /// `(<>σ -> ρ)`
    pub converse_valid: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Theorem5Report {
    pub instances: Vec<EdgeInstance>,
}

impl Theorem5Report {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(|i| i.valid)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EdgeInstance> {
        self.instances.iter().filter(|i| !i.valid)
    }

    pub fn converse_valid(&self) -> bool {
        self.instances.iter().all(|i| i.converse_valid)
    }
}

/// Checks `⊨ (ρ -> <>σ)` for every edge of the record.
pub fn check_theorem5(rec: &TranslationRecord) -> Result<Theorem5Report, LogicError> {
    let mut report = Theorem5Report::default();
    for e in &rec.edges {
        let rho = Formula::atom(&e.from);
        let sigma = Formula::atom(&e.to);
        let forward = Formula::implies(rho.clone(), Formula::poss(sigma.clone()));
        let converse = Formula::implies(Formula::poss(sigma), rho);
        let v = is_valid(&rec.model, &forward)?;
        report.instances.push(EdgeInstance {
            edge: e.clone(),
            formula: forward.to_string(),
            valid: v.valid,
            failing_world: v.failing_world,
            converse_valid: is_valid(&rec.model, &converse)?.valid,
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourcePreservation {
    pub preserving: bool,
    /// Edges sending an `I = 0` atom to an `I = 1` atom.
    pub destroying_edges: Vec<RecordEdge>,
}

/// No edge maps a resource atom onto a free one.
pub fn is_resource_preserving(rec: &TranslationRecord) -> Result<ResourcePreservation, LogicError> {
    let truth = |a: &str| {
        rec.model
            .atom_index(a)
            .map(|i| rec.model.truth(i))
            .ok_or_else(|| LogicError::UnknownAtom(a.to_owned()))
    };
    let mut destroying = Vec::new();
    for e in &rec.edges {
        if !truth(&e.from)? && truth(&e.to)? {
            destroying.push(e.clone());
        }
    }
    Ok(ResourcePreservation {
        preserving: destroying.is_empty(),
        destroying_edges: destroying,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvexityVerdict {
    Holds,
    Fails,
    /// Both arguments free, but the mixture is not a named state.
    ClosureIndeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityPair {
    pub first: String,
    pub second: String,
    pub verdict: ConvexityVerdict,
    /// Atom matched by the mixture, when both arguments are free.
    pub matched: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexitySample {
    pub p: f64,
    pub pairs: Vec<ConvexityPair>,
}

impl ConvexitySample {
    pub fn count(&self, v: ConvexityVerdict) -> usize {
        self.pairs.iter().filter(|p| p.verdict == v).count()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub samples: Vec<ConvexitySample>,
}

impl ConvexityReport {
    pub fn count(&self, v: ConvexityVerdict) -> usize {
        self.samples.iter().map(|s| s.count(v)).sum()
    }
}

/// Evaluates `C_p[ρ₁, ρ₂]` for every ordered pair of atoms of the same system.
pub fn check_convexity(q: &Qrt, rec: &TranslationRecord, p_samples: &[f64]) -> Result<ConvexityReport, LogicError> {
    let eps = q.tolerances().eps_match;
    let mut atom_truth: HashMap<usize, (String, bool)> = HashMap::new();
    for g in 0..q.n_states() {
        let qualified = q.qualified(g);
        let atom = rec
            .atom_of
            .get(&qualified)
            .ok_or_else(|| LogicError::UnknownAtom(qualified.clone()))?;
        let idx = rec
            .model
            .atom_index(atom)
            .ok_or_else(|| LogicError::UnknownAtom(atom.clone()))?;
        atom_truth.insert(g, (atom.clone(), rec.model.truth(idx)));
    }
    let mut report = ConvexityReport::default();
    for &p in p_samples {
        let mut pairs = Vec::new();
        for s in 0..q.systems().len() {
            let states: Vec<usize> = q.states_of(s).collect();
            for &a in &states {
                for &b in &states {
                    let (ref name_a, free_a) = atom_truth[&a];
                    let (ref name_b, free_b) = atom_truth[&b];
                    let (verdict, matched) = if !(free_a && free_b) {
                        (ConvexityVerdict::Holds, None)
                    } else {
                        let mix = mixture(q.state(a), q.state(b), p);
                        let hit = states.iter().copied().find(|&c| {
                            trace_distance(&mix, q.state(c)).is_ok_and(|d| d <= eps)
                        });
                        match hit {
                            Some(c) if atom_truth[&c].1 => (ConvexityVerdict::Holds, Some(atom_truth[&c].0.clone())),
                            Some(c) => (ConvexityVerdict::Fails, Some(atom_truth[&c].0.clone())),
                            None => (ConvexityVerdict::ClosureIndeterminate, None),
                        }
                    };
                    pairs.push(ConvexityPair {
                        first: name_a.clone(),
                        second: name_b.clone(),
                        verdict,
                        matched,
                    });
                }
            }
        }
        report.samples.push(ConvexitySample { p, pairs });
    }
    Ok(report)
}

/// `p·ρ₁ + (1−p)·ρ₂`, exact at the endpoints.
fn mixture(a: &DensityMatrix, b: &DensityMatrix, p: f64) -> DensityMatrix {
    if p == 1.0 {
        return a.clone();
    }
    if p == 0.0 {
        return b.clone();
    }
    a.mix(p, b).expect("same-system states share a dimension")
}
