use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{channel_is_cptp, ChannelDecl, ChannelSemantics, Qrt, StateMap};
use crate::linalg::{self, CptpViolation, DensityMatrix, DensityViolation, Verdict};

/// One violated QRT invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    NonCptp {
        channel: String,
        violation: CptpViolation,
    },
    MissingIdentity {
        system: String,
    },
    ImageNotState {
        channel: String,
        state: String,
        violation: DensityViolation,
    },
    ImageUnmatched {
        channel: String,
        state: String,
        nearest: Option<String>,
        distance: f64,
    },
    ImageAmbiguous {
        channel: String,
        state: String,
        candidates: Vec<String>,
    },
    /// `second ∘ first` induces a state function missing from the theory.
    CompositionOpen {
        first: String,
        second: String,
    },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::NonCptp { channel, violation } => {
                write!(f, "channel {channel} is {violation}")
            }
            ValidationIssue::MissingIdentity { system } => {
                write!(f, "system {system} has no identity channel")
            }
            ValidationIssue::ImageNotState {
                channel,
                state,
                violation,
            } => write!(f, "channel {channel} maps {state} to a non-state ({violation})"),
            ValidationIssue::ImageUnmatched {
                channel,
                state,
                nearest,
                distance,
            } => match nearest {
                Some(n) => write!(
                    f,
                    "channel {channel} maps {state} to no named state (nearest {n} at trace distance {distance:.3e})"
                ),
                None => write!(f, "channel {channel} maps {state} into a system with no named states"),
            },
            ValidationIssue::ImageAmbiguous {
                channel,
                state,
                candidates,
            } => write!(
                f,
                "channel {channel} maps {state} ambiguously onto {}",
                candidates.join(", ")
            ),
            ValidationIssue::CompositionOpen { first, second } => write!(
                f,
                "composition {second} ∘ {first} induces a state function outside the theory"
            ),
        }
    }
}

/// Every violated invariant of a QRT; empty means valid.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    /// Valid apart from composition closure, so [`super::complete_composition`] applies.
    pub fn is_completable(&self) -> bool {
        self.issues
            .iter()
            .all(|i| matches!(i, ValidationIssue::CompositionOpen { .. }))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "- {issue}")?;
        }
        Ok(())
    }
}

pub(crate) fn analyze_channel(q: &Qrt, c: &ChannelDecl) -> ChannelSemantics {
    let tol = q.tolerances();
    let cptp = match channel_is_cptp(&c.channel, tol) {
        Ok(v) => v,
        // shapes are checked at construction; an eigen failure means a non-square Choi
        Err(_) => Some(CptpViolation::NotCompletelyPositive {
            min_choi_eigenvalue: f64::NAN,
        }),
    };
    let from = q.system_index(&c.from).expect("checked at construction");
    let to = q.system_index(&c.to).expect("checked at construction");
    let targets = &q.systems()[to].states;
    let mut image = Vec::with_capacity(q.systems()[from].states.len());
    let mut issues = Vec::new();
    for (name, rho) in &q.systems()[from].states {
        let state = format!("{}.{}", c.from, name);
        let out = match c.channel.apply_operator(rho.matrix()) {
            Ok(m) => m,
            Err(_) => {
                issues.push(ValidationIssue::ImageUnmatched {
                    channel: c.id.clone(),
                    state,
                    nearest: None,
                    distance: f64::INFINITY,
                });
                continue;
            }
        };
        let out = match linalg::is_density_matrix(&out, tol) {
            Ok(Verdict::Pass) => DensityMatrix::from_trusted(out),
            Ok(Verdict::Fail(violation)) => {
                issues.push(ValidationIssue::ImageNotState {
                    channel: c.id.clone(),
                    state,
                    violation,
                });
                continue;
            }
            Err(_) => unreachable!("channel output is square"),
        };
        let distances: Vec<f64> = targets
            .iter()
            .map(|(_, t)| linalg::trace_distance(&out, t).unwrap_or(f64::INFINITY))
            .collect();
        let hits: Vec<usize> = (0..targets.len())
            .filter(|&i| distances[i] <= tol.eps_match)
            .collect();
        match hits.as_slice() {
            [one] => image.push(*one),
            [] => {
                let nearest = (0..targets.len()).min_by(|&a, &b| distances[a].total_cmp(&distances[b]));
                issues.push(ValidationIssue::ImageUnmatched {
                    channel: c.id.clone(),
                    state,
                    nearest: nearest.map(|i| format!("{}.{}", c.to, targets[i].0)),
                    distance: nearest.map_or(f64::INFINITY, |i| distances[i]),
                });
            }
            many => issues.push(ValidationIssue::ImageAmbiguous {
                channel: c.id.clone(),
                state,
                candidates: many
                    .iter()
                    .map(|&i| format!("{}.{}", c.to, targets[i].0))
                    .collect(),
            }),
        }
    }
    ChannelSemantics {
        cptp,
        image: if issues.is_empty() { Ok(image) } else { Err(issues) },
    }
}

/// Lists every violated QRT invariant: non-CPTP channels, missing identities,
/// broken state closure, broken composition closure.
pub fn validate_qrt(q: &Qrt) -> ValidationReport {
    let mut issues = Vec::new();
    let sems = q.semantics();
    let mut maps: Vec<Option<StateMap>> = Vec::with_capacity(sems.len());
    for (sem, c) in sems.iter().zip(q.channels()) {
        if let Some(v) = &sem.cptp {
            issues.push(ValidationIssue::NonCptp {
                channel: c.id.clone(),
                violation: v.clone(),
            });
        }
        match &sem.image {
            Ok(image) => maps.push(Some(StateMap {
                from: q.system_index(&c.from).expect("checked"),
                to: q.system_index(&c.to).expect("checked"),
                image: image.clone(),
            })),
            Err(found) => {
                issues.extend(found.iter().cloned());
                maps.push(None);
            }
        }
    }
    for (si, s) in q.systems().iter().enumerate() {
        let ident = StateMap::identity(si, s.states.len());
        let present = maps
            .iter()
            .zip(sems)
            .any(|(m, sem)| sem.cptp.is_none() && m.as_ref() == Some(&ident));
        if !present {
            issues.push(ValidationIssue::MissingIdentity { system: s.id.clone() });
        }
    }
    let known: BTreeSet<&StateMap> = maps.iter().flatten().collect();
    let mut reported = BTreeSet::new();
    for (i, f) in maps.iter().enumerate() {
        let Some(f) = f else { continue };
        for (j, g) in maps.iter().enumerate() {
            let Some(g) = g else { continue };
            if let Some(gf) = f.then(g) {
                if !known.contains(&gf) && reported.insert(gf.clone()) {
                    issues.push(ValidationIssue::CompositionOpen {
                        first: q.channels()[i].id.clone(),
                        second: q.channels()[j].id.clone(),
                    });
                }
            }
        }
    }
    ValidationReport { issues }
}
