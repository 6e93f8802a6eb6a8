//! The inductive valuation `V_M(φ, w)`.
//!
//! Atoms read the global interpretation `I` regardless of world. Reading an
//! atom at a world whose domain lacks it is reported as a [`DomainWarning`].

use std::collections::BTreeSet;

use serde::Serialize;

use super::{Formula, LogicError};
use crate::kripke::KripkeModel;

/// An atom was read at a world outside whose domain it lies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DomainWarning {
    pub atom: String,
    pub world: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub value: bool,
    pub warnings: Vec<DomainWarning>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validity {
    pub valid: bool,
    /// First world, in declaration order, where the formula is false.
    pub failing_world: Option<String>,
    pub warnings: Vec<DomainWarning>,
}

/// Truth value of `φ` at every world, in world order.
pub fn truth_set(m: &KripkeModel, f: &Formula) -> Result<Vec<bool>, LogicError> {
    let n = m.worlds().len();
    Ok(match f {
        Formula::Atom(a) => {
            let i = m.atom_index(a).ok_or_else(|| LogicError::UnknownAtom(a.clone()))?;
            vec![m.truth(i); n]
        }
        Formula::Not(x) => truth_set(m, x)?.into_iter().map(|v| !v).collect(),
        Formula::Implies(a, b) => truth_set(m, a)?
            .into_iter()
            .zip(truth_set(m, b)?)
            .map(|(x, y)| !x || y)
            .collect(),
        Formula::Box(x) => {
            let inner = truth_set(m, x)?;
            (0..n).map(|w| m.access().successors(w).all(|u| inner[u])).collect()
        }
        Formula::Diamond(x) => {
            let inner = truth_set(m, x)?;
            (0..n).map(|w| m.access().successors(w).any(|u| inner[u])).collect()
        }
    })
}

/// Worlds at which each atom occurrence is read when evaluating at `start`.
fn domain_warnings(m: &KripkeModel, f: &Formula, starts: &[usize]) -> Vec<DomainWarning> {
    let mut visited: BTreeSet<(*const Formula, usize)> = BTreeSet::new();
    let mut found: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut stack: Vec<(&Formula, usize)> = starts.iter().map(|&w| (f, w)).collect();
    while let Some((g, w)) = stack.pop() {
        if !visited.insert((g as *const Formula, w)) {
            continue;
        }
        match g {
            Formula::Atom(a) => {
                if let Some(i) = m.atom_index(a) {
                    if !m.domain(w).contains(&i) {
                        found.insert((w, i));
                    }
                }
            }
            Formula::Not(x) => stack.push((x, w)),
            Formula::Implies(a, b) => {
                stack.push((a, w));
                stack.push((b, w));
            }
            Formula::Box(x) | Formula::Diamond(x) => {
                stack.extend(m.access().successors(w).map(|u| (x.as_ref(), u)));
            }
        }
    }
    found
        .into_iter()
        .map(|(w, a)| DomainWarning {
            atom: m.atoms()[a].clone(),
            world: m.worlds()[w].clone(),
        })
        .collect()
}

pub fn evaluate(m: &KripkeModel, f: &Formula, world: &str) -> Result<Evaluation, LogicError> {
    let w = m
        .world_index(world)
        .ok_or_else(|| LogicError::UnknownWorld(world.to_owned()))?;
    let values = truth_set(m, f)?;
    Ok(Evaluation {
        value: values[w],
        warnings: domain_warnings(m, f, &[w]),
    })
}

/// `⊨_M φ`: true at every world.
pub fn is_valid(m: &KripkeModel, f: &Formula) -> Result<Validity, LogicError> {
    let values = truth_set(m, f)?;
    let failing = values.iter().position(|v| !v);
    let all: Vec<usize> = (0..m.worlds().len()).collect();
    Ok(Validity {
        valid: failing.is_none(),
        failing_world: failing.map(|w| m.worlds()[w].clone()),
        warnings: domain_warnings(m, f, &all),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::logic::parse;

    fn two_worlds() -> KripkeModel {
        // u has no successors, so boxes are vacuous there
        let s = |x: &str| x.to_owned();
        KripkeModel::new(
            vec![s("w"), s("u")],
            vec![(s("w"), s("w")), (s("w"), s("u"))],
            vec![s("p"), s("q")],
            BTreeMap::from([(s("w"), vec![s("p")]), (s("u"), vec![s("q")])]),
            BTreeMap::from([(s("p"), true), (s("q"), false)]),
        )
        .unwrap()
    }

    #[test]
    fn atoms_read_global_truth() {
        let m = two_worlds();
        for w in ["w", "u"] {
            assert!(evaluate(&m, &parse("p").unwrap(), w).unwrap().value);
            assert!(!evaluate(&m, &parse("q").unwrap(), w).unwrap().value);
        }
    }

    #[test]
    fn box_is_vacuous_without_successors() {
        let m = two_worlds();
        assert!(evaluate(&m, &parse("[]q").unwrap(), "u").unwrap().value);
        assert!(!evaluate(&m, &parse("[]q").unwrap(), "w").unwrap().value);
        assert!(!evaluate(&m, &parse("<>p").unwrap(), "u").unwrap().value);
    }

    #[test]
    fn reading_outside_the_domain_warns() {
        let m = two_worlds();
        let e = evaluate(&m, &parse("q").unwrap(), "w").unwrap();
        assert_eq!(
            e.warnings,
            vec![DomainWarning {
                atom: "q".into(),
                world: "w".into()
            }]
        );
        let e = evaluate(&m, &parse("[]p").unwrap(), "w").unwrap();
        assert_eq!(e.warnings.len(), 1);
        assert_eq!(e.warnings[0].world, "u");
        assert!(evaluate(&m, &parse("p").unwrap(), "w").unwrap().warnings.is_empty());
    }

    #[test]
    fn validity_examples() {
        let m = two_worlds();
        assert!(is_valid(&m, &parse("(q -> q)").unwrap()).unwrap().valid);
        assert!(is_valid(&m, &parse("([](p->q) -> ([]p -> []q))").unwrap()).unwrap().valid);
        let v = is_valid(&m, &parse("q").unwrap()).unwrap();
        assert!(!v.valid);
        assert_eq!(v.failing_world.as_deref(), Some("w"));
    }

    #[test]
    fn unknown_names_are_errors() {
        let m = two_worlds();
        assert!(matches!(
            evaluate(&m, &parse("r").unwrap(), "w"),
            Err(LogicError::UnknownAtom(_))
        ));
        assert!(matches!(
            evaluate(&m, &parse("p").unwrap(), "z"),
            Err(LogicError::UnknownWorld(_))
        ));
    }
}
