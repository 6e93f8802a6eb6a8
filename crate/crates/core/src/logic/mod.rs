//! The propositional modal language: syntax, concrete grammar, valuation,
//! and the predicate checks built on it.

mod eval;
mod parse;
mod predicates;

use std::fmt;

use thiserror::Error;

pub use eval::{evaluate, is_valid, truth_set, DomainWarning, Evaluation, Validity};
pub use parse::{parse, ParseError};
pub use predicates::{
    check_convexity, check_theorem5, is_resource_preserving, ConvexityPair, ConvexityReport, ConvexityVerdict,
    EdgeInstance, ResourcePreservation, Theorem5Report, DEFAULT_P_SAMPLES,
};

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("unknown world {0}")]
    UnknownWorld(String),
    #[error("unknown atom {0}")]
    UnknownAtom(String),
}

/// Core syntax. `&`, `|` and `<->` exist only as constructors that desugar
/// into negation and implication.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
}

impl Formula {
    pub fn atom(id: impl Into<String>) -> Self {
        Formula::Atom(id.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn nec(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn poss(f: Formula) -> Self {
        Formula::Diamond(Box::new(f))
    }

    /// `~(a -> ~b)`
    pub fn and(a: Formula, b: Formula) -> Self {
        Self::not(Self::implies(a, Self::not(b)))
    }

    /// `(~a -> b)`
    pub fn or(a: Formula, b: Formula) -> Self {
        Self::implies(Self::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Self::and(Self::implies(a.clone(), b.clone()), Self::implies(b, a))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => 1 + f.size(),
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => 1 + f.depth(),
            Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Replaces every `Diamond(f)` by `Not(Box(Not(f)))`.
    pub fn without_diamonds(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Self::not(f.without_diamonds()),
            Formula::Box(f) => Self::nec(f.without_diamonds()),
            Formula::Diamond(f) => Self::not(Self::nec(Self::not(f.without_diamonds()))),
            Formula::Implies(a, b) => Self::implies(a.without_diamonds(), b.without_diamonds()),
        }
    }

    /// Atom ids in first-occurrence order.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::Atom(a) => {
                if !out.contains(&a.as_str()) {
                    out.push(a);
                }
            }
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => f.collect_atoms(out),
            Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

/// Prints in the concrete grammar accepted by [`parse`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => write!(f, "~{x}"),
            Formula::Box(x) => write!(f, "[]{x}"),
            Formula::Diamond(x) => write!(f, "<>{x}"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}
