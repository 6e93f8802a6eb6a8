//! Binary relations on `0..n` stored as dense boolean matrices.

use std::collections::BTreeSet;

/// A binary relation on `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

/// How a relation fails to be a preorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreorderViolation {
    NotReflexive(usize),
    /// `(a, b)` and `(b, c)` present, `(a, c)` missing.
    NotTransitive(usize, usize, usize),
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn diagonal(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    /// Pairs out of range are ignored by callers that validated them; panics otherwise.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n, "pair ({a}, {b}) out of range {}", self.n);
        self.bits[a * self.n + b] = true;
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| (0..self.n).filter(move |&b| self.contains(a, b)).map(move |b| (a, b)))
    }

    pub fn pair_set(&self) -> BTreeSet<(usize, usize)> {
        self.pairs().collect()
    }

    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&b| self.contains(a, b))
    }

    pub fn out_degree(&self, a: usize) -> usize {
        self.successors(a).count()
    }

    pub fn in_degree(&self, b: usize) -> usize {
        (0..self.n).filter(|&a| self.contains(a, b)).count()
    }

    /// Relational composition: `(a, c)` iff some `b` has `(a, b)` in `self` and `(b, c)` in `other`.
    pub fn then(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        let mut out = Relation::empty(self.n);
        for a in 0..self.n {
            for b in self.successors(a) {
                for c in other.successors(b) {
                    out.bits[a * self.n + c] = true;
                }
            }
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        Relation {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect(),
        }
    }

    /// Transitive closure by iterated squaring: `R <- R ∪ R∘R` until fixpoint.
    pub fn transitive_closure(&self) -> Relation {
        let mut current = self.clone();
        loop {
            let next = current.union(&current.then(&current));
            if next == current {
                return current;
            }
            current = next;
        }
    }

    pub fn reflexive_transitive_closure(&self) -> Relation {
        self.union(&Relation::diagonal(self.n)).transitive_closure()
    }

    pub fn reflexivity_violation(&self) -> Option<usize> {
        (0..self.n).find(|&i| !self.contains(i, i))
    }

    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.n {
            for b in self.successors(a) {
                for c in self.successors(b) {
                    if !self.contains(a, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn preorder_violation(&self) -> Option<PreorderViolation> {
        if let Some(i) = self.reflexivity_violation() {
            return Some(PreorderViolation::NotReflexive(i));
        }
        self.transitivity_violation()
            .map(|(a, b, c)| PreorderViolation::NotTransitive(a, b, c))
    }

    pub fn is_preorder(&self) -> bool {
        self.preorder_violation().is_none()
    }

    /// Restriction to the given elements, reindexed in the order given.
    pub fn restrict(&self, keep: &[usize]) -> Relation {
        let mut out = Relation::empty(keep.len());
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if self.contains(a, b) {
                    out.bits[i * keep.len() + j] = true;
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    /// Floyd-Warshall style closure, independent of the squaring loop.
    fn closure_oracle(r: &Relation) -> Relation {
        let n = r.size();
        let mut m = r.clone();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if m.contains(i, k) && m.contains(k, j) {
                        m.insert(i, j);
                    }
                }
            }
        }
        m
    }

    #[test]
    fn chain_closure() {
        let r = Relation::from_pairs(4, [(0, 1), (1, 2), (2, 3)]);
        let c = r.transitive_closure();
        assert!(c.contains(0, 3));
        assert_eq!(c.len(), 6);
        assert_eq!(r.transitivity_violation(), Some((0, 1, 2)));
    }

    #[test]
    fn preorder_violations() {
        let r = Relation::from_pairs(2, [(0, 1)]);
        assert_eq!(r.preorder_violation(), Some(PreorderViolation::NotReflexive(0)));
        let r = Relation::from_pairs(3, [(0, 0), (1, 1), (0, 1), (1, 2), (2, 2)]);
        assert_eq!(r.preorder_violation(), Some(PreorderViolation::NotTransitive(0, 1, 2)));
    }

    proptest! {
        #[test]
        fn squaring_matches_warshall(n in 1usize..7, raw in proptest::collection::vec((0usize..7, 0usize..7), 0..20)) {
            let r = Relation::from_pairs(n, raw.into_iter().filter(|(a, b)| *a < n && *b < n));
            let c = r.transitive_closure();
            prop_assert_eq!(&c, &closure_oracle(&r));
            prop_assert!(c.transitivity_violation().is_none());
            prop_assert!(r.reflexive_transitive_closure().is_preorder());
        }
    }
}
