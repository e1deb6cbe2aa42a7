//! Literals `x_i ∈ S_i` and consistent conjunctions of them.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::space::{FeatureId, FeatureSpace, Instance, ValueId};

/// Subset of one feature's domain, stored as a bitset sized to the domain.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueSet(FixedBitSet);

impl ValueSet {
    pub fn empty(domain_size: usize) -> Self {
        Self(FixedBitSet::with_capacity(domain_size))
    }

    pub fn full(domain_size: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(domain_size);
        bits.insert_range(..);
        Self(bits)
    }

    pub fn singleton(domain_size: usize, value: ValueId) -> Self {
        let mut s = Self::empty(domain_size);
        s.0.insert(value);
        s
    }

    pub fn from_values<I: IntoIterator<Item = ValueId>>(domain_size: usize, values: I) -> Self {
        let mut s = Self::empty(domain_size);
        for v in values {
            s.0.insert(v);
        }
        s
    }

    pub fn domain_size(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, value: ValueId) -> bool {
        self.0.contains(value)
    }

    pub fn insert(&mut self, value: ValueId) {
        self.0.insert(value);
    }

    /// Number of allowed values.
    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_full()
    }

    pub fn intersects(&self, other: &ValueSet) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection(&self, other: &ValueSet) -> ValueSet {
        let mut out = self.clone();
        out.0.intersect_with(&other.0);
        out
    }

    pub fn intersect_with(&mut self, other: &ValueSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn union_with(&mut self, other: &ValueSet) {
        self.0.union_with(&other.0);
    }

    pub fn complement(&self) -> ValueSet {
        let mut out = Self::full(self.domain_size());
        out.0.difference_with(&self.0);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = ValueId> + '_ {
        self.0.ones()
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `x_feature ∈ allowed`. Equality and disequality literals are the
/// special cases of a singleton set and of a co-singleton set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Literal {
    pub feature: FeatureId,
    pub allowed: ValueSet,
}

impl Literal {
    pub fn new(feature: FeatureId, allowed: ValueSet) -> Result<Self> {
        if allowed.is_empty() {
            return Err(Error::InconsistentLiterals(feature));
        }
        Ok(Self { feature, allowed })
    }

    pub fn equals(space: &FeatureSpace, feature: FeatureId, value: ValueId) -> Self {
        Self {
            feature,
            allowed: ValueSet::singleton(space.domain_size(feature), value),
        }
    }

    pub fn is_equality(&self) -> bool {
        self.allowed.count() == 1
    }

    pub fn is_negation(&self) -> bool {
        self.allowed.count() + 1 == self.allowed.domain_size()
    }

    pub fn admits(&self, value: ValueId) -> bool {
        self.allowed.contains(value)
    }

    /// Human-readable form such as `x1=0`, `x1!=0` or `x1∈{a,b}`.
    pub fn display<'a>(&'a self, space: &'a FeatureSpace) -> LiteralDisplay<'a> {
        LiteralDisplay { lit: self, space }
    }
}

pub struct LiteralDisplay<'a> {
    lit: &'a Literal,
    space: &'a FeatureSpace,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let feature = self.space.feature(self.lit.feature);
        let allowed = &self.lit.allowed;
        if allowed.count() == 1 {
            let v = allowed.iter().next().unwrap();
            write!(f, "{}={}", feature.name, feature.domain[v])
        } else if allowed.count() + 1 == allowed.domain_size() && allowed.domain_size() > 2 {
            let v = allowed.complement().iter().next().unwrap();
            write!(f, "{}!={}", feature.name, feature.domain[v])
        } else {
            let names: Vec<_> = allowed.iter().map(|v| feature.domain[v].as_str()).collect();
            write!(f, "{}∈{{{}}}", feature.name, names.join(","))
        }
    }
}

/// Two literals are consistent unless they constrain the same feature to
/// disjoint value sets.
pub fn literals_consistent(a: &Literal, b: &Literal) -> bool {
    a.feature != b.feature || a.allowed.intersects(&b.allowed)
}

/// Conjunction of literals with at most one literal per feature, kept
/// sorted by feature.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct LiteralSet {
    lits: Vec<Literal>,
}

impl LiteralSet {
    /// Collects literals, intersecting those that share a feature.
    /// Fails if some feature ends up with no allowed value.
    pub fn new<I: IntoIterator<Item = Literal>>(literals: I) -> Result<Self> {
        let mut lits: Vec<Literal> = literals.into_iter().collect();
        lits.sort_by_key(|l| l.feature);
        let mut merged: Vec<Literal> = Vec::with_capacity(lits.len());
        for lit in lits {
            match merged.last_mut() {
                Some(last) if last.feature == lit.feature => {
                    last.allowed.intersect_with(&lit.allowed)
                }
                _ => merged.push(lit),
            }
        }
        if let Some(bad) = merged.iter().find(|l| l.allowed.is_empty()) {
            return Err(Error::InconsistentLiterals(bad.feature));
        }
        Ok(Self { lits: merged })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The `n` equality literals `x_i = v_i` describing a point.
    pub fn from_instance(space: &FeatureSpace, instance: &Instance) -> Self {
        Self {
            lits: (0..space.len())
                .map(|i| Literal::equals(space, i, instance.value(i)))
                .collect(),
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Literal> {
        self.lits.iter()
    }

    pub fn features(&self) -> impl Iterator<Item = FeatureId> + '_ {
        self.lits.iter().map(|l| l.feature)
    }

    pub fn get(&self, feature: FeatureId) -> Option<&Literal> {
        self.lits
            .binary_search_by_key(&feature, |l| l.feature)
            .ok()
            .map(|i| &self.lits[i])
    }

    pub fn constrains(&self, feature: FeatureId) -> bool {
        self.get(feature).is_some()
    }

    /// Copy with the literal on `feature` removed.
    pub fn without(&self, feature: FeatureId) -> Self {
        Self {
            lits: self
                .lits
                .iter()
                .filter(|l| l.feature != feature)
                .cloned()
                .collect(),
        }
    }

    /// Subset of literals selected by a predicate.
    pub fn filtered(&self, mut keep: impl FnMut(&Literal) -> bool) -> Self {
        Self {
            lits: self.lits.iter().filter(|l| keep(l)).cloned().collect(),
        }
    }

    /// Every literal of `self` also appears (identically) in `other`.
    pub fn is_subset(&self, other: &LiteralSet) -> bool {
        self.lits.iter().all(|l| other.get(l.feature) == Some(l))
    }

    pub fn consistent_with(&self, other: &LiteralSet) -> bool {
        self.lits.iter().all(|l| match other.get(l.feature) {
            Some(o) => literals_consistent(l, o),
            None => true,
        })
    }

    pub fn admits(&self, instance: &Instance) -> bool {
        self.lits.iter().all(|l| l.admits(instance.value(l.feature)))
    }

    /// Per-feature allowed sets, full domains for unconstrained features.
    pub fn domains(&self, space: &FeatureSpace) -> Vec<ValueSet> {
        let mut out: Vec<ValueSet> = (0..space.len())
            .map(|i| ValueSet::full(space.domain_size(i)))
            .collect();
        for l in &self.lits {
            out[l.feature] = l.allowed.clone();
        }
        out
    }

    pub fn display<'a>(&'a self, space: &'a FeatureSpace) -> LiteralSetDisplay<'a> {
        LiteralSetDisplay { set: self, space }
    }
}

impl<'a> IntoIterator for &'a LiteralSet {
    type Item = &'a Literal;
    type IntoIter = std::slice::Iter<'a, Literal>;

    fn into_iter(self) -> Self::IntoIter {
        self.lits.iter()
    }
}

pub struct LiteralSetDisplay<'a> {
    set: &'a LiteralSet,
    space: &'a FeatureSpace,
}

impl fmt::Display for LiteralSetDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", l.display(self.space))?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(feature: FeatureId, n: usize, values: &[ValueId]) -> Literal {
        Literal::new(feature, ValueSet::from_values(n, values.iter().copied())).unwrap()
    }

    #[test]
    fn consistency_of_literal_pairs() {
        assert!(!literals_consistent(&lit(0, 2, &[0]), &lit(0, 2, &[1])));
        assert!(literals_consistent(&lit(0, 2, &[0]), &lit(1, 2, &[0])));
        assert!(literals_consistent(&lit(0, 3, &[1, 2]), &lit(0, 3, &[2])));
    }

    #[test]
    fn literal_kinds() {
        assert!(lit(0, 3, &[1]).is_equality());
        assert!(lit(0, 3, &[0, 2]).is_negation());
        assert!(!lit(0, 4, &[0, 2]).is_negation());
        assert!(Literal::new(0, ValueSet::empty(3)).is_err());
    }

    #[test]
    fn merging_intersects_same_feature() {
        let set = LiteralSet::new([lit(1, 3, &[0, 1]), lit(0, 2, &[1]), lit(1, 3, &[0])]).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.get(1), Some(&lit(1, 3, &[0])));
        assert_eq!(set.features().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(
            LiteralSet::new([lit(0, 2, &[0]), lit(0, 2, &[1])]),
            Err(Error::InconsistentLiterals(0))
        );
    }

    #[test]
    fn subset_and_without() {
        let set = LiteralSet::new([lit(0, 2, &[1]), lit(2, 2, &[0])]).unwrap();
        let smaller = set.without(0);
        assert!(smaller.is_subset(&set));
        assert!(!set.is_subset(&smaller));
        assert!(LiteralSet::empty().is_subset(&set));
    }

    #[test]
    fn complement_and_full() {
        let s = ValueSet::from_values(4, [1, 3]);
        assert_eq!(s.complement(), ValueSet::from_values(4, [0, 2]));
        assert!(ValueSet::full(3).is_full());
        assert_eq!(ValueSet::full(3).count(), 3);
    }
}
