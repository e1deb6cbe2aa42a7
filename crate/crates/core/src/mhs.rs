//! Enumeration of PI-explanations as minimal hitting sets.
//!
//! Given a candidate literal set `R` (a path's literals or an instance's
//! equality literals) and target class `c`, every path `Q_s` predicting a
//! class other than `c` yields the set `L_s` of literals of `R` that
//! contradict `Q_s`. A subset of `R` entails `c` iff it hits every `L_s`,
//! so the subset-minimal hitting sets are exactly the PI-explanations
//! drawn from `R`.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::literal::{literals_consistent, Literal, LiteralSet};
use crate::space::Instance;
use crate::tree::{ClassId, DecisionTree, TreePath};
use crate::xplain::{Explanation, Mode, Source};

/// What is being explained.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Path(&'a TreePath),
    Instance(&'a Instance),
}

/// One set to hit, as indices into the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitSet {
    pub members: FixedBitSet,
    /// Name of the contrary path the set was built from.
    pub path: String,
}

impl HitSet {
    pub fn indices(&self) -> Vec<usize> {
        self.members.ones().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInstance {
    pub universe: Vec<Literal>,
    pub sets: Vec<HitSet>,
    pub class: ClassId,
    pub mode: Mode,
    pub source: Source,
}

/// Builds the family `{L_s}`, one set per contrary path, in path order.
///
/// Restricted mode accepts a path, or an instance (standing for the path
/// it follows). Unrestricted mode needs an instance.
pub fn build_hitting_sets(tree: &DecisionTree, target: Target<'_>, mode: Mode) -> Result<HittingSetInstance> {
    let (universe, class, source) = match (mode, target) {
        (Mode::PathRestricted, Target::Path(path)) => {
            tree.check_path(path)?;
            (path.literals.literals().to_vec(), path.prediction, Source::Path(path.name.clone()))
        }
        (Mode::PathRestricted, Target::Instance(instance)) => {
            let (class, path) = tree.classify(instance);
            (path.literals.literals().to_vec(), class, Source::Path(path.name))
        }
        (Mode::PathUnrestricted, Target::Instance(instance)) => (
            LiteralSet::from_instance(tree.space(), instance).literals().to_vec(),
            tree.predict(instance),
            Source::Instance(instance.clone()),
        ),
        (Mode::PathUnrestricted, Target::Path(_)) => {
            return Err(Error::ModeSource("path-unrestricted explanations need an instance"))
        }
    };

    let mut sets = Vec::new();
    for q in tree.paths().into_iter().filter(|q| q.prediction != class) {
        let mut members = FixedBitSet::with_capacity(universe.len());
        for (i, lit) in universe.iter().enumerate() {
            if let Some(other) = q.literals.get(lit.feature) {
                if !literals_consistent(lit, other) {
                    members.insert(i);
                }
            }
        }
        if members.is_clear() {
            return Err(Error::EmptyHittingSet(q.name));
        }
        sets.push(HitSet { members, path: q.name });
    }
    Ok(HittingSetInstance {
        universe,
        sets,
        class,
        mode,
        source,
    })
}

/// All subset-minimal hitting sets of the instance's family, as literal
/// sets, ordered by cardinality and then lexicographically by universe
/// index. With `limit`, only the first `limit` are produced.
pub fn enumerate_mhs(instance: &HittingSetInstance, limit: Option<usize>) -> Vec<LiteralSet> {
    let sets: Vec<FixedBitSet> = instance.sets.iter().map(|s| s.members.clone()).collect();
    minimal_hitting_sets(instance.universe.len(), &sets, limit)
        .into_iter()
        .map(|idx| {
            LiteralSet::new(idx.into_iter().map(|i| instance.universe[i].clone()))
                .expect("universe literals are on distinct features")
        })
        .collect()
}

/// Minimal hitting sets over elements `0..n`.
///
/// Sizes are explored in increasing order. For a given size, a depth-first
/// search branches on the members of the lowest-index set not yet hit;
/// partial sets containing an already emitted (smaller) hitting set are cut.
/// Every minimal hitting set `H` is reached, since the branching set always
/// meets `H` and the partial set stays inside it.
pub fn minimal_hitting_sets(n: usize, sets: &[FixedBitSet], limit: Option<usize>) -> Vec<Vec<usize>> {
    let mut family: Vec<FixedBitSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !family.contains(s) {
            family.push(s.clone());
        }
    }
    let limit = limit.unwrap_or(usize::MAX);
    let mut out: Vec<Vec<usize>> = Vec::new();
    if limit == 0 {
        return out;
    }
    if family.is_empty() {
        out.push(Vec::new());
        return out;
    }
    if family.iter().any(|s| s.is_clear()) {
        return out;
    }

    let mut search = MhsSearch {
        family: &family,
        emitted: Vec::new(),
        found: BTreeSet::new(),
        current: FixedBitSet::with_capacity(n),
        size: 0,
    };
    for size in 1..=n.min(family.len()) {
        search.size = size;
        search.extend(0);
        for hs in std::mem::take(&mut search.found) {
            let mut bits = FixedBitSet::with_capacity(n);
            bits.extend(hs.iter().copied());
            search.emitted.push(bits);
            out.push(hs);
            if out.len() == limit {
                return out;
            }
        }
    }
    out
}

struct MhsSearch<'a> {
    family: &'a [FixedBitSet],
    emitted: Vec<FixedBitSet>,
    found: BTreeSet<Vec<usize>>,
    current: FixedBitSet,
    size: usize,
}

impl MhsSearch<'_> {
    fn extend(&mut self, chosen: usize) {
        if self.emitted.iter().any(|e| e.is_subset(&self.current)) {
            return;
        }
        let unhit = self.family.iter().find(|s| s.is_disjoint(&self.current));
        match unhit {
            None => {
                if chosen == self.size && self.is_minimal() {
                    self.found.insert(self.current.ones().collect());
                }
            }
            Some(set) if chosen < self.size => {
                for e in set.ones() {
                    self.current.insert(e);
                    self.extend(chosen + 1);
                    self.current.remove(e);
                }
            }
            Some(_) => {}
        }
    }

    /// Every chosen element is the only one hitting some set.
    fn is_minimal(&self) -> bool {
        self.current.ones().all(|e| {
            self.family
                .iter()
                .any(|s| s.contains(e) && s.intersection_count(&self.current) == 1)
        })
    }
}

/// All PI-explanations drawn from the target's candidate literals.
pub fn enumerate_pi_explanations(
    tree: &DecisionTree,
    target: Target<'_>,
    mode: Mode,
    limit: Option<usize>,
) -> Result<Vec<Explanation>> {
    let instance = build_hitting_sets(tree, target, mode)?;
    Ok(enumerate_mhs(&instance, limit)
        .into_iter()
        .map(|literals| {
            debug_assert!(crate::xplain::entails(tree, &literals, instance.class));
            Explanation {
                literals,
                class: instance.class,
                mode,
                source: instance.source.clone(),
                minimal: true,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::format::parse_tree;
    use proptest::prelude::*;

    fn bits(n: usize, members: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(n);
        b.extend(members.iter().copied());
        b
    }

    fn hits_all(sets: &[FixedBitSet], h: &[usize]) -> bool {
        sets.iter().all(|s| h.iter().any(|&e| s.contains(e)))
    }

    /// Every subset of `0..n`, keeping hitting sets none of whose
    /// one-element removals is still hitting.
    fn brute_force(n: usize, sets: &[FixedBitSet]) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for mask in 0u32..(1 << n) {
            let h: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if !hits_all(sets, &h) {
                continue;
            }
            let minimal = (0..h.len()).all(|skip| {
                let smaller: Vec<usize> = h
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &e)| e)
                    .collect();
                !hits_all(sets, &smaller)
            });
            if minimal {
                out.insert(h);
            }
        }
        out
    }

    #[test]
    fn fig1b_p2_family() {
        let tree = parse_tree(fixtures::FIG1B).unwrap();
        let p2 = tree.path_by_name("P2").unwrap();
        let inst = build_hitting_sets(&tree, Target::Path(&p2), Mode::PathRestricted).unwrap();
        // universe: x1=1, x2=0, x3=1, x4=1
        let family: Vec<(String, Vec<usize>)> = inst.sets.iter().map(|s| (s.path.clone(), s.indices())).collect();
        assert_eq!(
            family,
            vec![
                ("Q1".to_string(), vec![0, 2]),
                ("Q2".to_string(), vec![0, 3]),
                ("Q3".to_string(), vec![2]),
                ("Q4".to_string(), vec![3]),
            ]
        );
        let all = enumerate_mhs(&inst, None);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].features().collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn fig3_family_and_mhs() {
        let tree = parse_tree(fixtures::FIG3).unwrap();
        let v = Instance::new(tree.space(), vec![1, 1, 1, 1]).unwrap();
        let inst = build_hitting_sets(&tree, Target::Instance(&v), Mode::PathUnrestricted).unwrap();
        let family: Vec<Vec<usize>> = inst.sets.iter().map(HitSet::indices).collect();
        assert_eq!(family, vec![vec![0, 1], vec![0, 3], vec![2]]);
        let all: Vec<Vec<usize>> = enumerate_mhs(&inst, None)
            .iter()
            .map(|s| s.features().collect())
            .collect();
        assert_eq!(all, vec![vec![0, 2], vec![1, 2, 3]]);
        assert_eq!(enumerate_mhs(&inst, Some(1)).len(), 1);
    }

    #[test]
    fn single_class_tree_has_empty_family() {
        let tree = parse_tree(fixtures::CONSTANT).unwrap();
        let v = Instance::new(tree.space(), vec![]).unwrap();
        let inst = build_hitting_sets(&tree, Target::Instance(&v), Mode::PathUnrestricted).unwrap();
        assert!(inst.sets.is_empty());
        assert_eq!(enumerate_mhs(&inst, None), vec![LiteralSet::empty()]);
    }

    #[test]
    fn mode_and_source_must_match() {
        let tree = parse_tree(fixtures::FIG1B).unwrap();
        let p2 = tree.path_by_name("P2").unwrap();
        assert!(matches!(
            build_hitting_sets(&tree, Target::Path(&p2), Mode::PathUnrestricted),
            Err(Error::ModeSource(_))
        ));
    }

    #[test]
    fn worked_families() {
        let sets = [bits(4, &[0, 2]), bits(4, &[0, 3]), bits(4, &[2]), bits(4, &[3])];
        assert_eq!(minimal_hitting_sets(4, &sets, None), vec![vec![2, 3]]);
        let sets = [bits(4, &[0, 1]), bits(4, &[0, 3]), bits(4, &[2])];
        assert_eq!(minimal_hitting_sets(4, &sets, None), vec![vec![0, 2], vec![1, 2, 3]]);
        assert_eq!(minimal_hitting_sets(3, &[], None), vec![Vec::<usize>::new()]);
        assert!(minimal_hitting_sets(3, &[bits(3, &[])], None).is_empty());
    }

    #[test]
    fn duplicate_sets_do_not_change_the_result() {
        let sets = [bits(3, &[0, 1]), bits(3, &[0, 1]), bits(3, &[2])];
        assert_eq!(minimal_hitting_sets(3, &sets, None), vec![vec![0, 2], vec![1, 2]]);
    }

    fn family() -> impl Strategy<Value = (usize, Vec<FixedBitSet>)> {
        (1usize..=8).prop_flat_map(|n| {
            let set = prop::collection::btree_set(0..n, 1..=n);
            prop::collection::vec(set, 0..7).prop_map(move |sets| {
                let sets = sets
                    .iter()
                    .map(|s| bits(n, &s.iter().copied().collect::<Vec<_>>()))
                    .collect();
                (n, sets)
            })
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force((n, sets) in family()) {
            let got = minimal_hitting_sets(n, &sets, None);
            let expected = brute_force(n, &sets);
            prop_assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), expected);
            // ordered by size, then lexicographically, without repeats
            let mut sorted = got.clone();
            sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            sorted.dedup();
            prop_assert_eq!(&got, &sorted);
        }

        #[test]
        fn limit_truncates_in_order((n, sets) in family(), limit in 0usize..4) {
            let all = minimal_hitting_sets(n, &sets, None);
            let some = minimal_hitting_sets(n, &sets, Some(limit));
            prop_assert_eq!(&some[..], &all[..limit.min(all.len())]);
        }
    }
}
