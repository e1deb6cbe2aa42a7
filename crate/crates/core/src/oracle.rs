//! Brute-force ground truth over small feature spaces.
//!
//! Everything here is computed from the classification of individual
//! points, never from the tree's path structure: entailment by visiting
//! every completion, PI-explanations by sweeping the subset lattice, and
//! redundancy straight from the definition.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::literal::{Literal, LiteralSet};
use crate::tree::{ClassId, DecisionTree, TreePath};

/// Limits beyond which the oracle refuses to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Cap on `|F|`, the number of points in feature space.
    pub max_points: u64,
    /// Cap on the candidate literal count for subset enumeration.
    pub max_universe: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_points: 1_000_000,
            max_universe: 20,
        }
    }
}

impl OracleBudget {
    pub fn new(max_points: u64, max_universe: usize) -> Result<Self> {
        if max_points == 0 || max_universe == 0 {
            return Err(Error::BudgetExceeded("oracle caps must be positive".into()));
        }
        Ok(Self {
            max_points,
            max_universe,
        })
    }

    fn check_universe(&self, size: usize) -> Result<()> {
        if size > self.max_universe {
            return Err(Error::BudgetExceeded(format!(
                "{size} candidate literals exceed the cap of {}",
                self.max_universe
            )));
        }
        Ok(())
    }
}

/// The class of every point of a tree's feature space.
#[derive(Debug, Clone)]
pub struct Oracle<'t> {
    tree: &'t DecisionTree,
    budget: OracleBudget,
    sizes: Vec<usize>,
    /// Mixed-radix strides, feature 0 least significant.
    strides: Vec<usize>,
    table: Vec<ClassId>,
}

impl<'t> Oracle<'t> {
    /// Classifies all points; fails if the space exceeds the budget.
    pub fn new(tree: &'t DecisionTree, budget: OracleBudget) -> Result<Self> {
        let space = tree.space();
        let total = space.point_count();
        if total > BigUint::from(budget.max_points) {
            return Err(Error::BudgetExceeded(format!(
                "feature space has {total} points, cap is {}",
                budget.max_points
            )));
        }
        let sizes: Vec<usize> = (0..space.len()).map(|f| space.domain_size(f)).collect();
        let mut strides = Vec::with_capacity(sizes.len());
        let mut acc = 1usize;
        for &s in &sizes {
            strides.push(acc);
            acc *= s;
        }
        let mut table = Vec::with_capacity(acc);
        let mut point = vec![0usize; sizes.len()];
        for _ in 0..acc {
            table.push(tree.leaf_class(tree.leaf_for(&point)).unwrap());
            for (v, &s) in point.iter_mut().zip(&sizes) {
                *v += 1;
                if *v < s {
                    break;
                }
                *v = 0;
            }
        }
        Ok(Self {
            tree,
            budget,
            sizes,
            strides,
            table,
        })
    }

    pub fn tree(&self) -> &DecisionTree {
        self.tree
    }

    /// Class of a point given as value indices.
    pub fn class_of(&self, values: &[usize]) -> ClassId {
        let idx: usize = values.iter().zip(&self.strides).map(|(v, s)| v * s).sum();
        self.table[idx]
    }

    /// True iff every point consistent with `literals` is classified `class`.
    pub fn entails(&self, literals: &LiteralSet, class: ClassId) -> bool {
        let choices: Vec<Vec<usize>> = (0..self.sizes.len())
            .map(|f| match literals.get(f) {
                Some(l) => l.allowed.iter().collect(),
                None => (0..self.sizes[f]).collect(),
            })
            .collect();
        let mut pos = vec![0usize; choices.len()];
        loop {
            let idx: usize = pos
                .iter()
                .enumerate()
                .map(|(f, &p)| choices[f][p] * self.strides[f])
                .sum();
            if self.table[idx] != class {
                return false;
            }
            let mut f = 0;
            loop {
                if f == choices.len() {
                    return true;
                }
                pos[f] += 1;
                if pos[f] < choices[f].len() {
                    break;
                }
                pos[f] = 0;
                f += 1;
            }
        }
    }

    /// All subset-minimal subsets of `universe` that entail `class`, by an
    /// ascending-cardinality sweep that skips supersets of earlier finds.
    /// Ordered by size, then lexicographically by universe index.
    pub fn enumerate_pi(&self, universe: &[Literal], class: ClassId) -> Result<Vec<LiteralSet>> {
        self.budget.check_universe(universe.len())?;
        let m = universe.len();
        let mut found: Vec<u32> = Vec::new();
        let mut out = Vec::new();
        for k in 0..=m {
            for mask in subsets_of_size(m, k) {
                if found.iter().any(|&f| f & !mask == 0) {
                    continue;
                }
                let set = LiteralSet::new((0..m).filter(|i| mask & (1 << i) != 0).map(|i| universe[i].clone()))?;
                if self.entails(&set, class) {
                    found.push(mask);
                    out.push(set);
                }
            }
        }
        Ok(out)
    }

    /// A path is redundant iff one of its literals can be dropped with the
    /// rest still entailing its class.
    pub fn is_redundant(&self, path: &TreePath) -> bool {
        path.literals
            .features()
            .any(|f| self.entails(&path.literals.without(f), path.prediction))
    }

    /// Entails and no single literal can be dropped.
    pub fn is_pi_explanation(&self, literals: &LiteralSet, class: ClassId) -> bool {
        self.entails(literals, class)
            && literals
                .features()
                .all(|f| !self.entails(&literals.without(f), class))
    }
}

/// Bitmasks over `m` elements with exactly `k` bits set, in increasing
/// lexicographic order of their index lists.
fn subsets_of_size(m: usize, k: usize) -> Vec<u32> {
    fn rec(m: usize, k: usize, start: usize, mask: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(mask);
            return;
        }
        for i in start..=m - k {
            rec(m, k - 1, i + 1, mask | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(m, k, 0, 0, &mut out);
    }
    out
}

pub fn bf_entails(tree: &DecisionTree, literals: &LiteralSet, class: ClassId, budget: OracleBudget) -> Result<bool> {
    Ok(Oracle::new(tree, budget)?.entails(literals, class))
}

pub fn bf_enumerate_pi(
    tree: &DecisionTree,
    universe: &[Literal],
    class: ClassId,
    budget: OracleBudget,
) -> Result<Vec<LiteralSet>> {
    Oracle::new(tree, budget)?.enumerate_pi(universe, class)
}

pub fn bf_is_redundant(tree: &DecisionTree, path: &TreePath, budget: OracleBudget) -> Result<bool> {
    tree.check_path(path)?;
    Ok(Oracle::new(tree, budget)?.is_redundant(path))
}
