//! Shared workloads for the benchmarks.

use treexp_core::random::{random_tree, seeded, RandomTreeConfig};
use treexp_core::{DecisionTree, TreePath};

/// Trees larger than the oracle-checked ones: more features, deeper paths.
pub fn wide_config() -> RandomTreeConfig {
    RandomTreeConfig {
        max_features: 16,
        max_domain: 4,
        max_depth: 10,
        max_classes: 3,
        leaf_prob: 0.35,
    }
}

/// A tree with its paths, named for reporting.
pub struct Workload {
    pub name: String,
    pub tree: DecisionTree,
    pub paths: Vec<TreePath>,
}

impl Workload {
    pub fn new(name: impl Into<String>, tree: DecisionTree) -> Self {
        let paths = tree.paths();
        Self {
            name: name.into(),
            tree,
            paths,
        }
    }
}

/// `count` seeded trees, each with at least `min_paths` paths.
pub fn corpus(seed: u64, count: usize, min_paths: usize, cfg: &RandomTreeConfig) -> Vec<Workload> {
    let mut rng = seeded(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let tree = random_tree(&mut rng, cfg);
        if tree.leaves().len() >= min_paths {
            let name = format!("t{}-{}p", out.len(), tree.leaves().len());
            out.push(Workload::new(name, tree));
        }
    }
    out
}
