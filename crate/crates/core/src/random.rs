//! Seeded generation of small random trees and instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::literal::ValueSet;
use crate::space::{Feature, FeatureSpace, Instance};
use crate::tree::{DecisionTree, Edge, Node, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomTreeConfig {
    pub max_features: usize,
    /// Domains are drawn from `2..=max_domain`.
    pub max_domain: usize,
    /// Most internal nodes on any root-leaf path.
    pub max_depth: usize,
    /// Classes are drawn from `2..=max_classes`.
    pub max_classes: usize,
    /// Chance that a non-root node below the depth cap becomes a leaf.
    pub leaf_prob: f64,
}

impl Default for RandomTreeConfig {
    fn default() -> Self {
        Self {
            max_features: 6,
            max_domain: 4,
            max_depth: 6,
            max_classes: 3,
            leaf_prob: 0.3,
        }
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Builder<'r, R> {
    rng: &'r mut R,
    cfg: RandomTreeConfig,
    space: FeatureSpace,
    classes: usize,
    nodes: Vec<Node>,
    names: Vec<String>,
}

impl<R: Rng> Builder<'_, R> {
    fn leaf(&mut self) -> NodeId {
        let class = self.rng.random_range(0..self.classes);
        self.push(Node::Leaf { class }, "l")
    }

    fn push(&mut self, node: Node, prefix: &str) -> NodeId {
        self.nodes.push(node);
        let id = self.nodes.len() - 1;
        self.names.push(format!("{prefix}{id}"));
        id
    }

    /// `allowed[f]` is what the path so far admits for feature `f`.
    fn build(&mut self, allowed: Vec<ValueSet>, depth: usize) -> NodeId {
        let splittable: Vec<usize> = (0..allowed.len()).filter(|&f| allowed[f].count() >= 2).collect();
        let stop = depth > 0 && self.rng.random_bool(self.cfg.leaf_prob);
        if splittable.is_empty() || depth >= self.cfg.max_depth || stop {
            return self.leaf();
        }
        let feature = splittable[self.rng.random_range(0..splittable.len())];
        let size = self.space.domain_size(feature);

        let mut live: Vec<usize> = allowed[feature].iter().collect();
        live.shuffle(self.rng);
        let groups = self.rng.random_range(2..=live.len());
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); groups];
        for (i, &v) in live.iter().enumerate() {
            let g = if i < groups { i } else { self.rng.random_range(0..groups) };
            members[g].push(v);
        }
        for v in (0..size).filter(|&v| !allowed[feature].contains(v)) {
            let g = self.rng.random_range(0..groups);
            members[g].push(v);
        }

        let id = self.push(Node::Leaf { class: 0 }, "n");
        let mut edges = Vec::with_capacity(groups);
        for group in members {
            let values = ValueSet::from_values(size, group);
            let mut below = allowed.clone();
            below[feature].intersect_with(&values);
            let child = self.build(below, depth + 1);
            edges.push(Edge { values, child });
        }
        self.nodes[id] = Node::Internal { feature, edges };
        id
    }
}

/// A random valid tree. Features may be retested below their first test,
/// always on a proper subset of what the path still admits.
pub fn random_tree<R: Rng>(rng: &mut R, cfg: &RandomTreeConfig) -> DecisionTree {
    let n_features = rng.random_range(1..=cfg.max_features);
    let features = (0..n_features)
        .map(|f| {
            let d = rng.random_range(2..=cfg.max_domain);
            Feature {
                name: format!("x{}", f + 1),
                domain: (0..d).map(|v| v.to_string()).collect(),
            }
        })
        .collect();
    let space = FeatureSpace::new(features).expect("generated names are distinct");
    let classes = rng.random_range(2..=cfg.max_classes);
    let allowed = (0..n_features).map(|f| ValueSet::full(space.domain_size(f))).collect();
    let mut b = Builder {
        rng,
        cfg: *cfg,
        space: space.clone(),
        classes,
        nodes: Vec::new(),
        names: Vec::new(),
    };
    let root = b.build(allowed, 0);
    let (nodes, names) = (b.nodes, b.names);
    DecisionTree::new(
        space,
        (0..classes).map(|c| format!("c{c}")).collect(),
        root,
        nodes,
        names,
    )
    .expect("generator emits valid trees")
}

pub fn random_instance<R: Rng>(rng: &mut R, space: &FeatureSpace) -> Instance {
    let values = (0..space.len()).map(|f| rng.random_range(0..space.domain_size(f))).collect();
    Instance::new(space, values).expect("values drawn within domains")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_tree, tree_to_json};

    #[test]
    fn generated_trees_respect_bounds() {
        let cfg = RandomTreeConfig::default();
        let mut rng = seeded(7);
        for _ in 0..200 {
            let t = random_tree(&mut rng, &cfg);
            assert!(t.space().len() <= cfg.max_features);
            assert!(t.depth() <= cfg.max_depth);
            for f in 0..t.space().len() {
                assert!((2..=cfg.max_domain).contains(&t.space().domain_size(f)));
            }
            assert_eq!(parse_tree(&tree_to_json(&t)).unwrap(), t);
        }
    }

    #[test]
    fn same_seed_same_tree() {
        let cfg = RandomTreeConfig::default();
        assert_eq!(random_tree(&mut seeded(3), &cfg), random_tree(&mut seeded(3), &cfg));
    }

    #[test]
    fn repeated_features_occur() {
        let cfg = RandomTreeConfig::default();
        let mut rng = seeded(11);
        let repeated = (0..200)
            .map(|_| random_tree(&mut rng, &cfg))
            .any(|t| t.paths().iter().any(|p| p.node_counts.values().any(|&c| c > 1)));
        assert!(repeated);
    }
}
