//! Univariate categorical decision trees and their root-to-leaf paths.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::literal::{Literal, LiteralSet, ValueSet};
use crate::space::{FeatureId, FeatureSpace, Instance, ValueId};

pub type NodeId = usize;
pub type ClassId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub values: ValueSet,
    pub child: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Internal { feature: FeatureId, edges: Vec<Edge> },
    Leaf { class: ClassId },
}

/// One internal node of a path together with the edge the path leaves it by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStep {
    pub node: NodeId,
    pub edge: usize,
}

/// A root-to-leaf path with its aggregated literal set `L(R_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePath {
    pub name: String,
    pub leaf: NodeId,
    /// Internal nodes from the root down, with the edge taken at each.
    pub steps: Vec<PathStep>,
    /// One literal per tested feature; repeated tests are intersected.
    pub literals: LiteralSet,
    pub prediction: ClassId,
    /// How many path nodes test each feature.
    pub node_counts: BTreeMap<FeatureId, usize>,
}

impl TreePath {
    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

/// A validated decision tree over a categorical feature space.
///
/// Every internal node's outgoing edges partition the tested feature's
/// domain, the node graph is a tree rooted at `root`, and no path
/// constrains a feature to an empty set. Under these conditions each
/// point of the feature space reaches exactly one leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    space: FeatureSpace,
    classes: Vec<String>,
    root: NodeId,
    nodes: Vec<Node>,
    node_names: Vec<String>,
    parent: Vec<Option<PathStep>>,
    leaves: Vec<NodeId>,
    path_names: BTreeMap<NodeId, String>,
}

impl DecisionTree {
    pub fn new(
        space: FeatureSpace,
        classes: Vec<String>,
        root: NodeId,
        nodes: Vec<Node>,
        node_names: Vec<String>,
    ) -> Result<Self> {
        assert_eq!(nodes.len(), node_names.len(), "one name per node");
        if classes.is_empty() {
            return Err(Error::NoClasses);
        }
        for (i, c) in classes.iter().enumerate() {
            if classes[..i].contains(c) {
                return Err(Error::DuplicateClass(c.clone()));
            }
        }
        if root >= nodes.len() {
            return Err(Error::UnknownRoot(root.to_string()));
        }

        let mut parent: Vec<Option<PathStep>> = vec![None; nodes.len()];
        for (id, node) in nodes.iter().enumerate() {
            let name = &node_names[id];
            match node {
                Node::Leaf { class } => {
                    if *class >= classes.len() {
                        return Err(Error::UnknownClass(class.to_string()));
                    }
                }
                Node::Internal { feature, edges } => {
                    if *feature >= space.len() {
                        return Err(Error::UnknownFeature(feature.to_string()));
                    }
                    check_partition(&space, *feature, edges, name)?;
                    for (e, edge) in edges.iter().enumerate() {
                        if edge.child >= nodes.len() {
                            return Err(Error::DanglingChild {
                                node: name.clone(),
                                child: edge.child.to_string(),
                            });
                        }
                        if edge.child == root {
                            return Err(Error::Cycle(node_names[root].clone()));
                        }
                        if parent[edge.child].is_some() {
                            return Err(Error::MultipleParents(node_names[edge.child].clone()));
                        }
                        parent[edge.child] = Some(PathStep { node: id, edge: e });
                    }
                }
            }
        }

        // Each node has at most one parent and the root has none, so the
        // part reachable from the root is a tree. Anything else is either a
        // detached cycle or a detached subtree.
        let mut reached = vec![false; nodes.len()];
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            reached[n] = true;
            if let Node::Internal { edges, .. } = &nodes[n] {
                stack.extend(edges.iter().map(|e| e.child));
            }
        }
        if let Some(orphan) = (0..nodes.len()).find(|&n| !reached[n]) {
            let mut seen = vec![false; nodes.len()];
            let mut cur = orphan;
            while let Some(step) = parent[cur] {
                if seen[cur] {
                    return Err(Error::Cycle(node_names[cur].clone()));
                }
                seen[cur] = true;
                cur = step.node;
            }
            return Err(Error::Unreachable(node_names[orphan].clone()));
        }

        let mut tree = Self {
            space,
            classes,
            root,
            nodes,
            node_names,
            parent,
            leaves: Vec::new(),
            path_names: BTreeMap::new(),
        };
        tree.index_leaves()?;
        Ok(tree)
    }

    /// Collects leaves left to right, rejecting paths whose aggregated
    /// literal on some feature is empty, and assigns path names.
    fn index_leaves(&mut self) -> Result<()> {
        let mut domains: Vec<ValueSet> = (0..self.space.len())
            .map(|i| ValueSet::full(self.space.domain_size(i)))
            .collect();
        let mut leaves = Vec::new();
        self.collect_leaves(self.root, &mut domains, &mut leaves)?;

        let mut per_class = vec![0usize; self.classes.len()];
        let binary = self.classes.len() == 2;
        for &leaf in &leaves {
            let class = self.leaf_class(leaf).unwrap();
            per_class[class] += 1;
            let k = per_class[class];
            let name = match (binary, class) {
                (true, 1) => format!("P{k}"),
                (true, _) => format!("Q{k}"),
                (false, c) => format!("C{c}_{k}"),
            };
            self.path_names.insert(leaf, name);
        }
        self.leaves = leaves;
        Ok(())
    }

    fn collect_leaves(
        &self,
        node: NodeId,
        domains: &mut [ValueSet],
        out: &mut Vec<NodeId>,
    ) -> Result<()> {
        match &self.nodes[node] {
            Node::Leaf { .. } => out.push(node),
            Node::Internal { feature, edges } => {
                for edge in edges {
                    let narrowed = domains[*feature].intersection(&edge.values);
                    if narrowed.is_empty() {
                        return Err(Error::EmptyPath(self.node_names[edge.child].clone()));
                    }
                    let saved = std::mem::replace(&mut domains[*feature], narrowed);
                    self.collect_leaves(edge.child, domains, out)?;
                    domains[*feature] = saved;
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn class_index(&self, name: &str) -> Option<ClassId> {
        self.classes.iter().position(|c| c == name)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.node_names[id]
    }

    /// Total number of nodes `|T|`.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    pub fn leaf_class(&self, id: NodeId) -> Option<ClassId> {
        match self.nodes[id] {
            Node::Leaf { class } => Some(class),
            Node::Internal { .. } => None,
        }
    }

    pub fn parent(&self, id: NodeId) -> Option<PathStep> {
        self.parent[id]
    }

    /// Maximum number of internal nodes on a root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.leaves
            .iter()
            .map(|&leaf| self.steps_to(leaf).len())
            .max()
            .unwrap_or(0)
    }

    fn steps_to(&self, leaf: NodeId) -> Vec<PathStep> {
        let mut steps = Vec::new();
        let mut cur = leaf;
        while let Some(step) = self.parent[cur] {
            steps.push(step);
            cur = step.node;
        }
        steps.reverse();
        steps
    }

    /// The path ending at `leaf`.
    pub fn path_to(&self, leaf: NodeId) -> TreePath {
        let prediction = self.leaf_class(leaf).expect("path_to needs a leaf");
        let steps = self.steps_to(leaf);
        let mut node_counts = BTreeMap::new();
        let lits = steps.iter().map(|s| {
            let (feature, edge) = self.step_edge(*s);
            *node_counts.entry(feature).or_insert(0) += 1;
            Literal {
                feature,
                allowed: edge.values.clone(),
            }
        });
        let literals: Vec<_> = lits.collect();
        let literals = LiteralSet::new(literals).expect("validated trees have consistent paths");
        TreePath {
            name: self.path_names[&leaf].clone(),
            leaf,
            steps,
            literals,
            prediction,
            node_counts,
        }
    }

    /// Feature tested at a path step and the edge taken there.
    pub fn step_edge(&self, step: PathStep) -> (FeatureId, &Edge) {
        match &self.nodes[step.node] {
            Node::Internal { feature, edges } => (*feature, &edges[step.edge]),
            Node::Leaf { .. } => panic!("path step on a leaf"),
        }
    }

    /// All root-to-leaf paths in left-to-right leaf order.
    pub fn paths(&self) -> Vec<TreePath> {
        self.leaves.iter().map(|&l| self.path_to(l)).collect()
    }

    pub fn path_by_name(&self, name: &str) -> Result<TreePath> {
        self.path_names
            .iter()
            .find(|(_, n)| n.as_str() == name)
            .map(|(&leaf, _)| self.path_to(leaf))
            .ok_or_else(|| Error::UnknownPath(name.to_string()))
    }

    /// Confirms that `path` describes a path of this tree.
    pub fn check_path(&self, path: &TreePath) -> Result<()> {
        if path.leaf >= self.nodes.len()
            || self.leaf_class(path.leaf) != Some(path.prediction)
            || self.steps_to(path.leaf) != path.steps
            || self.path_names.get(&path.leaf) != Some(&path.name)
        {
            return Err(Error::PathNotInTree);
        }
        Ok(())
    }

    /// Leaf reached by a point given as raw value indices.
    pub fn leaf_for(&self, values: &[ValueId]) -> NodeId {
        let mut cur = self.root;
        loop {
            match &self.nodes[cur] {
                Node::Leaf { .. } => return cur,
                Node::Internal { feature, edges } => {
                    let v = values[*feature];
                    cur = edges
                        .iter()
                        .find(|e| e.values.contains(v))
                        .expect("edges cover the domain")
                        .child;
                }
            }
        }
    }

    pub fn predict(&self, instance: &Instance) -> ClassId {
        self.leaf_class(self.leaf_for(instance.values())).unwrap()
    }

    /// Predicted class and the unique path consistent with the instance.
    pub fn classify(&self, instance: &Instance) -> (ClassId, TreePath) {
        let path = self.path_to(self.leaf_for(instance.values()));
        (path.prediction, path)
    }
}

fn check_partition(space: &FeatureSpace, feature: FeatureId, edges: &[Edge], node: &str) -> Result<()> {
    let n = space.domain_size(feature);
    let f = space.feature(feature);
    let mut covered = ValueSet::empty(n);
    for edge in edges {
        if edge.values.is_empty() {
            return Err(Error::EmptyEdge(node.to_string()));
        }
        if let Some(v) = edge.values.intersection(&covered).iter().next() {
            return Err(Error::OverlappingEdges {
                node: node.to_string(),
                value: f.domain[v].clone(),
            });
        }
        covered.union_with(&edge.values);
    }
    if let Some(v) = covered.complement().iter().next() {
        return Err(Error::NonCoveringEdges {
            node: node.to_string(),
            value: f.domain[v].clone(),
        });
    }
    Ok(())
}

/// Splits paths by predicted class; entry `c` holds the paths predicting `c`.
pub fn partition_by_class<'p>(tree: &DecisionTree, paths: &'p [TreePath]) -> Vec<Vec<&'p TreePath>> {
    let mut out = vec![Vec::new(); tree.classes().len()];
    for p in paths {
        out[p.prediction].push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Feature;

    fn space(sizes: &[usize]) -> FeatureSpace {
        FeatureSpace::new(
            sizes
                .iter()
                .enumerate()
                .map(|(i, &n)| Feature {
                    name: format!("x{}", i + 1),
                    domain: (0..n).map(|v| v.to_string()).collect(),
                })
                .collect(),
        )
        .unwrap()
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("n{i}")).collect()
    }

    fn edge(n: usize, values: &[usize], child: NodeId) -> Edge {
        Edge {
            values: ValueSet::from_values(n, values.iter().copied()),
            child,
        }
    }

    fn classes() -> Vec<String> {
        vec!["0".into(), "1".into()]
    }

    #[test]
    fn repeated_feature_aggregates_by_intersection() {
        // x1 ∈ {0,1} then x1 = 0
        let nodes = vec![
            Node::Internal {
                feature: 0,
                edges: vec![edge(3, &[0, 1], 1), edge(3, &[2], 2)],
            },
            Node::Internal {
                feature: 0,
                edges: vec![edge(3, &[0], 3), edge(3, &[1, 2], 4)],
            },
            Node::Leaf { class: 0 },
            Node::Leaf { class: 1 },
            Node::Leaf { class: 0 },
        ];
        let tree = DecisionTree::new(space(&[3]), classes(), 0, nodes, names(5)).unwrap();
        let path = tree.path_to(3);
        assert_eq!(path.literals.len(), 1);
        assert_eq!(path.literals.get(0).unwrap().allowed, ValueSet::singleton(3, 0));
        assert_eq!(path.node_counts[&0], 2);
        assert_eq!(path.name, "P1");
    }

    #[test]
    fn empty_aggregate_is_rejected() {
        let nodes = vec![
            Node::Internal {
                feature: 0,
                edges: vec![edge(2, &[0], 1), edge(2, &[1], 2)],
            },
            Node::Internal {
                feature: 0,
                edges: vec![edge(2, &[0], 3), edge(2, &[1], 4)],
            },
            Node::Leaf { class: 0 },
            Node::Leaf { class: 1 },
            Node::Leaf { class: 0 },
        ];
        assert_eq!(
            DecisionTree::new(space(&[2]), classes(), 0, nodes, names(5)),
            Err(Error::EmptyPath("n4".into()))
        );
    }

    #[test]
    fn structural_errors() {
        let leaf = Node::Leaf { class: 0 };
        let two_parents = vec![
            Node::Internal {
                feature: 0,
                edges: vec![edge(2, &[0], 1), edge(2, &[1], 1)],
            },
            leaf.clone(),
        ];
        assert_eq!(
            DecisionTree::new(space(&[2]), classes(), 0, two_parents, names(2)),
            Err(Error::MultipleParents("n1".into()))
        );

        let detached_cycle = vec![
            leaf.clone(),
            Node::Internal {
                feature: 0,
                edges: vec![edge(2, &[0], 2), edge(2, &[1], 3)],
            },
            Node::Internal {
                feature: 0,
                edges: vec![edge(2, &[0], 1), edge(2, &[1], 4)],
            },
            leaf.clone(),
            leaf.clone(),
        ];
        assert!(matches!(
            DecisionTree::new(space(&[2]), classes(), 0, detached_cycle, names(5)),
            Err(Error::Cycle(_))
        ));

        let orphan = vec![leaf.clone(), leaf.clone()];
        assert_eq!(
            DecisionTree::new(space(&[2]), classes(), 0, orphan, names(2)),
            Err(Error::Unreachable("n1".into()))
        );

        let back_to_root = vec![Node::Internal {
            feature: 0,
            edges: vec![edge(2, &[0], 0), edge(2, &[1], 0)],
        }];
        assert!(matches!(
            DecisionTree::new(space(&[2]), classes(), 0, back_to_root, names(1)),
            Err(Error::Cycle(_))
        ));
    }

    #[test]
    fn partition_errors() {
        let mk = |edges| {
            DecisionTree::new(
                space(&[3]),
                classes(),
                0,
                vec![
                    Node::Internal { feature: 0, edges },
                    Node::Leaf { class: 0 },
                    Node::Leaf { class: 1 },
                ],
                names(3),
            )
        };
        assert!(matches!(
            mk(vec![edge(3, &[0], 1), edge(3, &[1], 2)]),
            Err(Error::NonCoveringEdges { .. })
        ));
        assert!(matches!(
            mk(vec![edge(3, &[0, 1], 1), edge(3, &[1, 2], 2)]),
            Err(Error::OverlappingEdges { .. })
        ));
        assert!(matches!(
            mk(vec![edge(3, &[0, 1, 2], 1), edge(3, &[], 2)]),
            Err(Error::EmptyEdge(_))
        ));
    }

    #[test]
    fn single_leaf_tree() {
        let tree = DecisionTree::new(
            FeatureSpace::default(),
            vec!["yes".into()],
            0,
            vec![Node::Leaf { class: 0 }],
            names(1),
        )
        .unwrap();
        let paths = tree.paths();
        assert_eq!(paths.len(), 1);
        assert!(paths[0].literals.is_empty());
        assert_eq!(tree.depth(), 0);
        let inst = Instance::new(tree.space(), vec![]).unwrap();
        assert_eq!(tree.classify(&inst).0, 0);
    }

    #[test]
    fn foreign_path_is_rejected() {
        let nodes = vec![
            Node::Internal {
                feature: 0,
                edges: vec![edge(2, &[0], 1), edge(2, &[1], 2)],
            },
            Node::Leaf { class: 0 },
            Node::Leaf { class: 1 },
        ];
        let tree = DecisionTree::new(space(&[2]), classes(), 0, nodes, names(3)).unwrap();
        let mut path = tree.path_to(2);
        assert!(tree.check_path(&path).is_ok());
        path.steps[0].edge = 0;
        assert_eq!(tree.check_path(&path), Err(Error::PathNotInTree));
    }
}
