//! Explanation-redundancy of tree paths and extraction of one
//! PI-explanation per path or per instance.
//!
//! All procedures share one primitive: a downward search from some node
//! for a leaf of a different class that is reachable by a point satisfying
//! the current per-feature allowed sets. A feature is *universal* when its
//! allowed set is its whole domain. Along the search, each edge narrows the
//! tested feature's allowed set to the edge's values, so repeated tests of
//! a feature are handled exactly.

use crate::error::Result;
use crate::literal::{LiteralSet, ValueSet};
use crate::space::{FeatureId, FeatureSpace, Instance};
use crate::tree::{ClassId, DecisionTree, Node, NodeId, TreePath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Candidate literals are those of the tree path.
    PathRestricted,
    /// Candidate literals are the equality literals of the instance.
    PathUnrestricted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Path(String),
    Instance(Instance),
}

/// A set of literals claimed to entail `class`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub literals: LiteralSet,
    pub class: ClassId,
    pub mode: Mode,
    pub source: Source,
    /// Set when the literal set is known to be subset-minimal.
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureState {
    Constrained(ValueSet),
    Universal,
}

/// Per-feature working state: either fixed to an allowed set or universal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalSet {
    states: Vec<FeatureState>,
}

impl UniversalSet {
    /// Features with a literal are constrained to it, all others universal.
    pub fn from_literals(space: &FeatureSpace, literals: &LiteralSet) -> Self {
        let states = (0..space.len())
            .map(|f| match literals.get(f) {
                Some(l) => FeatureState::Constrained(l.allowed.clone()),
                None => FeatureState::Universal,
            })
            .collect();
        Self { states }
    }

    pub fn is_universal(&self, feature: FeatureId) -> bool {
        matches!(self.states[feature], FeatureState::Universal)
    }

    pub fn set_universal(&mut self, feature: FeatureId) {
        self.states[feature] = FeatureState::Universal;
    }

    pub fn state(&self, feature: FeatureId) -> &FeatureState {
        &self.states[feature]
    }

    fn domains(&self, space: &FeatureSpace) -> Vec<ValueSet> {
        self.states
            .iter()
            .enumerate()
            .map(|(f, s)| match s {
                FeatureState::Constrained(v) => v.clone(),
                FeatureState::Universal => ValueSet::full(space.domain_size(f)),
            })
            .collect()
    }
}

/// Node markers for the filtered search, plus a count of examined nodes.
#[derive(Debug, Clone)]
pub struct Visited {
    marks: Vec<bool>,
    examined: usize,
}

impl Visited {
    pub fn new(tree: &DecisionTree) -> Self {
        Self {
            marks: vec![false; tree.node_count()],
            examined: 0,
        }
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.marks[node]
    }

    /// Nodes examined so far (path nodes analysed plus sub-path nodes).
    pub fn examined(&self) -> usize {
        self.examined
    }
}

struct SubPathSearch<'a> {
    tree: &'a DecisionTree,
    target: ClassId,
    /// When false, nodes already examined are skipped.
    rec: bool,
    visited: &'a mut Visited,
}

impl SubPathSearch<'_> {
    /// True iff some leaf below `node` with a class other than the target
    /// is reachable under `domains`.
    fn descend(&mut self, node: NodeId, domains: &mut [ValueSet]) -> bool {
        if !self.rec {
            if self.visited.marks[node] {
                return false;
            }
            self.visited.marks[node] = true;
        }
        self.visited.examined += 1;
        match self.tree.node(node) {
            Node::Leaf { class } => *class != self.target,
            Node::Internal { feature, edges } => {
                for edge in edges {
                    if self.follow(*feature, &edge.values, edge.child, domains) {
                        return true;
                    }
                }
                false
            }
        }
    }

    fn follow(&mut self, feature: FeatureId, values: &ValueSet, child: NodeId, domains: &mut [ValueSet]) -> bool {
        let narrowed = domains[feature].intersection(values);
        if narrowed.is_empty() {
            return false;
        }
        let saved = std::mem::replace(&mut domains[feature], narrowed);
        let hit = self.descend(child, domains);
        domains[feature] = saved;
        hit
    }

    /// Searches the children of a path node that lie off the path.
    fn off_path(&mut self, path: &TreePath, step: usize, domains: &mut [ValueSet]) -> bool {
        let s = path.steps[step];
        let Node::Internal { feature, edges } = self.tree.node(s.node) else {
            unreachable!("path steps are internal nodes")
        };
        edges
            .iter()
            .enumerate()
            .filter(|(e, _)| *e != s.edge)
            .any(|(_, edge)| self.follow(*feature, &edge.values, edge.child, domains))
    }
}

/// Inconsistent sub-path lookup: is there a leaf below `node` predicting
/// something other than `target` that stays consistent with `universals`?
///
/// With `rec == false`, nodes already marked in `visited` are skipped and
/// newly examined nodes are marked; with `rec == true` every sub-path is
/// examined.
pub fn chk_down(
    tree: &DecisionTree,
    node: NodeId,
    target: ClassId,
    universals: &UniversalSet,
    rec: bool,
    visited: &mut Visited,
) -> bool {
    let mut domains = universals.domains(tree.space());
    SubPathSearch {
        tree,
        target,
        rec,
        visited,
    }
    .descend(node, &mut domains)
}

/// Does fixing `literals` force every completion to be classified `class`?
///
/// A single pruned traversal from the root: edges disjoint from the
/// allowed set of their feature are cut, and any surviving leaf of another
/// class is a counterexample.
pub fn entails(tree: &DecisionTree, literals: &LiteralSet, class: ClassId) -> bool {
    let mut visited = Visited::new(tree);
    let mut domains = literals.domains(tree.space());
    !SubPathSearch {
        tree,
        target: class,
        rec: true,
        visited: &mut visited,
    }
    .descend(tree.root(), &mut domains)
}

/// `literals` entails `class` and no literal can be dropped.
pub fn is_minimal_explanation(tree: &DecisionTree, literals: &LiteralSet, class: ClassId) -> bool {
    entails(tree, literals, class)
        && literals
            .features()
            .all(|f| !entails(tree, &literals.without(f), class))
}

/// Outcome of the linear-time redundancy test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redundancy {
    pub redundant: bool,
    /// First droppable feature found, scanning the path bottom-up.
    pub witness: Option<FeatureId>,
    /// Node examinations spent, for checking the linear bound.
    pub examined: usize,
}

/// Decides whether the path's literal set strictly contains a
/// PI-explanation, i.e. whether some single feature of the path can be
/// made universal while every contrary leaf stays unreachable.
///
/// Path nodes are analysed deepest first. A feature tested several times
/// is declared droppable only once all of its nodes have been analysed.
/// Sub-path searches use node filtering, so each tree node is examined at
/// most once over the whole call.
pub fn is_path_redundant(tree: &DecisionTree, path: &TreePath) -> Result<Redundancy> {
    tree.check_path(path)?;
    let (droppable, examined) = scan_droppable(tree, path, true);
    Ok(Redundancy {
        redundant: !droppable.is_empty(),
        witness: droppable.first().copied(),
        examined,
    })
}

/// Every feature of the path that can individually be made universal, in
/// bottom-up decision order.
pub fn droppable_features(tree: &DecisionTree, path: &TreePath) -> Result<Vec<FeatureId>> {
    tree.check_path(path)?;
    Ok(scan_droppable(tree, path, false).0)
}

fn scan_droppable(tree: &DecisionTree, path: &TreePath, stop_at_first: bool) -> (Vec<FeatureId>, usize) {
    let space = tree.space();
    let features: Vec<FeatureId> = path.steps.iter().map(|&s| tree.step_edge(s).0).collect();

    // For each step, the tested feature's allowed set as narrowed by the
    // path edges above it (points reaching the node satisfy those edges).
    let mut upper = Vec::with_capacity(features.len());
    let mut running: Vec<ValueSet> = (0..space.len()).map(|f| ValueSet::full(space.domain_size(f))).collect();
    for (j, &s) in path.steps.iter().enumerate() {
        upper.push(running[features[j]].clone());
        running[features[j]].intersect_with(&tree.step_edge(s).1.values);
    }
    let first_step = |f: FeatureId| features.iter().position(|&g| g == f).unwrap();

    let mut visited = Visited::new(tree);
    let mut blocked = vec![false; space.len()];
    let mut droppable = Vec::new();
    let mut domains = path.literals.domains(space);
    for j in (0..features.len()).rev() {
        let f = features[j];
        if !blocked[f] {
            visited.examined += 1;
            let fixed = std::mem::replace(&mut domains[f], upper[j].clone());
            let found = SubPathSearch {
                tree,
                target: path.prediction,
                rec: false,
                visited: &mut visited,
            }
            .off_path(path, j, &mut domains);
            domains[f] = fixed;
            blocked[f] = found;
        }
        if first_step(f) == j && !blocked[f] {
            droppable.push(f);
            if stop_at_first {
                break;
            }
        }
    }
    (droppable, visited.examined)
}

/// Would making every feature flagged in `universal` free still leave all
/// contrary leaves unreachable from the path? Returns true if some
/// contrary leaf becomes reachable. Examines every sub-path hanging off a
/// universal feature's path node, without filtering.
fn contrary_reachable(tree: &DecisionTree, path: &TreePath, universal: &[bool]) -> bool {
    let space = tree.space();
    let mut domains: Vec<ValueSet> = (0..space.len())
        .map(|f| match path.literals.get(f) {
            Some(l) if !universal[f] => l.allowed.clone(),
            _ => ValueSet::full(space.domain_size(f)),
        })
        .collect();
    let mut visited = Visited::new(tree);
    for (j, &s) in path.steps.iter().enumerate() {
        let (f, edge) = tree.step_edge(s);
        if universal[f] {
            let found = SubPathSearch {
                tree,
                target: path.prediction,
                rec: true,
                visited: &mut visited,
            }
            .off_path(path, j, &mut domains);
            if found {
                return true;
            }
        }
        domains[f].intersect_with(&edge.values);
    }
    false
}

/// One path-restricted PI-explanation, by greedy elimination.
///
/// Features are tried deepest first (a repeated feature at its shallowest
/// node). A feature stays universal iff, together with the features
/// already granted, no contrary sub-path becomes consistent.
pub fn one_pi_explanation_path(tree: &DecisionTree, path: &TreePath) -> Result<Explanation> {
    tree.check_path(path)?;
    let mut order: Vec<FeatureId> = Vec::new();
    for &s in path.steps.iter().rev() {
        let f = tree.step_edge(s).0;
        order.retain(|&g| g != f);
        order.push(f);
    }

    let mut universal = vec![false; tree.space().len()];
    for f in order {
        universal[f] = true;
        if contrary_reachable(tree, path, &universal) {
            universal[f] = false;
        } else {
            debug_assert!(entails(
                tree,
                &path.literals.filtered(|l| !universal[l.feature]),
                path.prediction
            ));
        }
    }
    Ok(Explanation {
        literals: path.literals.filtered(|l| !universal[l.feature]),
        class: path.prediction,
        mode: Mode::PathRestricted,
        source: Source::Path(path.name.clone()),
        minimal: true,
    })
}

/// One path-unrestricted PI-explanation for an instance: start from its
/// equality literals and drop them greedily, highest feature index first.
pub fn one_pi_explanation_instance(tree: &DecisionTree, instance: &Instance) -> Explanation {
    let class = tree.predict(instance);
    let mut current = LiteralSet::from_instance(tree.space(), instance);
    for f in (0..tree.space().len()).rev() {
        let candidate = current.without(f);
        if entails(tree, &candidate, class) {
            current = candidate;
        }
    }
    Explanation {
        literals: current,
        class,
        mode: Mode::PathUnrestricted,
        source: Source::Instance(instance.clone()),
        minimal: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_tree;
    use crate::fixtures;
    use crate::literal::Literal;

    fn eqs(tree: &DecisionTree, pairs: &[(usize, usize)]) -> LiteralSet {
        LiteralSet::new(pairs.iter().map(|&(f, v)| Literal::equals(tree.space(), f, v))).unwrap()
    }

    #[test]
    fn chk_down_on_fig1b_p2() {
        let tree = parse_tree(fixtures::FIG1B).unwrap();
        let p2 = tree.path_by_name("P2").unwrap();
        let sibling = |step: usize| {
            let s = p2.steps[step];
            match tree.node(s.node) {
                Node::Internal { edges, .. } => edges[1 - s.edge].child,
                Node::Leaf { .. } => unreachable!(),
            }
        };
        // x4 universal: the x4=0 sibling is Q4
        let mut u = UniversalSet::from_literals(tree.space(), &p2.literals);
        u.set_universal(3);
        let mut visited = Visited::new(&tree);
        assert!(chk_down(&tree, sibling(3), 1, &u, false, &mut visited));

        // x2 universal: the x2=1 sibling is P3
        let mut u = UniversalSet::from_literals(tree.space(), &p2.literals);
        u.set_universal(1);
        assert!(!chk_down(&tree, sibling(1), 1, &u, false, &mut visited));

        // a leaf of the target class has no contrary sub-path
        let p3 = tree.path_by_name("P3").unwrap();
        assert!(!chk_down(&tree, p3.leaf, 1, &u, true, &mut visited));
    }

    #[test]
    fn filtered_search_skips_visited_nodes() {
        let tree = parse_tree(fixtures::FIG1B).unwrap();
        let u = UniversalSet::from_literals(tree.space(), &LiteralSet::empty());
        let mut visited = Visited::new(&tree);
        assert!(chk_down(&tree, tree.root(), 1, &u, false, &mut visited));
        let before = visited.examined();
        assert!(visited.contains(tree.root()));
        assert!(!chk_down(&tree, tree.root(), 1, &u, false, &mut visited));
        assert_eq!(visited.examined(), before);
        assert!(chk_down(&tree, tree.root(), 1, &u, true, &mut visited));
    }

    #[test]
    fn fig1b_redundancy() {
        let tree = parse_tree(fixtures::FIG1B).unwrap();
        let p2 = tree.path_by_name("P2").unwrap();
        let r = is_path_redundant(&tree, &p2).unwrap();
        assert!(r.redundant);
        assert_eq!(r.witness, Some(1));
        assert_eq!(droppable_features(&tree, &p2).unwrap(), vec![1, 0]);

        let p3 = tree.path_by_name("P3").unwrap();
        assert!(!is_path_redundant(&tree, &p3).unwrap().redundant);
    }

    #[test]
    fn fig1b_extraction() {
        let tree = parse_tree(fixtures::FIG1B).unwrap();
        let p2 = tree.path_by_name("P2").unwrap();
        let e = one_pi_explanation_path(&tree, &p2).unwrap();
        assert_eq!(e.literals, eqs(&tree, &[(2, 1), (3, 1)]));
        assert_eq!(e.mode, Mode::PathRestricted);
    }

    #[test]
    fn zhou_and_playtennis_extraction() {
        let zhou = parse_tree(fixtures::ZHOU).unwrap();
        let path = zhou
            .paths()
            .into_iter()
            .find(|p| p.literals == eqs(&zhou, &[(0, 0), (1, 1)]))
            .unwrap();
        let e = one_pi_explanation_path(&zhou, &path).unwrap();
        assert_eq!(e.literals, eqs(&zhou, &[(1, 1)]));

        let tennis = parse_tree(fixtures::PLAYTENNIS).unwrap();
        let path = tennis
            .paths()
            .into_iter()
            .find(|p| p.literals == eqs(&tennis, &[(0, 1), (1, 0)]))
            .unwrap();
        let e = one_pi_explanation_path(&tennis, &path).unwrap();
        assert_eq!(e.literals, eqs(&tennis, &[(1, 0)]));
    }

    #[test]
    fn irredundant_path_is_its_own_explanation() {
        let tree = parse_tree(fixtures::FIG1B).unwrap();
        let p3 = tree.path_by_name("P3").unwrap();
        assert_eq!(one_pi_explanation_path(&tree, &p3).unwrap().literals, p3.literals);
    }

    #[test]
    fn instance_extraction() {
        let fig3 = parse_tree(fixtures::FIG3).unwrap();
        let v = Instance::new(fig3.space(), vec![1, 1, 1, 1]).unwrap();
        let e = one_pi_explanation_instance(&fig3, &v);
        assert_eq!(e.literals, eqs(&fig3, &[(0, 1), (2, 1)]));

        let fig1a = parse_tree(fixtures::FIG1A).unwrap();
        let v = Instance::new(fig1a.space(), vec![0, 1]).unwrap();
        assert_eq!(one_pi_explanation_instance(&fig1a, &v).literals, eqs(&fig1a, &[(1, 1)]));

        let constant = parse_tree(fixtures::CONSTANT).unwrap();
        let v = Instance::new(constant.space(), vec![]).unwrap();
        assert!(one_pi_explanation_instance(&constant, &v).literals.is_empty());
    }

    #[test]
    fn entailment_examples() {
        let tree = parse_tree(fixtures::FIG1B).unwrap();
        assert!(entails(&tree, &eqs(&tree, &[(2, 1), (3, 1)]), 1));
        assert!(!entails(&tree, &eqs(&tree, &[(2, 1)]), 1));
        for p in tree.paths() {
            assert!(entails(&tree, &p.literals, p.prediction));
        }
        // the empty set entails only in a constant tree
        assert!(!entails(&tree, &LiteralSet::empty(), 1));
        let constant = parse_tree(fixtures::CONSTANT).unwrap();
        assert!(entails(&constant, &LiteralSet::empty(), 0));
    }

    #[test]
    fn foreign_path_is_an_error() {
        let a = parse_tree(fixtures::FIG1B).unwrap();
        let b = parse_tree(fixtures::FIG3).unwrap();
        let foreign = b.path_by_name("Q3").unwrap();
        assert!(is_path_redundant(&a, &foreign).is_err());
        assert!(one_pi_explanation_path(&a, &foreign).is_err());
    }
}
