//! Explanation redundancy in categorical decision trees.
//!
//! A tree's root-to-leaf paths are read as conjunctions of literals
//! `x ∈ S`. This crate decides whether a path carries literals that can be
//! dropped without changing the prediction, extracts one subset-minimal
//! sufficient explanation (a PI-explanation) in polynomial time, enumerates
//! all of them through minimal hitting sets, and checks everything against
//! a brute-force oracle on small feature spaces.

pub mod count;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod literal;
pub mod metrics;
pub mod mhs;
pub mod oracle;
pub mod random;
pub mod space;
pub mod tree;
pub mod xplain;

pub use count::path_point_count;
pub use error::{Error, Result};
pub use format::{literals_from_json, literals_to_json, load_tree, parse_instance_json, parse_instances_csv, parse_tree, tree_to_json};
pub use literal::{Literal, LiteralSet, ValueSet};
pub use metrics::{batch_report, tree_report, BatchReport, TreeReport};
pub use mhs::{build_hitting_sets, enumerate_mhs, enumerate_pi_explanations, HittingSetInstance, Target};
pub use oracle::{bf_entails, bf_enumerate_pi, bf_is_redundant, Oracle, OracleBudget};
pub use space::{Feature, FeatureId, FeatureSpace, Instance, ValueId};
pub use tree::{ClassId, DecisionTree, Edge, Node, NodeId, TreePath};
pub use xplain::{
    entails, is_minimal_explanation, is_path_redundant, one_pi_explanation_instance, one_pi_explanation_path,
    Explanation, Mode, Redundancy, Source,
};
