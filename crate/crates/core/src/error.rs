use thiserror::Error;

/// Everything that can go wrong while loading trees or analysing them.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed tree file: {0}")]
    Schema(String),
    #[error("feature `{0}` is declared more than once")]
    DuplicateFeature(String),
    #[error("feature `{feature}` lists value `{value}` more than once")]
    DuplicateValue { feature: String, value: String },
    #[error("feature `{0}` needs at least two domain values")]
    DomainTooSmall(String),
    #[error("class `{0}` is declared more than once")]
    DuplicateClass(String),
    #[error("tree declares no classes")]
    NoClasses,
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("unknown value `{value}` for feature `{feature}`")]
    UnknownValue { feature: String, value: String },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("node `{node}`: unsupported literal kind `{op}`")]
    UnsupportedLiteral { node: String, op: String },
    #[error("node `{0}` has an edge with no values")]
    EmptyEdge(String),
    #[error("node `{node}`: non-disjoint edges (value `{value}` appears twice)")]
    OverlappingEdges { node: String, value: String },
    #[error("node `{node}`: non-covering edges (value `{value}` has no edge)")]
    NonCoveringEdges { node: String, value: String },
    #[error("node `{node}` points to dangling child `{child}`")]
    DanglingChild { node: String, child: String },
    #[error("root node `{0}` does not exist")]
    UnknownRoot(String),
    #[error("cycle through node `{0}`")]
    Cycle(String),
    #[error("node `{0}` has more than one parent")]
    MultipleParents(String),
    #[error("node `{0}` is not reachable from the root")]
    Unreachable(String),
    #[error("path to leaf `{0}` constrains a feature to an empty value set")]
    EmptyPath(String),
    #[error("instance has {got} values, feature space has {expected} features")]
    InstanceLength { expected: usize, got: usize },
    #[error("malformed instance: {0}")]
    Instance(String),
    #[error("literals on feature #{0} are inconsistent")]
    InconsistentLiterals(crate::space::FeatureId),
    #[error("path does not belong to this tree")]
    PathNotInTree,
    #[error("no path named `{0}`")]
    UnknownPath(String),
    #[error("{0}")]
    ModeSource(&'static str),
    #[error("contrary path {0} is consistent with the explained source")]
    EmptyHittingSet(String),
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
